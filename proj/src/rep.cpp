#include "covkit/rep.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace covkit {

Representation permutation_rep(const GroupPtr& group) {
  if (!group->has_images())
    fail_validation("permutation_rep: group has no permutation realization");
  Representation rep;
  rep.group = group;
  rep.dim = group->degree;
  rep.matrices.reserve(group->order);
  for (int g = 0; g < group->order; ++g) {
    Matrix u = Matrix::Zero(rep.dim, rep.dim);
    for (int x = 0; x < rep.dim; ++x) u(group->images[g][x], x) = 1.0;
    rep.matrices.push_back(std::move(u));
  }
  return rep;
}

Representation regular_rep(const GroupPtr& group) {
  Representation rep;
  rep.group = group;
  rep.dim = group->order;
  rep.matrices.reserve(group->order);
  for (int g = 0; g < group->order; ++g) {
    Matrix u = Matrix::Zero(rep.dim, rep.dim);
    for (int h = 0; h < rep.dim; ++h) u(group->mult(g, h), h) = 1.0;
    rep.matrices.push_back(std::move(u));
  }
  return rep;
}

Representation matrix_rep(const GroupPtr& group, std::vector<Matrix> matrices,
                          std::optional<Matrix> multiplier) {
  if (static_cast<int>(matrices.size()) != group->order)
    fail_validation("matrix_rep: one matrix per group element required");
  Representation rep;
  rep.group = group;
  rep.dim = static_cast<int>(matrices[0].rows());
  for (const Matrix& m : matrices)
    if (m.rows() != rep.dim || m.cols() != rep.dim)
      fail_validation("matrix_rep: matrices must be square of equal size");
  rep.matrices = std::move(matrices);
  if (multiplier) {
    if (multiplier->rows() != group->order || multiplier->cols() != group->order)
      fail_validation("matrix_rep: multiplier must be order x order");
    rep.multiplier = std::move(*multiplier);
  }
  return rep;
}

Matrix infer_multiplier(const FiniteGroup& group, const std::vector<Matrix>& u) {
  const int n = group.order;
  const int d = static_cast<int>(u[0].rows());
  Matrix m(n, n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      Complex val = (u[group.mult(g, h)] * (u[g] * u[h]).adjoint()).trace() /
                    static_cast<double>(d);
      double a = std::abs(val);
      if (a < 0.5)
        fail_validation("infer_multiplier: matrices do not satisfy a projective law");
      m(g, h) = val / a;
    }
  return m;
}

RepReport validate_representation(const Representation& rep) {
  RepReport report;
  const FiniteGroup& g = *rep.group;
  const Matrix id = Matrix::Identity(rep.dim, rep.dim);
  for (int a = 0; a < g.order; ++a)
    report.unitarity_defect = std::max(
        report.unitarity_defect, defect(rep(a).adjoint() * rep(a), id));
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      report.law_defect =
          std::max(report.law_defect,
                   defect(rep(g.mult(a, b)), rep.phase(a, b) * (rep(a) * rep(b))));
  if (rep.projective()) {
    const int e = g.identity;
    for (int a = 0; a < g.order; ++a) {
      report.multiplier_defect = std::max(
          report.multiplier_defect, std::abs(rep.phase(e, a) - Complex(1, 0)));
      report.multiplier_defect = std::max(
          report.multiplier_defect, std::abs(rep.phase(a, e) - Complex(1, 0)));
      for (int b = 0; b < g.order; ++b) {
        report.multiplier_defect =
            std::max(report.multiplier_defect,
                     std::abs(std::abs(rep.phase(a, b)) - 1.0));
        for (int c = 0; c < g.order; ++c) {
          // cocycle law m(a,b) m(ab,c) = m(a,bc) m(b,c)
          Complex lhs = rep.phase(a, b) * rep.phase(g.mult(a, b), c);
          Complex rhs = rep.phase(a, g.mult(b, c)) * rep.phase(b, c);
          report.multiplier_defect =
              std::max(report.multiplier_defect, std::abs(lhs - rhs));
        }
      }
    }
  }
  return report;
}

MultiplierAnalysis multiplier_order(const Representation& rep,
                                    const Tolerances& tol) {
  const FiniteGroup& g = *rep.group;
  const int n = g.order;
  MultiplierAnalysis ma;
  ma.rep_phase.assign(n, Complex(1, 0));
  if (!rep.projective()) {
    ma.p = 1;
    ma.t = Complex(1, 0);
    ma.exponent = Eigen::MatrixXi::Zero(n, n);
    ma.adjusted = Matrix::Ones(n, n);
    return ma;
  }
  const Matrix& m = rep.multiplier;
  // t(g) = prod_h m(g,h); then m(g,h)^n = t(g) t(h) / t(gh) exactly, so the
  // phase adjustment by arg(t)/n leaves exact n-th roots of unity.
  std::vector<double> phi(n);
  for (int a = 0; a < n; ++a) {
    Complex t(1, 0);
    for (int b = 0; b < n; ++b) t *= m(a, b);
    phi[a] = std::arg(t) / n;
  }
  Matrix prime(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double ang = phi[g.mult(a, b)] - phi[a] - phi[b];
      prime(a, b) = std::polar(1.0, ang) * m(a, b);
    }
  const Complex norm = prime(g.identity, g.identity);
  // Snap to exact n-th roots of unity and record the residual.
  Eigen::MatrixXi root(n, n);
  int exponent_gcd = n;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex v = prime(a, b) / norm;
      double ang = std::arg(v);
      if (ang < 0) ang += two_pi;
      int q = static_cast<int>(std::lround(ang / two_pi * n)) % n;
      ma.snap_defect = std::max(
          ma.snap_defect, std::abs(v - std::polar(1.0, two_pi * q / n)));
      root(a, b) = q;
      exponent_gcd = std::gcd(exponent_gcd, q);
    }
  if (ma.snap_defect > 1e4 * tol.unit)
    fail_numerical("multiplier_order: adjusted multiplier is not close to roots of unity (defect " +
                   std::to_string(ma.snap_defect) + ")");
  ma.p = n / exponent_gcd;
  ma.t = std::polar(1.0, two_pi / ma.p);
  ma.exponent.resize(n, n);
  ma.adjusted.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      ma.exponent(a, b) = root(a, b) / exponent_gcd;
      ma.adjusted(a, b) = std::pow(ma.t, ma.exponent(a, b));
    }
  // U_adj(g) = beta(g) U(g) with beta(g) = norm * e^{i phi(g)} carries exactly
  // the adjusted multiplier.
  const Complex cnorm = norm / std::abs(norm);
  for (int a = 0; a < n; ++a)
    ma.rep_phase[a] = cnorm * std::polar(1.0, phi[a]);
  return ma;
}

Representation adjusted_rep(const Representation& rep,
                            const MultiplierAnalysis& ma) {
  Representation out;
  out.group = rep.group;
  out.dim = rep.dim;
  out.matrices.reserve(rep.matrices.size());
  for (int g = 0; g < rep.group->order; ++g)
    out.matrices.push_back(ma.rep_phase[g] * rep(g));
  if (ma.p > 1) out.multiplier = ma.adjusted;
  return out;
}

CentralExtension central_extension(const GroupPtr& group,
                                   const MultiplierAnalysis& ma) {
  CentralExtension ext;
  ext.base = group;
  ext.p = ma.p;
  const int n = group->order, p = ma.p, np = n * p;
  auto gm = std::make_shared<FiniteGroup>();
  gm->order = np;
  gm->identity = group->identity * p;
  gm->table.resize(static_cast<std::size_t>(np) * np);
  gm->labels.reserve(np);
  for (int g = 0; g < n; ++g)
    for (int k = 0; k < p; ++k)
      gm->labels.push_back(p == 1 ? group->label(g)
                                  : group->label(g) + "*t^" + std::to_string(k));
  for (int i = 0; i < np; ++i) {
    int g = i / p, k = i % p;
    for (int j = 0; j < np; ++j) {
      int h = j / p, l = j % p;
      // (g,t^k)(h,t^l) = (gh, conj(m(g,h)) t^{k+l}); conj(t^q) = t^{-q}
      int q = ma.p == 1 ? 0 : ma.exponent(g, h);
      int kk = ((k + l - q) % p + p) % p;
      gm->table[static_cast<std::size_t>(i) * np + j] = group->mult(g, h) * p + kk;
    }
  }
  // inverses + axioms
  gm->inverse.assign(np, -1);
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < np; ++b)
      if (gm->table[static_cast<std::size_t>(a) * np + b] == gm->identity) {
        gm->inverse[a] = b;
        break;
      }
  check_group_axioms(*gm);
  ext.extended = gm;
  return ext;
}

Representation lift_rep(const CentralExtension& ext, const Representation& rep,
                        const MultiplierAnalysis& ma) {
  Representation adj = adjusted_rep(rep, ma);
  Representation out;
  out.group = ext.extended;
  out.dim = rep.dim;
  out.matrices.reserve(ext.extended->order);
  for (int i = 0; i < ext.extended->order; ++i) {
    int g = ext.parent_of(i), k = ext.power_of(i);
    out.matrices.push_back(std::pow(ma.t, k) * adj(g));
  }
  return out;
}

GSpace lift_space(const CentralExtension& ext, const GSpace& space) {
  const int np = ext.extended->order;
  std::vector<int> action(static_cast<std::size_t>(np) * space.num_points);
  for (int i = 0; i < np; ++i) {
    int g = ext.parent_of(i);
    for (int x = 0; x < space.num_points; ++x)
      action[static_cast<std::size_t>(i) * space.num_points + x] = space.act(g, x);
  }
  GSpace s = make_gspace(ext.extended, std::move(action), space.policy, false);
  s.power = space.power;
  s.base_points = space.base_points;
  return s;
}

}  // namespace covkit
