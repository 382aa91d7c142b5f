#include "covkit/naimark.hpp"

#include <cmath>
#include <sstream>

#include "covkit/error.hpp"
#include "covkit/system.hpp"

namespace covkit {

namespace {

constexpr int kSymMaterializeLimit = 5;  // 5! = 120 permutations

// Composition in one-line form for permutations acting on basis labels:
// (a o b)(j) = a[b[j]], matching vbar(a) vbar(b) = vbar(a o b).
std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[b[j]];
  return out;
}

void check_permutation(const std::vector<int>& pi, int n) {
  if (static_cast<int>(pi.size()) != n)
    fail_validation("permutation has size " + std::to_string(pi.size()) +
                    ", expected " + std::to_string(n));
  std::vector<bool> seen(n, false);
  for (int v : pi) {
    if (v < 0 || v >= n || seen[v])
      fail_validation("not a permutation of 0.." + std::to_string(n - 1));
    seen[v] = true;
  }
}

}  // namespace

int RefinedPOVM::point(int orbit, int g) const {
  const int n = parent.system->group()->order;
  if (orbit < 0 || orbit >= parent.system->num_orbits() || g < 0 || g >= n)
    fail_validation("refined outcome (" + std::to_string(orbit) + "," +
                    std::to_string(g) + ") out of range");
  return orbit * n + g;
}

RefinedPOVM refine(const CovariantPOVM& p) {
  if (!p.system) fail_validation("refine: observable has no system");
  const SystemContext& sys = *p.system;
  const Tolerances& tol = sys.tol();
  const Representation& u = sys.rep();
  const GSpace& sp = sys.space();
  const int n = sys.group()->order;
  const int norb = sys.num_orbits();
  if (static_cast<int>(p.seeds.size()) != norb)
    fail_validation("refine: observable carries no seed decomposition");

  // Seed vectors: each kernel must be a rank-1 projector scaled by its
  // weight, or vanish entirely. Rank is judged against the largest orbit.
  std::vector<EigResult> eigs;
  double global_max = 0;
  for (int o = 0; o < norb; ++o) {
    eigs.push_back(hermitian_eig(hermitize(p.seeds[o].k)));
    global_max = std::max(global_max, eigs.back().values.maxCoeff());
  }
  if (global_max <= 0)
    fail_validation("refine: the zero observable cannot be refined");

  RefinedPOVM out;
  out.parent = p;
  out.d.resize(norb);
  out.zero_orbit.resize(norb);
  std::vector<Seed> seeds(norb);
  for (int o = 0; o < norb; ++o) {
    const RealVector& lam = eigs[o].values;
    const Eigen::Index top = lam.size() - 1;
    if (lam(0) < -tol.psd * std::max(1.0, global_max))
      fail_validation("refine: seed for orbit " + std::to_string(o) +
                      " is not positive semidefinite");
    if (lam(top) <= tol.rank_cutoff * global_max) {
      out.zero_orbit[o] = true;
      out.d[o] = Vector::Zero(sys.dim());
    } else {
      if (top > 0 && lam(top - 1) > tol.rank_cutoff * lam(top)) {
        std::ostringstream os;
        os << "refine: seed for orbit " << o
           << " is not rank-1 (second eigenvalue " << lam(top - 1) << ")";
        fail_validation(os.str());
      }
      Vector d = std::sqrt(lam(top)) * eigs[o].vectors.col(top);
      for (Eigen::Index j = 0; j < d.size(); ++j) {
        if (std::abs(d(j)) > 1e-8 * d.norm()) {
          d *= std::conj(d(j)) / std::abs(d(j));  // reproducible phase
          break;
        }
      }
      out.zero_orbit[o] = false;
      out.d[o] = d;
    }
    const double weight = sys.stabilizer_order(o);
    seeds[o] = {o, out.d[o] * out.d[o].adjoint() / weight};
  }

  // The orbit-resolved space: #Orb free orbits under left translation.
  std::vector<int> action(static_cast<std::size_t>(n) * norb * n);
  for (int a = 0; a < n; ++a)
    for (int o = 0; o < norb; ++o)
      for (int g = 0; g < n; ++g)
        action[static_cast<std::size_t>(a) * norb * n + o * n + g] =
            o * n + sys.group()->mult(a, g);
  SystemPtr rsys = make_system(
      make_gspace(sys.group(), std::move(action), sp.policy), u, tol,
      sys.seed());
  out.refined = build_from_seeds(rsys, std::move(seeds));
  for (int o = 0; o < norb; ++o)
    for (int g = 0; g < n; ++g) out.labels.push_back({o, g});

  for (int x = 0; x < sp.num_points; ++x) {
    const int o = sp.orbit_of[x];
    Matrix sum = Matrix::Zero(sys.dim(), sys.dim());
    for (int h : sp.stabilizer[o]) {
      const Matrix& part =
          out.refined.effects[o * n + sys.group()->mult(sp.section[x], h)];
      out.coset_defect = std::max(
          out.coset_defect,
          frobenius(part - p.effects[x] / double(sp.stabilizer[o].size())));
      sum += part;
    }
    out.post_processing_defect =
        std::max(out.post_processing_defect, frobenius(sum - p.effects[x]));
  }
  return out;
}

Matrix NaimarkBundle::q(int orbit, int g) const {
  const int i = refined.point(orbit, g);
  Matrix out = Matrix::Zero(dim, dim);
  out(i, i) = 1;
  return out;
}

NaimarkBundle dilate(const RefinedPOVM& refined) {
  if (!refined.parent.system || !refined.refined.system)
    fail_validation("dilate: refinement has no system");
  const SystemContext& sys = *refined.parent.system;
  const Representation& u = sys.rep();
  const GroupPtr& group = sys.group();
  const int n = group->order;
  const int norb = sys.num_orbits();
  const int dim = norb * n;

  NaimarkBundle b;
  b.refined = refined;
  b.dim = dim;
  b.labels = refined.labels;
  b.j = Matrix::Zero(dim, sys.dim());
  for (int o = 0; o < norb; ++o) {
    const double w = 1.0 / std::sqrt(double(sys.stabilizer_order(o)));
    for (int g = 0; g < n; ++g)
      b.j.row(o * n + g) = w * (u(g) * refined.d[o]).adjoint();
  }

  std::vector<Matrix> vmats(n, Matrix::Zero(dim, dim));
  for (int a = 0; a < n; ++a)
    for (int o = 0; o < norb; ++o)
      for (int g = 0; g < n; ++g)
        vmats[a](o * n + group->mult(a, g), o * n + g) =
            std::conj(u.phase(a, g));
  b.v = u.projective() ? matrix_rep(group, std::move(vmats), u.multiplier)
                       : matrix_rep(group, std::move(vmats));

  for (int i = 0; i < dim; ++i) {
    const Matrix back = b.j.row(i).adjoint() * b.j.row(i);
    b.reproduction_defect = std::max(
        b.reproduction_defect, frobenius(back - refined.refined.effects[i]));
  }
  const Matrix gram = b.j.adjoint() * b.j;
  b.gram_defect = frobenius(gram - refined.parent.normalizer());
  b.isometry_defect = defect(gram, Matrix::Identity(sys.dim(), sys.dim()));
  for (int a = 0; a < n; ++a)
    b.intertwining_defect =
        std::max(b.intertwining_defect, frobenius(b.v(a) * b.j - b.j * u(a)));

  const RepReport vrep = validate_representation(b.v);
  b.v_law_defect = std::max({vrep.law_defect, vrep.unitarity_defect,
                             vrep.multiplier_defect});

  for (int a = 0; a < n; ++a)
    for (int o = 0; o < norb; ++o)
      for (int g = 0; g < n; ++g) {
        const Matrix lhs = b.q(o, group->mult(a, g));
        const Matrix rhs = b.v(a) * b.q(o, g) * b.v(a).adjoint();
        b.q_covariance_defect =
            std::max(b.q_covariance_defect, frobenius(lhs - rhs));
      }

  b.minimal = true;
  for (bool z : refined.zero_orbit) b.minimal = b.minimal && !z;
  return b;
}

NaimarkBundle trivialize_multiplier(const NaimarkBundle& bundle,
                                    const MultiplierAnalysis& analysis) {
  const CovariantPOVM& parent = bundle.refined.parent;
  if (!parent.system) fail_validation("trivialize_multiplier: empty bundle");
  const SystemContext& sys = *parent.system;
  const CentralExtension ext = central_extension(sys.group(), analysis);
  SystemPtr lifted = make_system(lift_space(ext, sys.space()),
                                 lift_rep(ext, sys.rep(), analysis), sys.tol(),
                                 sys.seed());
  return dilate(refine(build_from_seeds(lifted, parent.seeds)));
}

Matrix SymEmbedding::evaluate(const std::vector<int>& pi) const {
  check_permutation(pi, group_order);
  Matrix out = Matrix::Zero(num_orbits * group_order, num_orbits * group_order);
  for (int o = 0; o < num_orbits; ++o)
    for (int g = 0; g < group_order; ++g)
      out(o * group_order + pi[g], o * group_order + g) = 1;
  return out;
}

SymEmbedding embed_in_sym(const NaimarkBundle& bundle, bool allow_on_demand) {
  if (!bundle.refined.parent.system)
    fail_validation("embed_in_sym: empty bundle");
  const SystemContext& sys = *bundle.refined.parent.system;
  const Tolerances& tol = sys.tol();
  if (bundle.v.projective()) {
    double dev = 0;
    for (int a = 0; a < bundle.v.group->order; ++a)
      for (int g = 0; g < bundle.v.group->order; ++g)
        dev = std::max(dev, std::abs(bundle.v.multiplier(a, g) - Complex(1, 0)));
    if (dev > tol.unit)
      fail_validation(
          "embed_in_sym: the multiplier is not trivial; extend the group "
          "through the central extension first");
  }
  const GroupPtr& group = sys.group();
  const int n = group->order;

  SymEmbedding e;
  e.num_orbits = sys.num_orbits();
  e.group_order = n;
  e.translations.resize(n);
  for (int g = 0; g < n; ++g) {
    e.translations[g].resize(n);
    for (int j = 0; j < n; ++j) e.translations[g][j] = group->mult(g, j);
  }

  for (int g = 0; g < n; ++g)
    e.restriction_defect = std::max(
        e.restriction_defect, frobenius(e.evaluate(e.translations[g]) -
                                        bundle.v(g)));

  std::vector<std::vector<int>> gens;
  for (int k = 0; k + 1 < n; ++k) {
    std::vector<int> tau(n);
    for (int j = 0; j < n; ++j) tau[j] = j;
    std::swap(tau[k], tau[k + 1]);
    gens.push_back(std::move(tau));
  }
  for (const auto& pi : gens) {
    const Matrix ev = e.evaluate(pi);
    for (int o = 0; o < e.num_orbits; ++o)
      for (int g = 0; g < n; ++g)
        e.q_covariance_defect = std::max(
            e.q_covariance_defect,
            frobenius(bundle.q(o, pi[g]) -
                      ev * bundle.q(o, g) * ev.adjoint()));
  }

  if (n <= kSymMaterializeLimit) {
    e.materialized = true;
    e.sym = symmetric_group(n);
    std::vector<Matrix> mats;
    mats.reserve(e.sym->order);
    for (int s = 0; s < e.sym->order; ++s)
      mats.push_back(e.evaluate(e.sym->images[s]));
    e.v_bar = matrix_rep(e.sym, std::move(mats));
    const RepReport rep = validate_representation(e.v_bar);
    e.law_defect = std::max(rep.law_defect, rep.unitarity_defect);
    e.numbering.resize(n, -1);
    for (int g = 0; g < n; ++g) {
      for (int s = 0; s < e.sym->order; ++s)
        if (e.sym->images[s] == e.translations[g]) {
          e.numbering[g] = s;
          break;
        }
      if (e.numbering[g] < 0)
        fail_numerical("embed_in_sym: translation not found in Sym(G)");
    }
  } else if (allow_on_demand) {
    // Representation law spot-checked on the generator pairs; vbar stays an
    // on-demand evaluator because Sym(G) has #G! elements.
    for (const auto& a : gens)
      for (const auto& b : gens)
        e.law_defect = std::max(
            e.law_defect, frobenius(e.evaluate(compose(a, b)) -
                                    e.evaluate(a) * e.evaluate(b)));
  } else {
    fail_validation("embed_in_sym: group of order " + std::to_string(n) +
                    " needs the on-demand mode (materialization stops at " +
                    std::to_string(kSymMaterializeLimit) + ")");
  }
  return e;
}

}  // namespace covkit
