#include "covkit/symfam.hpp"

#include <cmath>
#include <complex>

#include "covkit/error.hpp"

namespace covkit {

namespace {

constexpr int kMaxDim = 7;  // Sym(7) has 5040 elements; scans stay sub-minute

void check_spec(const SymFamilySpec& spec) {
  if (spec.dim < 2 || spec.dim > kMaxDim)
    fail_validation("symfam: dim must lie in [2, " + std::to_string(kMaxDim) +
                    "], got " + std::to_string(spec.dim));
  if (!std::isfinite(spec.alpha) || spec.alpha < 0)
    fail_validation("symfam: alpha must be finite and >= 0");
}

Matrix uniform_projection(int d) {
  Vector psi = Vector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0));
  return psi * psi.adjoint();
}

// Spectral coefficients of K(alpha)^{-1/2}: a on the complement of the
// uniform vector, b on it.
std::pair<double, double> isqrt_coeffs(const SymFamilySpec& spec) {
  const double d = spec.dim;
  const double a2 = spec.alpha * spec.alpha;
  const double r2 = std::sqrt(2.0);
  const double a = 1.0 / std::sqrt((2 * d - 2 - r2) * a2 + 1);
  const double b = 1.0 / std::sqrt((2 + r2) * (d - 1) * a2 + 1);
  return {a, b};
}

// alpha (e^{-i pi/8} |m> + e^{i pi/8} |n>), the off-diagonal seed vector
// transported to the point (m, n).
Vector pair_vector(const SymFamilySpec& spec, int m, int n) {
  const double pi = std::acos(-1.0);
  Vector v = Vector::Zero(spec.dim);
  v(m) += spec.alpha * std::exp(Complex(0, -pi / 8));
  v(n) += spec.alpha * std::exp(Complex(0, pi / 8));
  return v;
}

}  // namespace

double symfam_alpha0() { return 1.0 / std::sqrt(2.0 + std::sqrt(2.0)); }

Matrix symfam_k(const SymFamilySpec& spec) {
  check_spec(spec);
  const double d = spec.dim;
  const double a2 = spec.alpha * spec.alpha;
  const double r2 = std::sqrt(2.0);
  const double on_id = (2 * d - 2 - r2) * a2 + 1;
  return on_id * Matrix::Identity(spec.dim, spec.dim) +
         (r2 * a2 * d) * uniform_projection(spec.dim);
}

Matrix symfam_normalizer(const SymFamilySpec& spec) {
  check_spec(spec);
  auto [a, b] = isqrt_coeffs(spec);
  const Matrix p0 = uniform_projection(spec.dim);
  return a * (Matrix::Identity(spec.dim, spec.dim) - p0) + b * p0;
}

Matrix symfam_effect(const SymFamilySpec& spec, int m, int n) {
  check_spec(spec);
  if (m < 0 || m >= spec.dim || n < 0 || n >= spec.dim)
    fail_validation("symfam: point (" + std::to_string(m) + ", " +
                    std::to_string(n) + ") is out of range");
  const Matrix ns = symfam_normalizer(spec);
  if (m == n) {
    Vector e = Vector::Zero(spec.dim);
    e(m) = 1;
    const Vector w = ns * e;
    return w * w.adjoint();
  }
  const Vector w = ns * pair_vector(spec, m, n);
  return w * w.adjoint();
}

Vector symfam_alpha0_vector(int dim, int m, int n) {
  check_spec({dim, symfam_alpha0()});
  if (m < 0 || m >= dim || n < 0 || n >= dim)
    fail_validation("symfam: point (" + std::to_string(m) + ", " +
                    std::to_string(n) + ") is out of range");
  const double pi = std::acos(-1.0);
  const double d = dim;
  // -(1/D)(sqrt(1 + 1/sqrt 2) - 1) on the unit uniform vector.
  Vector v = Vector::Constant(
      dim, Complex(-(std::sqrt(1.0 + 1.0 / std::sqrt(2.0)) - 1.0) /
                       (d * std::sqrt(d)),
                   0));
  v(m) += std::exp(Complex(0, -pi / 8)) / std::sqrt(2 * d);
  v(n) += std::exp(Complex(0, pi / 8)) / std::sqrt(2 * d);
  return v;
}

SymFamily generate(const SymFamilySpec& spec) {
  check_spec(spec);
  auto g = symmetric_group(spec.dim);
  auto sys = make_system(product_action_space(g, 2), permutation_rep(g));
  return generate(spec, sys);
}

SymFamily generate(const SymFamilySpec& spec, const SystemPtr& sys) {
  check_spec(spec);
  if (!sys) fail_validation("symfam: null system");
  const GSpace& sp = sys->space();
  if (sys->dim() != spec.dim || sp.num_points != spec.dim * spec.dim ||
      sp.num_orbits() != 2 || sp.power != 2)
    fail_validation("symfam: the system is not the Sym(" +
                    std::to_string(spec.dim) + ") pair system");
  // Orbit 0 holds the diagonal (base point (0,0)), orbit 1 the rest.
  if (sp.orbit_of[0] != 0 || sp.orbit_of[1] != 1)
    fail_validation("symfam: unexpected orbit numbering on the pair space");

  const int d = spec.dim;
  Vector e0 = Vector::Zero(d);
  e0(0) = 1;
  const Vector d1 = pair_vector(spec, 0, 1);
  CovariantPOVM raw = build_from_seeds(
      sys, {{0, e0 * e0.adjoint()}, {1, d1 * d1.adjoint()}});

  SymFamily fam;
  fam.spec = spec;
  fam.system = sys;
  fam.k = symfam_k(spec);
  fam.inv_sqrt = symfam_normalizer(spec);
  fam.k_defect = (raw.normalizer() - fam.k).norm();

  NormalizationResult nr = normalize(raw);
  if (!nr.full_rank)
    fail_numerical("symfam: the raw normalizer lost rank unexpectedly");
  fam.normalizer_defect = (nr.inv_sqrt - fam.inv_sqrt).norm();
  fam.povm = std::move(nr.povm);

  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const double dist =
          (fam.povm.effects[m * d + n] - symfam_effect(spec, m, n)).norm();
      fam.effect_defect = std::max(fam.effect_defect, dist);
    }
  return fam;
}

SweepResult sweep(int dim, const std::vector<double>& grid, Tolerances tol,
                  std::uint64_t seed) {
  check_spec({dim, 0.0});
  if (grid.empty()) fail_validation("symfam: empty sweep grid");
  for (double a : grid)
    if (!std::isfinite(a) || a < 0)
      fail_validation("symfam: alpha must be finite and >= 0");

  // Validating the Sym(D) representation is quadratic in the group order
  // and dwarfs everything else at D = 7; share one system across the grid.
  auto g = symmetric_group(dim);
  auto sys =
      make_system(product_action_space(g, 2), permutation_rep(g), tol, seed);

  SweepResult out;
  out.dim = dim;
  std::vector<Matrix> prev;
  double prev_alpha = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SymFamily fam = generate({dim, grid[i]}, sys);
    SweepRow row;
    row.alpha = grid[i];
    row.k_defect = fam.k_defect;
    row.normalizer_defect = fam.normalizer_defect;
    row.effect_defect = fam.effect_defect;
    row.classification = classify(fam.povm);
    Margins mg = margins(fam.povm);
    row.margin_covariance_defect = mg.covariance_defect;
    row.min_margin_rank = dim;
    for (const Matrix& a : mg.row) {
      Eigen::JacobiSVD<Matrix> svd(a);
      row.min_margin_rank = std::min(
          row.min_margin_rank,
          rank_with_cutoff(svd.singularValues(), sys->tol().rank_cutoff));
    }
    if (row.classification.ic_singulars.size() > 0)
      row.ic_min_singular = row.classification.ic_singulars(
          row.classification.ic_singulars.size() - 1);
    if (!prev.empty()) {
      for (std::size_t x = 0; x < prev.size(); ++x)
        row.jump =
            std::max(row.jump, (fam.povm.effects[x] - prev[x]).norm());
      const double da = std::abs(grid[i] - prev_alpha);
      if (da > 0) out.max_rate = std::max(out.max_rate, row.jump / da);
    }
    prev = fam.povm.effects;
    prev_alpha = grid[i];
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace covkit
