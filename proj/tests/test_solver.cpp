#include <doctest.h>

#include <covkit/error.hpp>
#include <covkit/solver.hpp>

using namespace covkit;

namespace {

SystemPtr schur_system() {
  auto s4 = symmetric_group(4);
  std::vector<int> all(24);
  for (int i = 0; i < 24; ++i) all[i] = i;
  std::vector<IrrepClass> dual = complete_dual(make_subgroup(s4, all));
  return make_system(natural_action_space(s4),
                     matrix_rep(s4, dual[2].matrices));
}

// A random covariant seed: average a random PSD matrix over the stabilizer.
Matrix random_seed(const SystemPtr& sys, int orbit, Rng& rng) {
  const int d = sys->dim();
  Matrix r = random_matrix(d, d, rng);
  Matrix k = r * r.adjoint();
  Matrix avg = Matrix::Zero(d, d);
  const auto& stab = sys->space().stabilizer[orbit];
  for (int h : stab) {
    const Matrix& uh = sys->rep()(h);
    avg += uh * k * uh.adjoint();
  }
  return avg / static_cast<double>(stab.size());
}

}  // namespace

TEST_CASE("solver dimensions on reference systems") {
  // Trivial group, D = 2, #X = 2: every Hermitian pair is covariant.
  auto c1 = cyclic_group(1);
  GSpace two = make_gspace(c1, {0, 1});
  auto flat = make_system(two, matrix_rep(c1, {Matrix::Identity(2, 2)}));
  SolverResult sr = solve_covariant(flat);
  CHECK(sr.linear_dim == 8);
  CHECK(sr.affine_dim == 4);
  std::vector<Matrix> uniform = sr.decode(sr.particular);
  CHECK(frobenius(uniform[0] - Matrix::Identity(2, 2) / 2.0) < 1e-12);

  // Schur degenerate: only multiples of the uniform family.
  SolverResult schur = solve_covariant(schur_system());
  CHECK(schur.linear_dim == 1);
  CHECK(schur.affine_dim == 0);
  CHECK(std::abs(schur.projector_spectrum(0) - 1.0) < 1e-10);

  // Pair space of S3 with the permutation representation: 5 + 9.
  auto s3 = symmetric_group(3);
  auto pair = make_system(product_action_space(s3, 2), permutation_rep(s3));
  SolverResult psr = solve_covariant(pair);
  CHECK(psr.linear_dim == 14);
  CHECK(psr.affine_dim == 12);
}

TEST_CASE("seed-built observables live in the solver space and conversely") {
  auto s3 = symmetric_group(3);
  auto sys = make_system(product_action_space(s3, 2), permutation_rep(s3));
  SolverResult sr = solve_covariant(sys);
  Rng rng(0xC0FFEE);

  for (int trial = 0; trial < 5; ++trial) {
    CovariantPOVM p = build_from_seeds(
        sys, {Seed{0, random_seed(sys, 0, rng)},
              Seed{1, random_seed(sys, 1, rng)}});
    CHECK(linear_membership_defect(sr, p.effects) <= 1e-9);
    CovariantPOVM q = normalize(p).povm;
    CHECK(affine_membership_defect(sr, q.effects) <= 1e-9);
  }

  // Conversely: points of the affine slice are covariant and normalized,
  // and directions of the linear space are covariant.
  const int d = sys->dim();
  for (int trial = 0; trial < 5; ++trial) {
    RealVector coeff(sr.affine_dim);
    for (int i = 0; i < sr.affine_dim; ++i) {
      coeff(i) = std::uniform_real_distribution<double>(-1, 1)(rng);
    }
    std::vector<Matrix> family =
        sr.decode(sr.particular + sr.affine_basis * coeff);
    Matrix total = Matrix::Zero(d, d);
    double cov = 0;
    for (const Matrix& m : family) total += m;
    for (int g = 0; g < 6; ++g) {
      const Matrix& ug = sys->rep()(g);
      for (int x = 0; x < 9; ++x) {
        cov = std::max(cov, frobenius(ug * family[x] * ug.adjoint() -
                                      family[sys->space().act(g, x)]));
      }
    }
    CHECK(frobenius(total - Matrix::Identity(d, d)) <= 1e-9);
    CHECK(cov <= 1e-9);
  }
}

TEST_CASE("solver membership rejects non-covariant families") {
  auto s3 = symmetric_group(3);
  auto sys = make_system(natural_action_space(s3), permutation_rep(s3));
  SolverResult sr = solve_covariant(sys);
  std::vector<Matrix> family(3, Matrix::Identity(3, 3) / 3.0);
  family[0](0, 1) = 0.2;  // breaks Hermiticity pattern and covariance
  family[0](1, 0) = 0.2;
  CHECK(linear_membership_defect(sr, family) > 1e-3);
}

TEST_CASE("solver guard rejects oversized coordinate spaces") {
  // Regular action of S4 under its own permutation matrices:
  // 24 points x 24^2 coordinates far exceeds the dense limit. The guard
  // fires before any heavy work (orbit contexts are lazy).
  auto s4 = symmetric_group(4);
  auto sys = make_system(regular_action_space(s4), regular_rep(s4));
  CHECK_THROWS_AS(solve_covariant(sys), ValidationError);
}
