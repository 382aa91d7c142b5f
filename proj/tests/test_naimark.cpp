#include <doctest.h>

#include <cmath>
#include <covkit/error.hpp>
#include <covkit/naimark.hpp>
#include <covkit/system.hpp>

using namespace covkit;

namespace {

Vector basis_vec(int d, int j) {
  Vector v = Vector::Zero(d);
  v(j) = 1;
  return v;
}

// Rank-1 observable on the pair space: a projection seed on the diagonal
// orbit and a generic direction on the free orbit.
CovariantPOVM pair_rank1(const SystemPtr& sys, bool normalized) {
  const Vector e0 = basis_vec(3, 0);
  Vector d1 = Vector::Zero(3);
  d1(0) = 1;
  d1(1) = 0.3;
  d1(2) = Complex(0, 0.2);
  CovariantPOVM p = build_from_seeds(
      sys, {{0, e0 * e0.adjoint()}, {1, d1 * d1.adjoint()}});
  if (!normalized) return p;
  NormalizationResult nr = normalize(p);
  REQUIRE(nr.full_rank);
  return nr.povm;
}

SystemPtr pair_system() {
  auto s3 = symmetric_group(3);
  return make_system(product_action_space(s3, 2), permutation_rep(s3));
}

// The qubit pair of reflections with an order-two multiplier.
SystemPtr weyl_system() {
  auto g4 = direct_product(cyclic_group(2), cyclic_group(2));
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  std::vector<Matrix> mats;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Matrix m = Matrix::Identity(2, 2);
      for (int i = 0; i < a; ++i) m = x * m;
      for (int i = 0; i < b; ++i) m = z * m;
      mats.push_back(m);
    }
  Representation u = matrix_rep(g4, mats, infer_multiplier(*g4, mats));
  return make_system(regular_action_space(g4), u);
}

double sum_defect(const std::vector<Matrix>& effects) {
  Matrix sum = Matrix::Zero(effects[0].rows(), effects[0].cols());
  for (const Matrix& e : effects) sum += e;
  return defect(sum, Matrix::Identity(sum.rows(), sum.cols()));
}

}  // namespace

TEST_CASE("refinement spreads effects over stabilizer cosets") {
  SystemPtr sys = pair_system();
  CovariantPOVM p = pair_rank1(sys, false);
  RefinedPOVM r = refine(p);

  CHECK(r.coset_defect <= 1e-12);
  CHECK(r.post_processing_defect <= 1e-12);
  CHECK(r.refined.covariance_defect() <= 1e-12);
  REQUIRE(r.labels.size() == 12);
  for (int o = 0; o < 2; ++o)
    for (int g = 0; g < 6; ++g) {
      const int pt = r.point(o, g);
      CHECK(r.labels[pt][0] == o);
      CHECK(r.labels[pt][1] == g);
    }

  // Diagonal orbit: the projection seed turns every refined effect into half
  // a basis projection, selected by the permutation image of the element.
  auto s3 = sys->group();
  for (int g = 0; g < 6; ++g) {
    const Vector img = basis_vec(3, s3->images[g][0]);
    CHECK(frobenius(r.refined.effects[r.point(0, g)] -
                    0.5 * img * img.adjoint()) <= 1e-12);
  }

  SUBCASE("normalized parent refines to a normalized observable") {
    RefinedPOVM rn = refine(pair_rank1(sys, true));
    CHECK_FALSE(r.refined.normalized(sys->tol().lin));
    CHECK(rn.refined.normalized(sys->tol().lin));
    CHECK(sum_defect(rn.refined.effects) <= 1e-10);
  }

  SUBCASE("full-rank seeds are rejected") {
    Matrix k0 = 0.4 * Matrix::Identity(3, 3);
    CovariantPOVM bad = build_from_seeds(sys, {{0, k0}, {1, k0}});
    CHECK_THROWS_AS((void)refine(bad), ValidationError);
  }

  SUBCASE("zero orbits survive with their effects zeroed") {
    const Vector e0 = basis_vec(3, 0);
    CovariantPOVM z = build_from_seeds(
        sys, {{0, e0 * e0.adjoint()}, {1, Matrix::Zero(3, 3)}});
    RefinedPOVM rz = refine(z);
    CHECK_FALSE(rz.zero_orbit[0]);
    CHECK(rz.zero_orbit[1]);
    CHECK(rz.d[1].norm() == 0);
    for (int g = 0; g < 6; ++g)
      CHECK(frobenius(rz.refined.effects[rz.point(1, g)]) == 0);
    CHECK(rz.post_processing_defect <= 1e-12);
    CHECK_FALSE(dilate(rz).minimal);
  }

  SUBCASE("out-of-range refined outcomes are rejected") {
    CHECK_THROWS_AS((void)r.point(2, 0), ValidationError);
    CHECK_THROWS_AS((void)r.point(0, 6), ValidationError);
  }
}

TEST_CASE("the dilation reproduces the refinement isometrically") {
  SystemPtr sys = pair_system();
  CovariantPOVM p = pair_rank1(sys, true);
  NaimarkBundle b = dilate(refine(p));

  CHECK(b.dim == 12);
  CHECK(b.minimal);
  CHECK(b.reproduction_defect <= 1e-12);
  CHECK(b.gram_defect <= 1e-10);
  CHECK(b.isometry_defect <= 1e-10);
  CHECK(b.intertwining_defect <= 1e-12);
  CHECK(b.v_law_defect <= 1e-12);
  CHECK(b.q_covariance_defect <= 1e-12);
  CHECK_FALSE(b.v.projective());

  // End to end: the parent effect is the coset sum of dilated projections.
  const GSpace& sp = sys->space();
  for (int x = 0; x < sp.num_points; ++x) {
    const int o = sp.orbit_of[x];
    Matrix sum = Matrix::Zero(3, 3);
    for (int h : sp.stabilizer[o])
      sum += b.j.adjoint() *
             b.q(o, sys->group()->mult(sp.section[x], h)) * b.j;
    CHECK(frobenius(sum - p.effects[x]) <= 1e-10);
  }

  SUBCASE("an unnormalized parent shows up in the gram matrix") {
    NaimarkBundle raw = dilate(refine(pair_rank1(sys, false)));
    CHECK(raw.gram_defect <= 1e-12);
    CHECK(raw.isometry_defect > 0.1);
  }
}

TEST_CASE("free actions refine by relabeling") {
  auto s3 = symmetric_group(3);
  SystemPtr sys = make_system(regular_action_space(s3), permutation_rep(s3));
  Vector d = Vector::Zero(3);
  d(0) = 1;
  d(1) = 0.3;
  d(2) = Complex(0, 0.2);
  NormalizationResult nr =
      normalize(build_from_seeds(sys, {{0, d * d.adjoint()}}));
  REQUIRE(nr.full_rank);
  RefinedPOVM r = refine(nr.povm);
  // Point ids of the regular action coincide with element ids.
  for (int g = 0; g < 6; ++g)
    CHECK(frobenius(r.refined.effects[r.point(0, g)] - nr.povm.effects[g]) <=
          1e-12);
  NaimarkBundle b = dilate(r);
  CHECK(b.dim == 6);
  CHECK(b.isometry_defect <= 1e-10);
}

TEST_CASE("the multiplier pipeline extends the group") {
  SystemPtr sys = weyl_system();
  const Vector e0 = basis_vec(2, 0);
  NormalizationResult nr =
      normalize(build_from_seeds(sys, {{0, e0 * e0.adjoint()}}));
  REQUIRE(nr.full_rank);
  CovariantPOVM p = nr.povm;

  NaimarkBundle b1 = dilate(refine(p));
  CHECK(b1.dim == 4);
  CHECK(b1.minimal);
  CHECK(b1.v.projective());
  CHECK(b1.reproduction_defect <= 1e-12);
  CHECK(b1.isometry_defect <= 1e-10);
  CHECK(b1.intertwining_defect <= 1e-12);
  CHECK(b1.v_law_defect <= 1e-12);
  CHECK(b1.q_covariance_defect <= 1e-12);

  MultiplierAnalysis ma = multiplier_order(sys->rep());
  REQUIRE(ma.p == 2);

  NaimarkBundle b2 = trivialize_multiplier(b1, ma);
  CHECK(b2.refined.parent.system->group()->order == 8);
  CHECK(b2.dim == 8);
  CHECK(b2.minimal);
  CHECK_FALSE(b2.v.projective());
  CHECK(b2.refined.parent.covariance_defect() <= 1e-12);
  CHECK(b2.refined.parent.normalization_defect() <= 1e-10);
  CHECK(b2.refined.post_processing_defect <= 1e-12);
  CHECK(b2.reproduction_defect <= 1e-12);
  CHECK(b2.isometry_defect <= 1e-10);
  CHECK(b2.intertwining_defect <= 1e-12);
  CHECK(b2.v_law_defect <= 1e-12);
  CHECK(b2.q_covariance_defect <= 1e-12);

  SUBCASE("a trivial multiplier only relabels") {
    SystemPtr psys = pair_system();
    NaimarkBundle pb = dilate(refine(pair_rank1(psys, true)));
    MultiplierAnalysis pma = multiplier_order(psys->rep());
    REQUIRE(pma.p == 1);
    NaimarkBundle same = trivialize_multiplier(pb, pma);
    CHECK(same.dim == pb.dim);
    for (int i = 0; i < same.dim; ++i)
      CHECK(frobenius(same.refined.refined.effects[i] -
                      pb.refined.refined.effects[i]) <= 1e-12);
  }

  SUBCASE("the extended bundle embeds on demand") {
    CHECK_THROWS_AS((void)embed_in_sym(b2), ValidationError);
    SymEmbedding e = embed_in_sym(b2, true);
    CHECK_FALSE(e.materialized);
    CHECK(e.group_order == 8);
    CHECK(e.restriction_defect <= 1e-12);
    CHECK(e.law_defect <= 1e-12);
    CHECK(e.q_covariance_defect <= 1e-12);
  }

  SUBCASE("a projective bundle cannot embed") {
    CHECK_THROWS_AS((void)embed_in_sym(b1, true), ValidationError);
  }
}

TEST_CASE("left translations inside the symmetric group") {
  auto c3 = cyclic_group(3);
  SystemPtr sys = make_system(regular_action_space(c3), regular_rep(c3));
  Vector d = Vector::Zero(3);
  d(0) = 1;
  d(1) = 0.5;
  d(2) = Complex(0, 0.25);
  NormalizationResult nr =
      normalize(build_from_seeds(sys, {{0, d * d.adjoint()}}));
  REQUIRE(nr.full_rank);
  NaimarkBundle b = dilate(refine(nr.povm));
  CHECK(b.dim == 3);

  SymEmbedding e = embed_in_sym(b);
  CHECK(e.materialized);
  REQUIRE(e.sym);
  CHECK(e.sym->order == 6);
  CHECK(e.law_defect <= 1e-12);
  CHECK(e.restriction_defect <= 1e-12);
  CHECK(e.q_covariance_defect <= 1e-12);
  // The numbering is a homomorphic copy of the group.
  CHECK(e.numbering[0] == e.sym->identity);
  for (int a = 0; a < 3; ++a)
    for (int g = 0; g < 3; ++g)
      CHECK(e.sym->mult(e.numbering[a], e.numbering[g]) ==
            e.numbering[c3->mult(a, g)]);

  SUBCASE("the extension is a direct sum of permutation blocks") {
    auto c2 = cyclic_group(2);
    SystemPtr two = make_system(make_gspace(c2, {0, 1, 0, 1}),
                                matrix_rep(c2, {Matrix::Identity(2, 2),
                                                (Matrix(2, 2) << 1, 0, 0, -1)
                                                    .finished()}));
    const Vector f0 = basis_vec(2, 0), f1 = basis_vec(2, 1);
    CovariantPOVM p = build_from_seeds(
        two, {{0, f0 * f0.adjoint()}, {1, f1 * f1.adjoint()}});
    NaimarkBundle tb = dilate(refine(p));
    CHECK(tb.dim == 4);
    CHECK(tb.isometry_defect <= 1e-12);
    SymEmbedding te = embed_in_sym(tb);
    REQUIRE(te.materialized);
    CHECK(te.sym->order == 2);
    for (int s = 0; s < 2; ++s) {
      Matrix nat = Matrix::Zero(2, 2);
      for (int j = 0; j < 2; ++j) nat(te.sym->images[s][j], j) = 1;
      for (int o = 0; o < 2; ++o)
        CHECK(frobenius(te.v_bar(s).block(2 * o, 2 * o, 2, 2) - nat) == 0);
    }
  }

  SUBCASE("evaluate validates its permutation") {
    CHECK_THROWS_AS((void)e.evaluate({0, 1}), ValidationError);
    CHECK_THROWS_AS((void)e.evaluate({0, 0, 2}), ValidationError);
    const Matrix m = e.evaluate({1, 2, 0});
    CHECK(defect(m * m.adjoint(), Matrix::Identity(3, 3)) == 0);
  }
}
