#include <doctest.h>

#include "covkit/irrep.hpp"
#include "covkit/rep.hpp"

#include <numeric>

using namespace covkit;

namespace {

std::vector<int> all_elements(const GroupPtr& g) {
  std::vector<int> v(g->order);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST_CASE("permutation and regular representations are ordinary and unitary") {
  GroupPtr s3 = symmetric_group(3);
  for (const Representation& rep : {permutation_rep(s3), regular_rep(s3)}) {
    RepReport rr = validate_representation(rep);
    CHECK(rr.unitarity_defect < 1e-13);
    CHECK(rr.law_defect < 1e-13);
    CHECK_FALSE(rep.projective());
  }
  CHECK(permutation_rep(s3).dim == 3);
  CHECK(regular_rep(s3).dim == 6);
}

TEST_CASE("regular representation of S3 decomposes as 1+1+2x2") {
  GroupPtr s3 = symmetric_group(3);
  Representation reg = regular_rep(s3);
  IrrepDecomposition dec = decompose_restriction(reg, all_elements(s3));
  REQUIRE(dec.num_classes() == 3);
  CHECK(dec.classes[0].dim == 1);
  CHECK(dec.classes[1].dim == 1);
  CHECK(dec.classes[2].dim == 2);
  // Canonical order puts the trivial class first.
  for (int h = 0; h < 6; ++h)
    CHECK(std::abs(dec.classes[0].character(h) - Complex(1, 0)) < 1e-10);
  // Sign character: -1 on the three transpositions (ids 1, 2, 5).
  CHECK(std::abs(dec.classes[1].character(1) - Complex(-1, 0)) < 1e-10);
  CHECK(std::abs(dec.classes[1].character(3) - Complex(1, 0)) < 1e-10);
  CHECK(dec.multiplicity == std::vector<int>{1, 1, 2});
  CHECK(reconstruction_defect(reg, dec) < 1e-9);
  CHECK(schur_orthogonality_defect(dec.subgroup, dec.classes) < 1e-9);
}

TEST_CASE("decomposition is deterministic in the seed") {
  GroupPtr s4 = symmetric_group(4);
  Representation reg = regular_rep(s4);
  IrrepDecomposition a = decompose_restriction(reg, all_elements(s4), 7);
  IrrepDecomposition b = decompose_restriction(reg, all_elements(s4), 7);
  REQUIRE(a.num_classes() == b.num_classes());
  std::vector<int> dims;
  for (const auto& c : a.classes) dims.push_back(c.dim);
  CHECK(dims == std::vector<int>{1, 1, 2, 3, 3});
  for (int c = 0; c < a.num_classes(); ++c)
    for (std::size_t m = 0; m < a.copies[c].size(); ++m)
      CHECK(defect(a.copies[c][m], b.copies[c][m]) < 1e-12);
}

TEST_CASE("restriction of the S3 permutation rep to a point stabilizer") {
  GroupPtr s3 = symmetric_group(3);
  Representation perm = permutation_rep(s3);
  // Stabilizer of the diagonal base point (1,1): {(1), (23)}.
  std::vector<int> stab{0, 1};
  IrrepDecomposition dec = decompose_restriction(perm, stab);
  REQUIRE(dec.num_classes() == 2);
  CHECK(dec.classes[0].dim == 1);
  CHECK(std::abs(dec.classes[0].character(1) - Complex(1, 0)) < 1e-10);
  CHECK(std::abs(dec.classes[1].character(1) - Complex(-1, 0)) < 1e-10);
  CHECK(dec.multiplicity == std::vector<int>{2, 1});

  // Copies are isometries intertwining eta into the restriction.
  for (int c = 0; c < 2; ++c)
    for (const Matrix& s : dec.copies[c]) {
      CHECK(defect(s.adjoint() * s,
                   Matrix::Identity(s.cols(), s.cols())) < 1e-10);
      for (int h = 0; h < dec.subgroup.order(); ++h) {
        Matrix lhs = perm(dec.subgroup.elements[h]) * s;
        Matrix rhs = s * dec.classes[c].matrices[h];
        CHECK(defect(lhs, rhs) < 1e-9);
      }
    }

  // Character inner products give the same multiplicities.
  std::vector<IrrepClass> dual = complete_dual(dec.subgroup);
  CHECK(class_multiplicities(perm, dec.subgroup, dual) ==
        std::vector<int>{2, 1});
}

TEST_CASE("align_to reuses the given classes including zero multiplicity") {
  GroupPtr s3 = symmetric_group(3);
  Subgroup stab = make_subgroup(s3, {0, 1});
  std::vector<IrrepClass> dual = complete_dual(stab);
  REQUIRE(dual.size() == 2);
  Representation perm = permutation_rep(s3);
  IrrepDecomposition dec =
      decompose_restriction(perm, {0, 1}, kDefaultSeed, &dual);
  CHECK(dec.multiplicity == std::vector<int>{2, 1});
  // Target classes are carried over verbatim.
  for (std::size_t c = 0; c < dual.size(); ++c)
    for (int h = 0; h < stab.order(); ++h)
      CHECK(defect(dec.classes[c].matrices[h], dual[c].matrices[h]) == 0);
}

TEST_CASE("complete dual of S3 and of the Klein group") {
  Subgroup s3self = make_subgroup(symmetric_group(3), {0, 1, 2, 3, 4, 5});
  std::vector<IrrepClass> dual = complete_dual(s3self);
  REQUIRE(dual.size() == 3);
  CHECK(dual[0].dim == 1);
  CHECK(dual[1].dim == 1);
  CHECK(dual[2].dim == 2);
  CHECK(schur_orthogonality_defect(s3self, dual) < 1e-9);

  GroupPtr klein = direct_product(cyclic_group(2), cyclic_group(2));
  Subgroup kself = make_subgroup(klein, {0, 1, 2, 3});
  std::vector<IrrepClass> kd = complete_dual(kself);
  REQUIRE(kd.size() == 4);
  for (const auto& c : kd) CHECK(c.dim == 1);
}

TEST_CASE("make_subgroup rejects non-closed sets") {
  GroupPtr s3 = symmetric_group(3);
  CHECK_THROWS_AS(make_subgroup(s3, {0, 1, 2}), ValidationError);
  Subgroup a3 = make_subgroup(s3, {0, 3, 4});
  CHECK(a3.order() == 3);
  CHECK(a3.local->identity == 0);
}

TEST_CASE("cocycle identity and values at the base point") {
  GroupPtr s3 = symmetric_group(3);
  for (SectionPolicy pol : {SectionPolicy::LexMin, SectionPolicy::MinMoved}) {
    GSpace sp = product_action_space(s3, 2, pol);
    Subgroup stab = make_subgroup(s3, sp.stabilizer[0]);
    std::vector<IrrepClass> dual = complete_dual(stab);
    const IrrepClass& sign = dual[1];
    const int orbit = 0;
    // zeta(e, x) = 1
    for (int x : sp.orbits[orbit])
      CHECK(defect(cocycle_eval(sign, stab, sp, orbit, 0, x),
                   Matrix::Identity(1, 1)) < 1e-12);
    // zeta(gh, x) = zeta(h, x) zeta(g, hx)
    for (int g = 0; g < 6; ++g)
      for (int h = 0; h < 6; ++h)
        for (int x : sp.orbits[orbit]) {
          Matrix lhs = cocycle_eval(sign, stab, sp, orbit, s3->mult(g, h), x);
          Matrix rhs = cocycle_eval(sign, stab, sp, orbit, h, x) *
                       cocycle_eval(sign, stab, sp, orbit, g, sp.act(h, x));
          CHECK(defect(lhs, rhs) < 1e-12);
        }
    // zeta(h^{-1}, base) = eta(h)
    for (int lh = 0; lh < stab.order(); ++lh) {
      int h = stab.elements[lh];
      Matrix z = cocycle_eval(sign, stab, sp, orbit, s3->inv(h),
                              sp.base_point[orbit]);
      CHECK(defect(z, sign.matrices[lh]) < 1e-12);
    }
  }
}

TEST_CASE("cocycle law holds for a two-dimensional class") {
  // S4 on 4 points; the stabilizer of point 1 is a copy of S3 and carries a
  // two-dimensional class, so the order of factors matters.
  GroupPtr s4 = symmetric_group(4);
  GSpace sp = natural_action_space(s4);
  REQUIRE(sp.num_orbits() == 1);
  Subgroup stab = make_subgroup(s4, sp.stabilizer[0]);
  REQUIRE(stab.order() == 6);
  std::vector<IrrepClass> dual = complete_dual(stab);
  const IrrepClass& eta = dual.back();
  REQUIRE(eta.dim == 2);
  for (int g = 0; g < 24; g += 5)
    for (int h = 0; h < 24; h += 7)
      for (int x = 0; x < 4; ++x) {
        Matrix lhs = cocycle_eval(eta, stab, sp, 0, s4->mult(g, h), x);
        Matrix rhs = cocycle_eval(eta, stab, sp, 0, h, x) *
                     cocycle_eval(eta, stab, sp, 0, g, sp.act(h, x));
        CHECK(defect(lhs, rhs) < 1e-12);
      }
}

TEST_CASE("Weyl pair on the Klein group has multiplier order two") {
  GroupPtr klein = direct_product(cyclic_group(2), cyclic_group(2));
  Matrix I2 = Matrix::Identity(2, 2);
  Matrix X(2, 2), Z(2, 2);
  X << 0, 1, 1, 0;
  Z << 1, 0, 0, -1;
  // id = a*2 + b -> X^a Z^b
  std::vector<Matrix> u{I2, Z, X, X * Z};
  Matrix m = infer_multiplier(*klein, u);
  Representation rep = matrix_rep(klein, u, m);
  RepReport rr = validate_representation(rep);
  CHECK(rr.unitarity_defect < 1e-13);
  CHECK(rr.law_defect < 1e-13);
  CHECK(rr.multiplier_defect < 1e-13);
  CHECK(rep.projective());

  MultiplierAnalysis ma = multiplier_order(rep);
  CHECK(ma.p == 2);
  CHECK(ma.snap_defect < 1e-12);

  CentralExtension ext = central_extension(klein, ma);
  CHECK(ext.extended->order == 8);
  check_group_axioms(*ext.extended);

  Representation lifted = lift_rep(ext, rep, ma);
  CHECK_FALSE(lifted.projective());
  RepReport lr = validate_representation(lifted);
  CHECK(lr.unitarity_defect < 1e-12);
  CHECK(lr.law_defect < 1e-12);

  GSpace base_space = singleton_space(klein);
  GSpace lifted_space = lift_space(ext, base_space);
  CHECK(lifted_space.num_points == 1);
  CHECK(lifted_space.stabilizer[0].size() == 8);
}

TEST_CASE("ordinary representations have multiplier order one") {
  GroupPtr s3 = symmetric_group(3);
  Representation perm = permutation_rep(s3);
  MultiplierAnalysis ma = multiplier_order(perm);
  CHECK(ma.p == 1);
  Representation adj = adjusted_rep(perm, ma);
  CHECK_FALSE(adj.projective());
  for (int g = 0; g < 6; ++g) CHECK(defect(adj(g), perm(g)) < 1e-12);
}

TEST_CASE("decompose_restriction refuses a projective restriction") {
  GroupPtr klein = direct_product(cyclic_group(2), cyclic_group(2));
  Matrix I2 = Matrix::Identity(2, 2);
  Matrix X(2, 2), Z(2, 2);
  X << 0, 1, 1, 0;
  Z << 1, 0, 0, -1;
  std::vector<Matrix> u{I2, Z, X, X * Z};
  Representation rep = matrix_rep(klein, u, infer_multiplier(*klein, u));
  CHECK_THROWS_AS(decompose_restriction(rep, {0, 1, 2, 3}), ValidationError);
  // On the subgroup {e, Z} the multiplier is trivial; restriction splits.
  IrrepDecomposition dec = decompose_restriction(rep, {0, 1});
  CHECK(dec.num_classes() == 2);
}
