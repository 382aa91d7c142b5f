// Acceptance gate: seven end-to-end checks over the whole library, each
// printing exactly one [PASS]/[FAIL] line. The process exits nonzero when
// any check fails. Tolerances are pinned here, not taken from defaults.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <covkit/error.hpp>
#include <covkit/instrument.hpp>
#include <covkit/naimark.hpp>
#include <covkit/solver.hpp>
#include <covkit/symfam.hpp>

namespace {

using namespace covkit;

// Pinned gate tolerances.
constexpr double kEntryTol = 1e-12;   // entrywise reproduction, exact lifts
constexpr double kClosedTol = 1e-10;  // closed-form and dilation identities
constexpr double kRandomTol = 1e-9;   // randomized constructions
constexpr double kGeometryBudget = 1.0;   // seconds, check 1
constexpr double kFamilyBudget = 30.0;    // seconds, check 2

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void require_le(double value, double bound, const std::string& what) {
  require(value <= bound, what + " (" + num(value) + " > " + num(bound) + ")");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Matrix m3(std::initializer_list<Complex> entries) {
  Matrix m(3, 3);
  int i = 0;
  for (Complex z : entries) {
    m(i / 3, i % 3) = z;
    ++i;
  }
  return m;
}

// Generic seed on the diagonal orbit of the pair space, written in the
// stabilizer eigenbasis {e0, (e1+e2)/sqrt2, (e1-e2)/sqrt2}.
Matrix diagonal_seed(double a, Complex b, double c, double d) {
  Vector e0 = Vector::Zero(3), pp = Vector::Zero(3), pm = Vector::Zero(3);
  e0(0) = 1;
  pp(1) = pp(2) = 1 / std::sqrt(2.0);
  pm(1) = 1 / std::sqrt(2.0);
  pm(2) = -1 / std::sqrt(2.0);
  return a * e0 * e0.adjoint() + b * e0 * pp.adjoint() +
         std::conj(b) * pp * e0.adjoint() + c * pp * pp.adjoint() +
         d * pm * pm.adjoint();
}

SystemPtr pair_system_s3() {
  auto s3 = symmetric_group(3);
  return make_system(product_action_space(s3, 2), permutation_rep(s3));
}

// Stabilizer-averaged random PSD seed: always a valid orbit seed.
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

int trivial_class(const std::vector<IrrepClass>& dual) {
  for (int c = 0; c < static_cast<int>(dual.size()); ++c) {
    if (dual[c].dim != 1) continue;
    bool flat = true;
    for (Eigen::Index k = 0; k < dual[c].character.size(); ++k)
      if (std::abs(dual[c].character(k) - Complex(1, 0)) > 1e-9) flat = false;
    if (flat) return c;
  }
  return -1;
}

using SolutionTable =
    std::vector<std::vector<std::vector<std::vector<Matrix>>>>;

SolutionTable solution_table(const SystemPtr& sys, const Representation& v) {
  SolutionTable t(sys->num_orbits());
  for (int o = 0; o < sys->num_orbits(); ++o) {
    t[o].resize(sys->dual(o).size());
    for (int c = 0; c < static_cast<int>(sys->dual(o).size()); ++c)
      t[o][c] = intertwiner_solution_basis(sys, v, o, c);
  }
  return t;
}

std::vector<Matrix> random_tuple(const std::vector<std::vector<Matrix>>& basis,
                                 int d, int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<Matrix> copy(d, Matrix::Zero(rows, cols));
  for (const auto& tuple : basis) {
    const Complex z(gauss(rng), gauss(rng));
    for (int i = 0; i < d; ++i) copy[i] += z * tuple[i];
  }
  return copy;
}

IntertwinerSet random_set(const SystemPtr& sys, const Representation& v,
                          const SolutionTable& table, Rng& rng) {
  std::uniform_int_distribution<int> coin(0, 1), copies(1, 2);
  IntertwinerSet s{sys, v, {}};
  for (int o = 0; o < sys->num_orbits(); ++o) {
    const int anchor = trivial_class(sys->dual(o));
    for (int c = 0; c < static_cast<int>(table[o].size()); ++c) {
      if (table[o][c].empty()) continue;
      if (c != anchor && coin(rng) == 0) continue;
      const int d = sys->dual(o)[c].dim;
      IntertwinerBlock b{o, c, {}};
      const int mm = copies(rng);
      for (int m = 0; m < mm; ++m)
        b.ops.push_back(random_tuple(table[o][c], d, v.dim, sys->dim(), rng));
      s.blocks.push_back(std::move(b));
    }
  }
  return s;
}

double map_distance(const CovariantInstrument& a,
                    const CovariantInstrument& b) {
  double worst = 0;
  const auto basis = hermitian_basis(a.system->dim());
  for (int x = 0; x < a.system->num_points(); ++x)
    for (const Matrix& e : basis)
      worst = std::max(worst, frobenius(a.apply(x, e) - b.apply(x, e)));
  return worst;
}

Representation s4_standard(const GroupPtr& s4) {
  std::vector<int> all(s4->order);
  for (int i = 0; i < s4->order; ++i) all[i] = i;
  const auto dual = complete_dual(make_subgroup(s4, all));
  for (const auto& cls : dual)
    if (cls.dim == 3 && std::abs(cls.character(1) - Complex(1, 0)) < 1e-6)
      return matrix_rep(s4, cls.matrices);
  throw Failure("three-dimensional class with positive swap character missing");
}

// ---------------------------------------------------------------------------
// 1. Pair geometry and reference effects (dimension three), under a second.

void check1() {
  const auto t0 = std::chrono::steady_clock::now();
  auto s3 = symmetric_group(3);
  SystemPtr sys = pair_system_s3();
  const GSpace& sp = sys->space();

  require(sp.num_orbits() == 2, "expected two orbits on the pair space");
  require(sp.orbits[0].size() == 3 && sp.orbits[1].size() == 6,
          "orbit sizes must be three (diagonal) and six (off-diagonal)");
  require(static_cast<int>(sp.stabilizer[0].size()) == 2,
          "diagonal stabilizer must have order two");
  const int h = sp.stabilizer[0][0] == s3->identity ? sp.stabilizer[0][1]
                                                    : sp.stabilizer[0][0];
  const std::vector<int>& img = s3->images[h];
  require(img[0] == 0 && img[1] == 2 && img[2] == 1,
          "diagonal stabilizer must be the swap of the two other labels");
  require(static_cast<int>(sp.stabilizer[1].size()) == 1,
          "off-diagonal stabilizer must be trivial");

  const double a = 0.3, c = 0.25, d = 0.2;
  const Complex b(0.1, 0.05);
  CovariantPOVM p = build_from_seeds(
      sys, {Seed{0, diagonal_seed(a, b, c, d)}, Seed{1, Matrix::Zero(3, 3)}});

  // Reference diagonal effects in the standard basis.
  const Complex bp = b / std::sqrt(2.0), bq = std::conj(bp);
  const double cp = c / 2, dp = d / 2;
  const Matrix m11 = m3({a, bp, bp,
                         bq, cp + dp, cp - dp,
                         bq, cp - dp, cp + dp});
  const Matrix m22 = m3({cp + dp, bq, cp - dp,
                         bp, a, bp,
                         cp - dp, bq, cp + dp});
  const Matrix m33 = m3({cp + dp, cp - dp, bq,
                         cp - dp, cp + dp, bq,
                         bp, bp, a});
  require_le(frobenius(p.effects[0] - m11), kEntryTol, "effect (1,1)");
  require_le(frobenius(p.effects[4] - m22), kEntryTol, "effect (2,2)");
  require_le(frobenius(p.effects[8] - m33), kEntryTol, "effect (3,3)");
  require_le(p.covariance_defect(), kEntryTol, "covariance defect");
  require_le(seconds_since(t0), kGeometryBudget, "runtime budget, seconds");
}

// ---------------------------------------------------------------------------
// 2. The one-parameter permutation family matches its closed forms for
//    dimensions two to five, classifies as predicted, within thirty seconds.

void check2() {
  const auto t0 = std::chrono::steady_clock::now();
  const double a0 = symfam_alpha0();
  for (int d = 2; d <= 5; ++d) {
    auto g = symmetric_group(d);
    SystemPtr sys =
        make_system(product_action_space(g, 2), permutation_rep(g));
    const double alphas[4] = {0.0, 0.1, a0, 1.0};
    for (int ai = 0; ai < 4; ++ai) {
      const SymFamily fam = generate({d, alphas[ai]}, sys);
      const std::string tag =
          "D=" + std::to_string(d) + " alpha=" + num(alphas[ai]) + ": ";
      require_le(fam.k_defect, kClosedTol, tag + "normalizer closed form");
      require_le(fam.normalizer_defect, kClosedTol,
                 tag + "inverse-root closed form");
      require_le(fam.povm.covariance_defect(), kClosedTol, tag + "covariance");

      const ObsClassification cl = classify(fam.povm);
      require(cl.is_rank1, tag + "expected a rank-one family");
      if (ai == 0) {
        require(cl.is_pvm, tag + "zero parameter must give projections");
        require(!cl.is_informationally_complete,
                tag + "zero parameter cannot be informationally complete");
      } else {
        require(cl.is_informationally_complete,
                tag + "expected informational completeness");
        require(cl.is_extreme_global, tag + "expected global extremality");
      }
      if (ai == 2) {
        for (int m = 0; m < d; ++m)
          for (int n = 0; n < d; ++n) {
            const Vector v = symfam_alpha0_vector(d, m, n);
            require_le(
                frobenius(fam.povm.effects[m * d + n] -
                          Matrix(v * v.adjoint())),
                kRandomTol,
                tag + "explicit vector at (" + std::to_string(m) + "," +
                    std::to_string(n) + ")");
          }
      }
    }
  }
  require_le(seconds_since(t0), kFamilyBudget, "runtime budget, seconds");
}

// ---------------------------------------------------------------------------
// 3. A rank-one observable refines and dilates: isometry, reproduction,
//    intertwining, and post-processing identities, with the predicted size.

void check3() {
  SystemPtr sys = pair_system_s3();
  Vector e0 = Vector::Zero(3);
  e0(0) = 1;
  Vector d1 = Vector::Zero(3);
  d1(0) = 1;
  d1(1) = 0.3;
  d1(2) = Complex(0, 0.2);
  NormalizationResult nr = normalize(build_from_seeds(
      sys, {Seed{0, Matrix(e0 * e0.adjoint())},
            Seed{1, Matrix(d1 * d1.adjoint())}}));
  require(nr.full_rank, "normalizer must be invertible");
  CovariantPOVM p = nr.povm;

  RefinedPOVM r = refine(p);
  require_le(r.coset_defect, kClosedTol, "coset consistency");
  require_le(r.post_processing_defect, kClosedTol, "post-processing identity");

  NaimarkBundle bd = dilate(r);
  const int expected = sys->num_orbits() * sys->group()->order;
  require(bd.dim == expected,
          "bundle dimension " + std::to_string(bd.dim) + ", expected " +
              std::to_string(expected));
  require(bd.minimal, "bundle must be minimal");
  require_le(bd.isometry_defect, kClosedTol, "isometry identity");
  require_le(bd.reproduction_defect, kClosedTol, "reproduction identity");
  require_le(bd.intertwining_defect, kClosedTol, "intertwining identity");
  require_le(bd.v_law_defect, kClosedTol, "bundle representation law");
  require_le(bd.q_covariance_defect, kClosedTol, "projection covariance");

  // End to end: parent effects are coset sums of dilated projections.
  const GSpace& sp = sys->space();
  double worst = 0;
  for (int x = 0; x < sp.num_points; ++x) {
    const int o = sp.orbit_of[x];
    Matrix sum = Matrix::Zero(3, 3);
    for (int h : sp.stabilizer[o])
      sum += bd.j.adjoint() *
             bd.q(o, sys->group()->mult(sp.section[x], h)) * bd.j;
    worst = std::max(worst, frobenius(sum - p.effects[x]));
  }
  require_le(worst, kClosedTol, "parent reproduction through cosets");
}

// ---------------------------------------------------------------------------
// 4. A genuinely projective qubit representation: its multiplier order is
//    found (checked by brute force), and the lift to the central extension
//    validates as an ordinary representation.

void check4() {
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

  // Brute force on the raw multiplier: smallest power sending every value
  // to one. Independent of the analysis below.
  const Matrix raw = infer_multiplier(*g4, mats);
  int p_brute = 0;
  for (int p = 1; p <= g4->order && p_brute == 0; ++p) {
    bool all_one = true;
    for (int g = 0; g < g4->order && all_one; ++g)
      for (int h = 0; h < g4->order && all_one; ++h) {
        Complex v(1, 0);
        for (int k = 0; k < p; ++k) v *= raw(g, h);
        if (std::abs(v - Complex(1, 0)) > kEntryTol) all_one = false;
      }
    if (all_one) p_brute = p;
  }
  require(p_brute == 2, "brute-force multiplier order " +
                            std::to_string(p_brute) + ", expected 2");

  Representation u = matrix_rep(g4, mats, raw);
  MultiplierAnalysis ma = multiplier_order(u);
  require(ma.p == p_brute, "analysis order " + std::to_string(ma.p) +
                               " disagrees with brute force");
  require_le(ma.snap_defect, kEntryTol, "root-of-unity snap");

  CentralExtension ext = central_extension(g4, ma);
  require(ext.extended->order == g4->order * ma.p,
          "extension order must be the product");
  Representation lifted = lift_rep(ext, u, ma);
  require(!lifted.projective(), "lift must carry a trivial multiplier");
  RepReport rr = validate_representation(lifted);
  require_le(rr.unitarity_defect, kEntryTol, "lift unitarity");
  require_le(rr.law_defect, kEntryTol, "lift product law");
  require_le(rr.multiplier_defect, kEntryTol, "lift multiplier normalization");
}

// ---------------------------------------------------------------------------
// 5. Seed-built observables lie in the brute-force solution space and the
//    solver's solutions are covariant and normalized, over twenty seeded
//    random draws; the degenerate irreducible system collapses to one ray.

void check5() {
  // Pool of small systems: representation dimension at most four, at most
  // nine outcomes.
  std::vector<SystemPtr> pool;
  {
    auto s3 = symmetric_group(3);
    pool.push_back(
        make_system(natural_action_space(s3), permutation_rep(s3)));
    pool.push_back(pair_system_s3());
    pool.push_back(
        make_system(regular_action_space(s3), permutation_rep(s3)));
    auto c3 = cyclic_group(3);
    pool.push_back(make_system(regular_action_space(c3), regular_rep(c3)));
    auto c4 = cyclic_group(4);
    pool.push_back(make_system(regular_action_space(c4), regular_rep(c4)));
    auto v4 = direct_product(cyclic_group(2), cyclic_group(2));
    pool.push_back(make_system(regular_action_space(v4), regular_rep(v4)));
    auto s4 = symmetric_group(4);
    pool.push_back(make_system(natural_action_space(s4), s4_standard(s4)));
    // Two fixed points of the order-two group, sign representation on one.
    auto c2 = cyclic_group(2);
    pool.push_back(make_system(
        make_gspace(c2, {0, 1, 0, 1}),
        matrix_rep(c2, {Matrix::Identity(2, 2),
                        (Matrix(2, 2) << 1, 0, 0, -1).finished()})));
  }

  std::vector<SolverResult> solved;
  solved.reserve(pool.size());
  for (const SystemPtr& sys : pool) {
    require(sys->dim() <= 4 && sys->num_points() <= 9,
            "pool system out of the size envelope");
    solved.push_back(solve_covariant(sys));
  }

  Rng rng(kDefaultSeed);
  std::uniform_real_distribution<double> unit(-1, 1);
  int trials = 0;
  for (int round = 0; round < 3; ++round) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const SystemPtr& sys = pool[i];
      const SolverResult& sr = solved[i];
      const std::string tag = "system " + std::to_string(i) + " round " +
                              std::to_string(round) + ": ";

      std::vector<Seed> seeds;
      for (int o = 0; o < sys->num_orbits(); ++o)
        seeds.push_back(Seed{o, random_seed(sys, o, rng)});
      CovariantPOVM p = build_from_seeds(sys, seeds);
      require_le(linear_membership_defect(sr, p.effects), kRandomTol,
                 tag + "raw family membership");
      NormalizationResult nr = normalize(p);
      require(nr.full_rank, tag + "random normalizer must be invertible");
      require_le(affine_membership_defect(sr, nr.povm.effects), kRandomTol,
                 tag + "normalized family membership");

      // Converse: a random solver point is a normalized covariant family.
      RealVector coeff(sr.affine_dim);
      for (int k = 0; k < sr.affine_dim; ++k) coeff(k) = unit(rng);
      const std::vector<Matrix> family =
          sr.decode(sr.particular + sr.affine_basis * coeff);
      const int d = sys->dim();
      Matrix total = Matrix::Zero(d, d);
      for (const Matrix& m : family) total += m;
      require_le(frobenius(total - Matrix::Identity(d, d)), kRandomTol,
                 tag + "solver point normalization");
      double cov = 0;
      const GSpace& sp = sys->space();
      for (int g = 0; g < sys->group()->order; ++g) {
        const Matrix& ug = sys->rep()(g);
        for (int pt = 0; pt < sp.num_points; ++pt)
          cov = std::max(cov, frobenius(ug * family[pt] * ug.adjoint() -
                                        family[sp.act(g, pt)]));
      }
      require_le(cov, kRandomTol, tag + "solver point covariance");
      ++trials;
    }
  }
  require(trials >= 20, "fewer than twenty random draws");

  // Irreducible stabilizer restriction: the solution space is a single ray.
  auto s4 = symmetric_group(4);
  std::vector<int> all(24);
  for (int i = 0; i < 24; ++i) all[i] = i;
  const auto dual = complete_dual(make_subgroup(s4, all));
  require(dual.size() == 5 && dual[2].dim == 2, "unexpected dual of S4");
  SystemPtr degen = make_system(natural_action_space(s4),
                                matrix_rep(s4, dual[2].matrices));
  SolverResult dsr = solve_covariant(degen);
  require(dsr.linear_dim == 1,
          "degenerate solution dimension " + std::to_string(dsr.linear_dim) +
              ", expected 1");
  require(dsr.affine_dim == 0, "degenerate slice must be a point");
}

// ---------------------------------------------------------------------------
// 6. One hundred seeded random intertwiner sets: renormalization,
//    covariance, all four dilation identities, and the implication
//    "extreme among all instruments => extreme among covariant ones".

void check6() {
  SystemPtr sys = pair_system_s3();
  const Representation& v = sys->rep();
  const SolutionTable table = solution_table(sys, v);
  Rng rng(kDefaultSeed);

  int extremes = 0, splits = 0, counterexamples = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::string tag = "trial " + std::to_string(trial) + ": ";
    RenormalizationResult rn =
        renormalize_intertwiners(random_set(sys, v, table, rng));
    require(rn.full_rank, tag + "renormalization must be invertible");
    IntertwinerSet red = reduce_to_minimal(rn.set);
    IntertwinerReport rep = validate_intertwiners(red);
    require(rep.minimal, tag + "reduced set must be minimal");
    require_le(rep.normalization_defect, kRandomTol, tag + "normalization");
    require_le(rep.intertwining_defect, kRandomTol, tag + "intertwining");

    CovariantInstrument instr = build_instrument(red);
    require_le(instr.covariance_defect(), kRandomTol, tag + "covariance");

    DilationBundle bd = minimal_dilation(red);
    require(bd.minimal, tag + "dilation must be minimal");
    require_le(bd.isometry_defect, kRandomTol, tag + "dilation isometry");
    require_le(bd.stinespring_defect, kRandomTol, tag + "dilation factor");
    require_le(bd.intertwining_defect, kRandomTol,
               tag + "dilation intertwining");
    require_le(bd.imprimitivity_defect, kRandomTol,
               tag + "dilation imprimitivity");

    InstrExtremality cov = extreme_in_covariance_structure(red);
    InstrExtremality glob = extreme_global(instr);
    if (glob.extreme && !cov.extreme) ++counterexamples;
    (cov.extreme ? extremes : splits) += 1;
  }
  require(counterexamples == 0,
          std::to_string(counterexamples) + " extremality counterexamples");
  require(extremes >= 1 && splits >= 1,
          "sample must contain both extreme and non-extreme sets");
}

// ---------------------------------------------------------------------------
// 7. Irreducible representation, single orbit: one class of multiplicity one
//    is extreme; two classes are not, and the witness splits the instrument
//    into two whose average reproduces it.

void check7() {
  auto s4 = symmetric_group(4);
  Representation u = s4_standard(s4);
  SystemPtr sys = make_system(natural_action_space(s4), u);
  require(sys->num_orbits() == 1, "natural action must be transitive");
  const SolutionTable table = solution_table(sys, u);
  require(table[0].size() == 3, "point stabilizer must have three classes");

  Rng rng(kDefaultSeed);
  for (int c = 0; c < 3; ++c) {
    const std::string tag = "class " + std::to_string(c) + ": ";
    require(!table[0][c].empty(), tag + "solution space must not vanish");
    IntertwinerSet s{sys, u, {IntertwinerBlock{0, c, {}}}};
    s.blocks[0].ops.push_back(
        random_tuple(table[0][c], sys->dual(0)[c].dim, 3, 3, rng));
    RenormalizationResult rn = renormalize_intertwiners(s);
    require(rn.full_rank, tag + "renormalization must be invertible");
    require(validate_intertwiners(rn.set).minimal, tag + "must stay minimal");
    require(extreme_in_covariance_structure(rn.set).extreme,
            tag + "single class of multiplicity one must be extreme");
  }

  // Two one-dimensional classes: never extreme; verify the decomposition.
  const int triv = trivial_class(sys->dual(0));
  int sign = -1;
  for (int c = 0; c < 3; ++c)
    if (sys->dual(0)[c].dim == 1 && c != triv) sign = c;
  require(triv >= 0 && sign >= 0, "two one-dimensional classes expected");

  IntertwinerSet s{sys, u, {}};
  s.blocks.push_back({0, triv, {random_tuple(table[0][triv], 1, 3, 3, rng)}});
  s.blocks.push_back({0, sign, {random_tuple(table[0][sign], 1, 3, 3, rng)}});
  IntertwinerSet red = reduce_to_minimal(renormalize_intertwiners(s).set);
  require(validate_intertwiners(red).minimal, "reduced set must be minimal");

  InstrExtremality cov = extreme_in_covariance_structure(red);
  require(!cov.extreme, "two classes must not be extreme");
  WitnessSplit split = split_by_witness(red, cov.witness);
  require_le(split.average_defect, kRandomTol, "witness average");

  // Construct both implied instruments and average their maps directly.
  IntertwinerReport rp = validate_intertwiners(split.plus);
  IntertwinerReport rm = validate_intertwiners(split.minus);
  require(rp.normalized && rm.normalized,
          "both halves must be genuine instruments");
  CovariantInstrument base = build_instrument(red);
  CovariantInstrument plus = build_instrument(split.plus);
  CovariantInstrument minus = build_instrument(split.minus);
  require(map_distance(plus, minus) > 1e-7,
          "halves must be genuinely different");
  double worst = 0;
  const auto basis = hermitian_basis(sys->dim());
  for (int x = 0; x < sys->num_points(); ++x)
    for (const Matrix& e : basis)
      worst = std::max(
          worst, frobenius(0.5 * (plus.apply(x, e) + minus.apply(x, e)) -
                           base.apply(x, e)));
  require_le(worst, kRandomTol, "average must reproduce the instrument");
}

}  // namespace

int main() {
  struct Check {
    const char* label;
    void (*body)();
  };
  const Check checks[] = {
      {"pair geometry and reference effects", check1},
      {"closed-form family across dimensions two to five", check2},
      {"rank-one refinement and dilation bundle", check3},
      {"multiplier order, lift, and extension", check4},
      {"seed construction versus brute-force solver", check5},
      {"randomized instrument pipeline", check6},
      {"single-orbit extremality law", check7},
  };

  int failed = 0;
  for (int i = 0; i < 7; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      checks[i].body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (error.empty()) {
      std::printf("[PASS] %d/7 %s (%.2f s)\n", i + 1, checks[i].label,
                  seconds_since(t0));
    } else {
      std::printf("[FAIL] %d/7 %s — %s\n", i + 1, checks[i].label,
                  error.c_str());
      ++failed;
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
