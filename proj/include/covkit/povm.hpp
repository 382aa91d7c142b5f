#pragma once

#include "covkit/system.hpp"

namespace covkit {

// One per orbit: a PSD block commuting with the restriction of U to the
// orbit's stabilizer. The effect at any point of the orbit is the transport
// U(s(x)) K U(s(x))*.
struct Seed {
  int orbit = 0;
  Matrix k;
};

struct CovariantPOVM {
  SystemPtr system;
  std::vector<Matrix> effects;  // per point
  std::vector<Seed> seeds;      // per orbit, k = effect at the base point

  Matrix normalizer() const;  // sum of all effects
  double normalization_defect() const;
  bool normalized(double tol) const { return normalization_defect() <= tol; }
  double covariance_defect() const;  // max over (g,x) of ||U M_x U* - M_gx||
};

CovariantPOVM build_from_seeds(const SystemPtr& sys, std::vector<Seed> seeds);

// Wraps explicit effects (validates shape, Hermiticity, PSD, covariance).
CovariantPOVM povm_from_effects(const SystemPtr& sys,
                                std::vector<Matrix> effects);

struct NormalizationResult {
  CovariantPOVM povm;
  Matrix k;         // normalizer of the input
  Matrix inv_sqrt;  // K^{-1/2} (pseudo-inverse square root)
  Matrix support;   // support projection of K = sum of output effects
  bool full_rank = false;
  double defect = 0;  // || sum of output effects - support ||
};
NormalizationResult normalize(const CovariantPOVM& p);

// Seed eigenvectors organized by irrep class of the stabilizer restriction:
// for each copy, the isometry S obeys U(h) S = S eta(h), so the columns
// d_i = sqrt(lambda) S e_i transform with the transposed matrix elements,
// and K_O = sum over copies of lambda S S*.
struct VectorFormCopy {
  int orbit = 0;
  int cls = 0;  // index into orbit(o).u_restriction.classes
  int m = 0;    // copy index within (orbit, cls)
  double lambda = 0;
  Matrix isometry;  // D x d_eta
};
struct VectorForm {
  std::vector<VectorFormCopy> copies;
  double reconstruction_defect = 0;  // max_O ||K_O - sum lambda S S*||
};
VectorForm recover_vector_form(const CovariantPOVM& p);

struct ObsClassification {
  bool is_rank1 = false;
  bool is_pvm = false;
  bool is_norm1 = false;
  bool is_informationally_complete = false;
  bool is_extreme_covariant = false;
  bool is_extreme_global = false;

  std::vector<int> effect_ranks;  // per point
  std::vector<bool> zero_orbit;   // per orbit: seed is (numerically) zero
  int ic_span_dim = 0;            // real span of effects in Hermitian space
  RealVector ic_singulars;
  RealVector extreme_covariant_singulars;
  RealVector extreme_global_singulars;

  double psd_margin = 0;  // smallest effect eigenvalue (>= -tol.psd expected)
  double normalization_defect = 0;
  double covariance_defect = 0;
  double pvm_defect = 0;
  double norm1_defect = 0;
  std::uint64_t seed = 0;

  // Non-extreme witness: a covariant Hermitian perturbation with zero sum
  // and ranges inside the effect supports; both M+P and M-P are POVMs.
  std::vector<Matrix> perturbation;
};
ObsClassification classify(const CovariantPOVM& p);

// Row and column marginals of a POVM on a squared space (points (m,n)).
struct Margins {
  std::vector<Matrix> row;  // A_m = sum_n M_(m,n)
  std::vector<Matrix> col;  // B_n = sum_m M_(m,n)
  double covariance_defect = 0;  // max ||U(g) A_m U(g)* - A_g(m)||, same for B
};
Margins margins(const CovariantPOVM& p);

// Same POVM with the flagged orbits' points removed from the outcome space.
CovariantPOVM drop_zero_orbits(const CovariantPOVM& p);

}  // namespace covkit
