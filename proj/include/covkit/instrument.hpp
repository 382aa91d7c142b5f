#pragma once

#include "covkit/povm.hpp"
#include "covkit/system.hpp"

namespace covkit {

// One isotypic block of intertwiners: for the class eta = dual(orbit)[cls]
// of the orbit stabilizer, ops[m][i] is the i-th component of the m-th copy
// (D_out x D_in), obeying  L_i U(h) = sum_j eta_{i,j}(h) V(h) L_j.
struct IntertwinerBlock {
  int orbit = 0;
  int cls = 0;
  std::vector<std::vector<Matrix>> ops;

  int multiplicity() const { return static_cast<int>(ops.size()); }
};

struct IntertwinerSet {
  SystemPtr system;  // input side: outcome space and U
  Representation v;  // output representation of the same group
  std::vector<IntertwinerBlock> blocks;

  int in_dim() const { return system->dim(); }
  int out_dim() const { return v.dim; }
};

struct IntertwinerReport {
  double intertwining_defect = 0;    // worst violation of the block relation
  double normalization_defect = 0;   // weighted conjugation sum vs identity
  std::vector<RealVector> gram_spectra;  // per block: multiplicity Gram
  bool minimal = false;       // every multiplicity Gram has full rank
  bool normalized = false;
};
IntertwinerReport validate_intertwiners(const IntertwinerSet& s);

// Right-multiplies every operator by K^{-1/2}, where K is the weighted
// conjugation sum of the input set; K is group-invariant, so the relation is
// preserved and the new set sums to the support projection of K.
struct RenormalizationResult {
  IntertwinerSet set;
  Matrix k;
  Matrix inv_sqrt;
  bool full_rank = false;
  double defect = 0;  // new normalization sum vs support
};
RenormalizationResult renormalize_intertwiners(const IntertwinerSet& s);

// Unitarily mixes each block's copies to diagonalize its multiplicity Gram
// (the instrument is unchanged), then drops the null copies and empty
// blocks. The result is a minimal set inducing the same instrument.
IntertwinerSet reduce_to_minimal(const IntertwinerSet& s);

struct KrausLabel {
  int orbit = 0;
  int cls = 0;  // -1 when the operator does not come from a block
  int i = 0;
  int m = 0;
};

struct CovariantInstrument {
  SystemPtr system;
  Representation v;
  IntertwinerSet source;  // empty blocks for measure-and-prepare builds
  std::vector<std::vector<Matrix>> kraus;       // per point
  std::vector<std::vector<KrausLabel>> labels;  // per orbit

  Matrix apply(int x, const Matrix& rho) const;     // I_x(rho)
  Matrix heisenberg(int x, const Matrix& b) const;  // I_x*(B)
  CovariantPOVM povm() const;
  double covariance_defect() const;  // worst superoperator covariance error
};

// Canonical build: Kraus operators at the section representatives.
CovariantInstrument build_instrument(const IntertwinerSet& s);

// Kraus family of point x computed from an arbitrary coset representative g
// with g.base = x; coincides with the canonical family for every valid g.
std::vector<Matrix> kraus_at(const IntertwinerSet& s, int x, int g);

// Measure-and-prepare instrument I_x(rho) = tr(rho M_x) sigma_x, where the
// output states sigma_x = V(s(x)) sigma_O V(s(x))* are transported from
// per-orbit seeds (PSD, unit trace, commuting with V on the stabilizer).
CovariantInstrument nuclear_instrument(const CovariantPOVM& m,
                                       const Representation& v,
                                       const std::vector<Matrix>& sigma_seeds);

// Minimal covariant Stinespring dilation: an isometry J into K tensor M,
// outcome projections P_x on M, and a representation on M twisting the
// points by stabilizer cocycles.
struct DilationBundle {
  int dim = 0;  // dimension of M
  Matrix j;     // (out_dim * dim) x in_dim, row index k * dim + alpha
  std::vector<Matrix> p;  // per point, dim x dim
  Representation u_bar;
  double isometry_defect = 0;      // J*J vs identity
  double stinespring_defect = 0;   // I_x*(B) vs J*(B (x) P_x) J
  double intertwining_defect = 0;  // J U(g) vs (V(g) (x) Ubar(g)) J
  double imprimitivity_defect = 0; // Ubar(g) P_x Ubar(g)* vs P_gx
  bool minimal = false;            // per-point Kraus independence
};
DilationBundle minimal_dilation(const IntertwinerSet& s);

struct InstrExtremality {
  bool extreme = false;
  RealVector singular_values;
  // Per-block Hermitian multiplicity matrices; all zero when extreme. They
  // certify non-extremality through split_by_witness.
  std::vector<Matrix> witness;
};

// Extremality inside the covariance structure, decided by the independence
// of the averaged products  sum_g sum_i U(g) L*_{i,m} L_{i,n} U(g)*  over
// copy pairs of every block. Requires a minimal normalized set.
InstrExtremality extreme_in_covariance_structure(const IntertwinerSet& s);

// Extremality among all instruments: independence of the per-point products
// K*_{x,a} K_{x,b} over all pairs of canonical Kraus operators, all points.
InstrExtremality extreme_global(const CovariantInstrument& instr);

// Splits a non-extreme instrument along a witness: mixes multiplicities by
// (Id +/- eps W)^{1/2}, producing two covariant instruments whose average
// is the original.
struct WitnessSplit {
  IntertwinerSet plus;
  IntertwinerSet minus;
  double average_defect = 0;
};
WitnessSplit split_by_witness(const IntertwinerSet& s,
                              const std::vector<Matrix>& witness);

// Orthonormal basis of the solution space of the block relation for one
// (orbit, class): each element is a tuple (L_1, ..., L_{D_eta}).
std::vector<std::vector<Matrix>> intertwiner_solution_basis(
    const SystemPtr& sys, const Representation& v, int orbit, int cls);

// Channels are instruments on the one-point space (stabilizer = G, classes
// from the full dual). The helpers below wrap the generic machinery.
SystemPtr channel_system(const Representation& u, Tolerances tol = {},
                         std::uint64_t seed = kDefaultSeed);
struct ChannelReport {
  IntertwinerReport validation;
  InstrExtremality extremality;
  double commutation_defect = 0;  // products T_mn against U(g)
};
ChannelReport channel_extreme(const IntertwinerSet& s);

}  // namespace covkit
