#pragma once

#include "covkit/povm.hpp"

namespace covkit {

// Dense description of every covariant Hermitian effect family on the
// system, computed from first principles: conjugation-plus-relabelling is an
// orthogonal action on the real coordinate space of Hermitian families, its
// group average is the orthogonal projector onto the covariant subspace, and
// the normalization constraint cuts out an affine slice. Coordinates are
// Hilbert-Schmidt coefficients against the standard Hermitian basis, laid
// out point-major: theta[x * D^2 + a] = tr(B_a M_x).
struct SolverResult {
  SystemPtr system;
  int linear_dim = 0;  // covariant Hermitian families
  int affine_dim = 0;  // directions preserving the normalization
  RealMatrix linear_basis;       // N x linear_dim, orthonormal columns
  RealMatrix affine_basis;       // N x affine_dim, orthonormal columns
  RealVector particular;         // the uniform family Id / #X
  RealVector projector_spectrum; // descending; clusters at 1 and 0

  std::vector<Matrix> decode(const RealVector& coords) const;
  RealVector encode(const std::vector<Matrix>& effects) const;
};

SolverResult solve_covariant(const SystemPtr& sys);

// Relative distance of the family to the covariant subspace / the affine
// solution set of normalized covariant families.
double linear_membership_defect(const SolverResult& sr,
                                const std::vector<Matrix>& effects);
double affine_membership_defect(const SolverResult& sr,
                                const std::vector<Matrix>& effects);

}  // namespace covkit
