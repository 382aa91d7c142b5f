#pragma once

#include "covkit/povm.hpp"

namespace covkit {

// One-parameter family of observables on C^D covariant under the natural
// permutation representation of Sym(D) acting on ordered pairs of basis
// labels. The outcome space is {0..D-1}^2 with point (m, n) stored at
// m * D + n; the diagonal is one orbit, the off-diagonal points another.
struct SymFamilySpec {
  int dim = 3;        // D, 2 <= D <= 7
  double alpha = 0;   // family parameter, >= 0
};

// Parameter at which every effect, diagonal points included, is the
// projection onto one explicit unit vector.
double symfam_alpha0();

// Closed forms, usable without building anything:
// normalizer of the raw (un-normalized) seed family,
//   K(alpha) = [(2D - 2 - sqrt 2) alpha^2 + 1] Id + sqrt 2 alpha^2 D P0,
// with P0 the projection onto the uniform vector.
Matrix symfam_k(const SymFamilySpec& spec);
// K(alpha)^{-1/2}, diagonal in the same two spectral blocks.
Matrix symfam_normalizer(const SymFamilySpec& spec);
// Effect of the normalized family at point (m, n), 0-based.
Matrix symfam_effect(const SymFamilySpec& spec, int m, int n);
// Unit vector whose projection is the (m, n) effect at alpha = alpha0.
// Valid for every pair, including m == n.
Vector symfam_alpha0_vector(int dim, int m, int n);

struct SymFamily {
  SymFamilySpec spec;
  SystemPtr system;
  CovariantPOVM povm;  // normalized
  Matrix k;            // closed-form K(alpha)
  Matrix inv_sqrt;     // closed-form K(alpha)^{-1/2}

  // Cross-checks of the construction pipeline against the closed forms.
  double k_defect = 0;           // raw normalizer vs k
  double normalizer_defect = 0;  // pipeline K^{-1/2} vs inv_sqrt
  double effect_defect = 0;      // max over points vs symfam_effect
};

SymFamily generate(const SymFamilySpec& spec);
// Reuses a previously built Sym(D) pair system (validated against spec.dim);
// building the system dominates the cost for large D, so parameter scans
// share one.
SymFamily generate(const SymFamilySpec& spec, const SystemPtr& sys);

struct SweepRow {
  double alpha = 0;
  ObsClassification classification;
  double margin_covariance_defect = 0;
  int min_margin_rank = 0;     // min over m of rank(A_m) at the rank cutoff
  double ic_min_singular = 0;  // smallest singular value, effect family
  double jump = 0;             // max effect distance to the previous row
  // Closed-form cross-checks, copied from the row's SymFamily.
  double k_defect = 0;
  double normalizer_defect = 0;
  double effect_defect = 0;
};

struct SweepResult {
  int dim = 0;
  std::vector<SweepRow> rows;
  // max over consecutive rows of jump / delta alpha (0 if fewer than two
  // distinct grid points); a finite-difference continuity certificate.
  double max_rate = 0;
};

SweepResult sweep(int dim, const std::vector<double>& grid,
                  Tolerances tol = {}, std::uint64_t seed = kDefaultSeed);

}  // namespace covkit
