#pragma once

#include <optional>

#include "covkit/group.hpp"
#include "covkit/matrix.hpp"

namespace covkit {

// A unitary (possibly projective) representation: element id -> matrix.
// The multiplier convention is U(gh) = m(g,h) U(g) U(h); an empty multiplier
// table means the trivial multiplier.
struct Representation {
  GroupPtr group;
  int dim = 0;
  std::vector<Matrix> matrices;
  Matrix multiplier;  // order x order, or empty

  bool projective() const { return multiplier.size() != 0; }
  Complex phase(int g, int h) const {
    return projective() ? multiplier(g, h) : Complex(1, 0);
  }
  const Matrix& operator()(int g) const { return matrices[g]; }
};

Representation permutation_rep(const GroupPtr& group);
Representation regular_rep(const GroupPtr& group);
Representation matrix_rep(const GroupPtr& group, std::vector<Matrix> matrices,
                          std::optional<Matrix> multiplier = std::nullopt);

// Recover m(g,h) = tr(U(gh) (U(g)U(h))^*) / dim from the matrices.
Matrix infer_multiplier(const FiniteGroup& group, const std::vector<Matrix>& u);

struct RepReport {
  double unitarity_defect = 0;   // max ||U(g)*U(g) - Id||
  double law_defect = 0;         // max ||U(gh) - m(g,h) U(g) U(h)||
  double multiplier_defect = 0;  // cocycle law and normalization of m
  bool pass(double tol) const {
    return unitarity_defect <= tol && law_defect <= tol &&
           multiplier_defect <= tol;
  }
};
RepReport validate_representation(const Representation& rep);

// Finite-order reduction of the multiplier. t(g) = prod_h m(g,h) gives
// m(g,h)^N = t(g)t(h)/t(gh) with N = #G; adjusting by the phases arg(t)/N
// leaves a cohomologous multiplier whose values are exact N-th roots of
// unity, which is then normalized to m(e,e) = 1 and reduced to its minimal
// order p (always p <= #G). exponent(g,h) holds q with m_adj = t^q for
// t = exp(2*pi*i/p).
struct MultiplierAnalysis {
  int p = 1;
  Complex t{1, 0};
  Eigen::MatrixXi exponent;      // values in 0..p-1
  Matrix adjusted;               // t^exponent, exact roots of unity
  std::vector<Complex> rep_phase;  // beta(g); U_adj(g) = beta(g) U(g)
  double snap_defect = 0;        // distance of values to the snapped roots
};
MultiplierAnalysis multiplier_order(const Representation& rep,
                                    const Tolerances& tol = {});

// U_adj(g) = beta(g) U(g), an ordinary or adjusted-multiplier representation.
Representation adjusted_rep(const Representation& rep,
                            const MultiplierAnalysis& ma);

// Central extension G_m = G x <t>, t of order p, with
// (g, t^k)(g', t^l) = (gg', conj(m(g,g')) t^{k+l}). Element id = g*p + k;
// identity (e, t^0).
struct CentralExtension {
  GroupPtr base;
  GroupPtr extended;
  int p = 1;
  int id(int g, int k) const { return g * p + k; }
  int parent_of(int id) const { return id / p; }
  int power_of(int id) const { return id % p; }
};
CentralExtension central_extension(const GroupPtr& group,
                                   const MultiplierAnalysis& ma);

// Lift of the phase-adjusted representation: U~(g, t^k) = t^k U_adj(g).
// Ordinary (trivial multiplier) by construction.
Representation lift_rep(const CentralExtension& ext, const Representation& rep,
                        const MultiplierAnalysis& ma);

// Same points, action through the quotient map G_m -> G.
GSpace lift_space(const CentralExtension& ext, const GSpace& space);

}  // namespace covkit
