#pragma once

#include <array>
#include <vector>

#include "covkit/povm.hpp"
#include "covkit/rep.hpp"

namespace covkit {

// Refinement of a rank-1 covariant observable onto the orbit-resolved space
// Orb x G carrying the action a.(o,g) = (o,ag): the effect at (o,g) is
// (1/#H_o) U(g)|d_o><d_o|U(g)*, and summing over a stabilizer coset recovers
// the parent effect. Zero seeds are kept as zero orbits.
struct RefinedPOVM {
  CovariantPOVM parent;
  std::vector<Vector> d;        // extracted seed vectors, one per orbit
  std::vector<bool> zero_orbit;
  CovariantPOVM refined;        // lives on its own Orb x G system
  std::vector<std::array<int, 2>> labels;  // refined point -> (orbit, element)
  double coset_defect = 0;            // effect constancy on stabilizer cosets
  double post_processing_defect = 0;  // parent effect vs coset sum

  int point(int orbit, int g) const;
};
RefinedPOVM refine(const CovariantPOVM& p);

// Dilation of the refinement onto the canonical rank-1 projection-valued
// measurement Q_{o,g} = |o,g><o,g| in dimension #Orb * #G, through
// J = sum_o (1/sqrt(#H_o)) sum_g |o,g><d_o|U(g)* and the multiplier left
// translation V(a)|o,g> = conj(m(a,g))|o,ag>. J*J equals the parent
// normalization operator, so J is an isometry exactly for normalized input.
struct NaimarkBundle {
  RefinedPOVM refined;
  int dim = 0;
  Matrix j;          // dim x input dim
  Representation v;  // left translations; carries the input multiplier
  std::vector<std::array<int, 2>> labels;  // basis vector -> (orbit, element)

  double reproduction_defect = 0;  // refined effect vs J* Q_{o,g} J
  double gram_defect = 0;          // J*J vs the parent normalization operator
  double isometry_defect = 0;      // J*J vs Id
  double intertwining_defect = 0;  // V(a)J - J U(a)
  double v_law_defect = 0;         // V(ab) - m(a,b) V(a) V(b), unitarity
  double q_covariance_defect = 0;  // Q_{o,ag} - V(a) Q_{o,g} V(a)*
  bool minimal = false;            // every d_o nonzero

  Matrix q(int orbit, int g) const;
};
NaimarkBundle dilate(const RefinedPOVM& refined);

// Replays refine + dilate over the central extension G x <t>, where the
// lifted input representation is ordinary and the action factors through
// the quotient. With a trivial multiplier this is a pure relabeling.
NaimarkBundle trivialize_multiplier(const NaimarkBundle& bundle,
                                    const MultiplierAnalysis& analysis);

// Left translations seen inside the full symmetric group of the element-id
// set {0..#G-1}: V extends to vbar(pi)|o,g> = |o,pi(g)>, a direct sum of
// #Orb copies of the permutation representation of Sym(G). Materialized for
// #G <= 5; beyond that only the on-demand evaluator is available and has to
// be requested explicitly.
struct SymEmbedding {
  int num_orbits = 0;
  int group_order = 0;
  bool materialized = false;
  GroupPtr sym;                // Sym(G) when materialized
  Representation v_bar;        // over sym when materialized
  std::vector<std::vector<int>> translations;  // g -> one-line form of g.
  std::vector<int> numbering;  // g -> element id in sym (materialized)

  double law_defect = 0;           // representation law of vbar
  double q_covariance_defect = 0;  // Q under transposition generators
  double restriction_defect = 0;   // vbar at a translation vs the bundle V

  // vbar for an arbitrary permutation of element ids in one-line form.
  Matrix evaluate(const std::vector<int>& pi) const;
};
SymEmbedding embed_in_sym(const NaimarkBundle& bundle,
                          bool allow_on_demand = false);

}  // namespace covkit
