#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "covkit/error.hpp"

namespace covkit {

// A finite group given by element ids 0..order-1. Most groups carry a dense
// multiplication table; symmetric groups too large for that (order > 10080,
// i.e. S_8) compose their permutation labels on demand and rank the result
// with the Lehmer code, behind the same mult() API.
struct FiniteGroup {
  int order = 0;
  int identity = 0;
  std::vector<int> table;     // row-major order*order; may be empty (see above)
  std::vector<int> inverse;   // g -> g^{-1}
  std::vector<std::string> labels;  // size order, or empty

  // Permutation realization on {0..degree-1}, when available. images[g] is
  // the one-line form; for symmetric groups element ids follow lexicographic
  // order of the one-line forms.
  int degree = 0;
  std::vector<std::vector<int>> images;

  bool has_table() const { return !table.empty(); }
  bool has_images() const { return !images.empty(); }
  int mult(int g, int h) const;
  int inv(int g) const { return inverse[g]; }
  const std::string& label(int g) const;
  int element_by_label(const std::string& lab) const;  // -1 if absent
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// All permutations of {0..n-1} in lexicographic one-line order; labels in
// one-based cycle notation, identity "(1)". 1 <= n <= 8.
GroupPtr symmetric_group(int n);

// Z_n realized as rotations of {0..n-1}; labels "c0".."c{n-1}".
GroupPtr cyclic_group(int n);

// id = a * b_order + b; labels "(la,lb)".
GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);

// Group from an explicit table. Verifies the group axioms (full associativity
// scan for order <= 60, randomized 10^4 triples above).
GroupPtr group_from_table(std::vector<int> table,
                          std::vector<std::string> labels = {});

// Axiom check used by group_from_table and by tests.
void check_group_axioms(const FiniteGroup& g, std::uint64_t seed = 1);

std::string cycle_notation(const std::vector<int>& image);

// ---------------------------------------------------------------------------

enum class SectionPolicy { LexMin, MinMoved };

// A finite G-space: points 0..num_points-1 with a full action table, the
// orbit partition, per-orbit base point (smallest id), stabilizer and a
// section x -> g_x with g_x * base = x and section[base] = identity.
struct GSpace {
  GroupPtr group;
  int num_points = 0;
  std::vector<int> action;  // g * num_points + x -> g.x
  SectionPolicy policy = SectionPolicy::LexMin;

  std::vector<std::vector<int>> orbits;      // sorted point ids
  std::vector<int> orbit_of;                 // point -> orbit index
  std::vector<int> base_point;               // per orbit
  std::vector<std::vector<int>> stabilizer;  // per orbit, ascending element ids
  std::vector<int> section;                  // point -> element id

  // Set when built as a power of a base action: point = a*base_points + b.
  int power = 0;
  int base_points = 0;

  int act(int g, int x) const { return action[static_cast<std::size_t>(g) * num_points + x]; }
  int num_orbits() const { return static_cast<int>(orbits.size()); }
  std::string point_label(int x) const;
};

GSpace make_gspace(const GroupPtr& group, std::vector<int> action,
                   SectionPolicy policy = SectionPolicy::LexMin,
                   bool validate = true);

// The defining permutation action (requires images).
GSpace natural_action_space(const GroupPtr& group,
                            SectionPolicy policy = SectionPolicy::LexMin);

// power = 1 reproduces the natural action, power = 2 the diagonal action on
// ordered pairs.
GSpace product_action_space(const GroupPtr& group, int power,
                            SectionPolicy policy = SectionPolicy::LexMin);

// Left translation of the group on itself (free and transitive).
GSpace regular_action_space(const GroupPtr& group,
                            SectionPolicy policy = SectionPolicy::LexMin);

// One fixed point; the stabilizer is the whole group. Used for channels.
GSpace singleton_space(const GroupPtr& group);

// Exact stabilizer of an arbitrary point (scan).
std::vector<int> stabilizer_of(const GSpace& space, int point);

}  // namespace covkit
