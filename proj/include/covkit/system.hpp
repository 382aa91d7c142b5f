#pragma once

#include <memory>

#include "covkit/irrep.hpp"
#include "covkit/rep.hpp"

namespace covkit {

// Per-orbit structure derived from a (space, representation) pair.
struct OrbitContext {
  int index = 0;
  Subgroup stabilizer;
  // Decomposition of U restricted to the stabilizer, acting on the whole
  // space. Its classes are the irrep classes a seed support can contain.
  IrrepDecomposition u_restriction;
};

// Shared state for one covariance problem: the G-space, the representation
// acting on the system, tolerances and the RNG seed. Observables,
// instruments and dilations all hang off one of these; per-orbit work is
// computed once and cached.
class SystemContext {
 public:
  SystemContext(GSpace space, Representation rep, Tolerances tol = {},
                std::uint64_t seed = kDefaultSeed);

  const GSpace& space() const { return space_; }
  const Representation& rep() const { return rep_; }
  const GroupPtr& group() const { return space_.group; }
  const Tolerances& tol() const { return tol_; }
  std::uint64_t seed() const { return seed_; }
  int dim() const { return rep_.dim; }
  int num_points() const { return space_.num_points; }
  int num_orbits() const { return space_.num_orbits(); }
  int orbit_size(int o) const { return static_cast<int>(space_.orbits[o].size()); }
  int stabilizer_order(int o) const { return static_cast<int>(space_.stabilizer[o].size()); }

  const OrbitContext& orbit(int o) const;

  // Complete dual of the stabilizer of orbit o. Computed through the regular
  // representation, so it is guarded by the stabilizer order.
  const std::vector<IrrepClass>& dual(int o) const;
  static constexpr int kCompleteDualOrderLimit = 120;

  // (1/#G) sum_g U(g) a U(g)*
  Matrix group_average(const Matrix& a) const;
  // sum_{x in O} U(s(x)) seed U(s(x))*  =  (1/#H_O) sum_g U(g) seed U(g)*
  // when seed commutes with U|_{H_O}.
  Matrix orbit_sum(int o, const Matrix& seed) const;

  // Effect transported to a point: U(s(x)) seed U(s(x))*.
  Matrix transport(int x, const Matrix& seed) const;

 private:
  GSpace space_;
  Representation rep_;
  Tolerances tol_;
  std::uint64_t seed_;
  mutable std::vector<std::unique_ptr<OrbitContext>> orbits_;
  mutable std::vector<std::unique_ptr<std::vector<IrrepClass>>> duals_;
};

using SystemPtr = std::shared_ptr<SystemContext>;

SystemPtr make_system(GSpace space, Representation rep, Tolerances tol = {},
                      std::uint64_t seed = kDefaultSeed);

}  // namespace covkit
