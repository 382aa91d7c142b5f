#include "covkit/system.hpp"

namespace covkit {

SystemContext::SystemContext(GSpace space, Representation rep, Tolerances tol,
                             std::uint64_t seed)
    : space_(std::move(space)), rep_(std::move(rep)), tol_(tol), seed_(seed) {
  if (!space_.group || !rep_.group)
    fail_validation("system: space and representation need a group");
  if (space_.group.get() != rep_.group.get())
    fail_validation("system: space and representation use different groups");
  RepReport rr = validate_representation(rep_);
  if (!rr.pass(1e3 * tol_.unit))
    fail_validation("system: representation fails validation (unitarity " +
                    std::to_string(rr.unitarity_defect) + ", law " +
                    std::to_string(rr.law_defect) + ", multiplier " +
                    std::to_string(rr.multiplier_defect) + ")");
  orbits_.resize(space_.num_orbits());
  duals_.resize(space_.num_orbits());
}

const OrbitContext& SystemContext::orbit(int o) const {
  if (o < 0 || o >= num_orbits()) fail_validation("system: orbit out of range");
  if (!orbits_[o]) {
    auto ctx = std::make_unique<OrbitContext>();
    ctx->index = o;
    ctx->u_restriction = decompose_restriction(
        rep_, space_.stabilizer[o], seed_ ^ (0x9E3779B97F4A7C15ull * (o + 1)),
        nullptr, tol_);
    ctx->stabilizer = ctx->u_restriction.subgroup;
    orbits_[o] = std::move(ctx);
  }
  return *orbits_[o];
}

const std::vector<IrrepClass>& SystemContext::dual(int o) const {
  if (o < 0 || o >= num_orbits()) fail_validation("system: orbit out of range");
  if (!duals_[o]) {
    const OrbitContext& ctx = orbit(o);
    if (ctx.stabilizer.order() > kCompleteDualOrderLimit)
      fail_validation("system: stabilizer of orbit " + std::to_string(o) +
                      " has order " + std::to_string(ctx.stabilizer.order()) +
                      " > " + std::to_string(kCompleteDualOrderLimit) +
                      "; the complete dual is not available at this size");
    duals_[o] = std::make_unique<std::vector<IrrepClass>>(complete_dual(
        ctx.stabilizer, seed_ ^ (0xBF58476D1CE4E5B9ull * (o + 1)), tol_));
  }
  return *duals_[o];
}

Matrix SystemContext::group_average(const Matrix& a) const {
  Matrix sum = Matrix::Zero(a.rows(), a.cols());
  for (int g = 0; g < space_.group->order; ++g)
    sum += rep_(g) * a * rep_(g).adjoint();
  return sum / static_cast<double>(space_.group->order);
}

Matrix SystemContext::orbit_sum(int o, const Matrix& seed) const {
  Matrix sum = Matrix::Zero(seed.rows(), seed.cols());
  for (int x : space_.orbits[o]) sum += transport(x, seed);
  return sum;
}

Matrix SystemContext::transport(int x, const Matrix& seed) const {
  const Matrix& u = rep_(space_.section[x]);
  return u * seed * u.adjoint();
}

SystemPtr make_system(GSpace space, Representation rep, Tolerances tol,
                      std::uint64_t seed) {
  return std::make_shared<SystemContext>(std::move(space), std::move(rep), tol,
                                         seed);
}

}  // namespace covkit
