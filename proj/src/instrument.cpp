#include "covkit/instrument.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "covkit/irrep.hpp"

namespace covkit {
namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void require_ordinary(const Representation& r, const char* side) {
  if (!r.projective()) return;
  if (multiplier_order(r).p == 1) return;
  fail_validation(std::string(side) +
                  " representation carries a non-trivial multiplier; lift it "
                  "through the central extension first");
}

void check_structure(const IntertwinerSet& s) {
  if (!s.system) fail_validation("intertwiner set has no system");
  const SystemContext& sys = *s.system;
  if (!s.v.group || s.v.group.get() != sys.group().get())
    fail_validation("output representation must use the system's group object");
  if (s.v.dim <= 0 ||
      static_cast<int>(s.v.matrices.size()) != sys.group()->order)
    fail_validation("output representation is incomplete");
  require_ordinary(sys.rep(), "input");
  require_ordinary(s.v, "output");
  std::set<std::pair<int, int>> seen;
  for (const IntertwinerBlock& b : s.blocks) {
    if (b.orbit < 0 || b.orbit >= sys.num_orbits())
      fail_validation("block orbit index out of range");
    const auto& dual = sys.dual(b.orbit);
    if (b.cls < 0 || b.cls >= static_cast<int>(dual.size()))
      fail_validation("block class index out of range");
    if (!seen.insert({b.orbit, b.cls}).second)
      fail_validation("duplicate (orbit, class) block");
    const int d = dual[b.cls].dim;
    for (const auto& copy : b.ops) {
      if (static_cast<int>(copy.size()) != d)
        fail_validation("each copy needs one operator per class dimension");
      for (const Matrix& l : copy)
        if (l.rows() != s.v.dim || l.cols() != sys.dim())
          fail_validation("intertwiners must be out_dim x in_dim");
    }
  }
}

Matrix block_gram(const IntertwinerBlock& b) {
  const int mm = b.multiplicity();
  Matrix g = Matrix::Zero(mm, mm);
  for (int m = 0; m < mm; ++m)
    for (int n = 0; n < mm; ++n) {
      Complex v{0, 0};
      for (std::size_t i = 0; i < b.ops[m].size(); ++i)
        v += (b.ops[m][i].adjoint() * b.ops[n][i]).trace();
      g(m, n) = v;
    }
  return hermitize(g);
}

// sum over orbits and the whole group of the weighted conjugations
// (1/#H_O) U(g) (sum L* L) U(g)*.
Matrix normalization_sum(const IntertwinerSet& s) {
  const SystemContext& sys = *s.system;
  const int d = sys.dim();
  std::vector<Matrix> t(sys.num_orbits(), Matrix::Zero(d, d));
  for (const auto& b : s.blocks)
    for (const auto& copy : b.ops)
      for (const Matrix& l : copy) t[b.orbit] += l.adjoint() * l;
  Matrix out = Matrix::Zero(d, d);
  const double order = sys.group()->order;
  for (int o = 0; o < sys.num_orbits(); ++o) {
    if (t[o].norm() == 0) continue;
    out += (order / sys.stabilizer_order(o)) * sys.group_average(t[o]);
  }
  return out;
}

struct Assembly {
  std::vector<std::vector<Matrix>> kraus;
  std::vector<std::vector<KrausLabel>> labels;
};

// Canonical Kraus families: the block operators transported along the
// section, in block order with the copy index outermost.
Assembly assemble(const IntertwinerSet& s) {
  const SystemContext& sys = *s.system;
  Assembly a;
  a.labels.resize(sys.num_orbits());
  for (const auto& b : s.blocks) {
    const int d = sys.dual(b.orbit)[b.cls].dim;
    for (int m = 0; m < b.multiplicity(); ++m)
      for (int i = 0; i < d; ++i)
        a.labels[b.orbit].push_back({b.orbit, b.cls, i, m});
  }
  a.kraus.resize(sys.num_points());
  for (int x = 0; x < sys.num_points(); ++x) {
    const int o = sys.space().orbit_of[x];
    const int g = sys.space().section[x];
    const Matrix& vg = s.v(g);
    const Matrix ug_adj = sys.rep()(g).adjoint();
    for (const auto& b : s.blocks) {
      if (b.orbit != o) continue;
      for (const auto& copy : b.ops)
        for (const Matrix& l : copy) a.kraus[x].push_back(vg * l * ug_adj);
    }
  }
  return a;
}

void gate_built(const IntertwinerReport& rep, const Tolerances& tol) {
  if (rep.intertwining_defect > 100 * tol.lin)
    fail_validation("intertwining relation violated");
  if (!rep.normalized)
    fail_validation("intertwiner set is not normalized; renormalize first");
}

// Turns a dependence kernel over (block, m, n) triples into per-block
// Hermitian matrices, weighted by the stabilizer orders so that mixing the
// copies by (Id +/- eps W)^{1/2} preserves normalization.
std::vector<Matrix> kernel_witness(const IntertwinerSet& s,
                                   const std::vector<std::array<int, 3>>& index,
                                   const Vector& kernel) {
  std::vector<Matrix> raw;
  raw.reserve(s.blocks.size());
  for (const auto& b : s.blocks)
    raw.push_back(Matrix::Zero(b.multiplicity(), b.multiplicity()));
  for (std::size_t k = 0; k < index.size(); ++k)
    raw[index[k][0]](index[k][1], index[k][2]) = kernel(static_cast<Eigen::Index>(k));
  // The averaged products map to their adjoints under (m,n) -> (n,m), so the
  // kernel is closed under the blockwise adjoint; both the Hermitian and the
  // anti-Hermitian part lie in it, and at least one is non-trivial.
  double nh = 0, na = 0;
  std::vector<Matrix> herm, anti;
  for (const Matrix& e : raw) {
    Matrix h = hermitize(e);
    Matrix a = (e - e.adjoint()) / Complex(0, 2);
    nh += h.squaredNorm();
    na += a.squaredNorm();
    herm.push_back(std::move(h));
    anti.push_back(std::move(a));
  }
  const double norm = std::sqrt(std::max(nh, na));
  if (norm == 0) fail_numerical("degenerate dependence witness");
  std::vector<Matrix>& pick = nh >= na ? herm : anti;
  std::vector<Matrix> out;
  for (std::size_t bi = 0; bi < pick.size(); ++bi) {
    const double w = s.system->stabilizer_order(s.blocks[bi].orbit);
    // Transposed: the split mixes copies through columns of (Id +/- eps W)^{1/2},
    // which feeds W(n,m) into the product at (m,n) of the nulled combination.
    out.push_back(pick[bi].transpose() * (w / norm));
  }
  return out;
}

// Averaged products of the extremality criterion, indexed (block, m, n).
std::vector<Matrix> averaged_products(const IntertwinerSet& s,
                                      std::vector<std::array<int, 3>>& index) {
  const SystemContext& sys = *s.system;
  std::vector<Matrix> ops;
  for (int bi = 0; bi < static_cast<int>(s.blocks.size()); ++bi) {
    const auto& b = s.blocks[bi];
    for (int m = 0; m < b.multiplicity(); ++m)
      for (int n = 0; n < b.multiplicity(); ++n) {
        Matrix t = Matrix::Zero(sys.dim(), sys.dim());
        for (std::size_t i = 0; i < b.ops[m].size(); ++i)
          t += b.ops[m][i].adjoint() * b.ops[n][i];
        ops.push_back(sys.group_average(t));
        index.push_back({bi, m, n});
      }
  }
  return ops;
}

}  // namespace

IntertwinerReport validate_intertwiners(const IntertwinerSet& s) {
  check_structure(s);
  const SystemContext& sys = *s.system;
  const Tolerances& tol = sys.tol();
  if (!validate_representation(s.v).pass(tol.unit))
    fail_validation("output representation fails validation");
  IntertwinerReport rep;
  for (const auto& b : s.blocks) {
    const OrbitContext& oc = sys.orbit(b.orbit);
    const IrrepClass& eta = sys.dual(b.orbit)[b.cls];
    for (int h : oc.stabilizer.elements) {
      const Matrix& uh = sys.rep()(h);
      const Matrix& vh = s.v(h);
      const Matrix& eh = eta.matrices[oc.stabilizer.local_of(h)];
      for (const auto& copy : b.ops)
        for (int i = 0; i < eta.dim; ++i) {
          Matrix rhs = Matrix::Zero(s.v.dim, sys.dim());
          for (int j = 0; j < eta.dim; ++j) rhs += eh(i, j) * (vh * copy[j]);
          rep.intertwining_defect =
              std::max(rep.intertwining_defect, frobenius(copy[i] * uh - rhs));
        }
    }
    rep.gram_spectra.push_back(hermitian_eig(block_gram(b)).values);
  }
  rep.normalization_defect = frobenius(normalization_sum(s) -
                                       Matrix::Identity(sys.dim(), sys.dim()));
  rep.normalized = rep.normalization_defect <= 100 * tol.lin;
  double gmax = 0;
  for (const auto& sp : rep.gram_spectra)
    if (sp.size() > 0) gmax = std::max(gmax, sp(sp.size() - 1));
  rep.minimal = true;
  for (const auto& sp : rep.gram_spectra)
    if (sp.size() == 0 || sp(0) <= tol.rank_cutoff * gmax) rep.minimal = false;
  return rep;
}

RenormalizationResult renormalize_intertwiners(const IntertwinerSet& s) {
  check_structure(s);
  const SystemContext& sys = *s.system;
  RenormalizationResult out;
  out.k = hermitize(normalization_sum(s));
  IsqrtResult isq = hermitian_isqrt(out.k, sys.tol().rank_cutoff, sys.tol().psd);
  if (isq.rank == 0) fail_validation("all intertwiners vanish");
  out.inv_sqrt = isq.inv_sqrt;
  out.full_rank = isq.rank == sys.dim();
  out.set = s;
  for (auto& b : out.set.blocks)
    for (auto& copy : b.ops)
      for (Matrix& l : copy) l = l * isq.inv_sqrt;
  out.defect = frobenius(normalization_sum(out.set) - isq.support);
  if (out.defect > 1e3 * sys.tol().lin)
    fail_numerical("renormalized intertwiners miss the support projection");
  return out;
}

IntertwinerSet reduce_to_minimal(const IntertwinerSet& s) {
  check_structure(s);
  const SystemContext& sys = *s.system;
  const Tolerances& tol = sys.tol();
  std::vector<EigResult> eigs;
  double gmax = 0;
  for (const auto& b : s.blocks) {
    eigs.push_back(hermitian_eig(block_gram(b)));
    if (eigs.back().values.size() > 0)
      gmax = std::max(gmax, eigs.back().values(eigs.back().values.size() - 1));
  }
  IntertwinerSet out{s.system, s.v, {}};
  for (std::size_t bi = 0; bi < s.blocks.size(); ++bi) {
    const auto& b = s.blocks[bi];
    const int mm = b.multiplicity();
    if (mm == 0) continue;
    const int d = sys.dual(b.orbit)[b.cls].dim;
    IntertwinerBlock nb{b.orbit, b.cls, {}};
    // Unitary mixing of the copies diagonalizes the Gram matrix and leaves
    // the instrument unchanged; null directions are dropped.
    for (int c = mm - 1; c >= 0; --c) {
      if (eigs[bi].values(c) <= tol.rank_cutoff * gmax) continue;
      std::vector<Matrix> copy(d, Matrix::Zero(s.v.dim, sys.dim()));
      for (int i = 0; i < d; ++i)
        for (int m = 0; m < mm; ++m)
          copy[i] += eigs[bi].vectors(m, c) * b.ops[m][i];
      nb.ops.push_back(std::move(copy));
    }
    if (!nb.ops.empty()) out.blocks.push_back(std::move(nb));
  }
  return out;
}

Matrix CovariantInstrument::apply(int x, const Matrix& rho) const {
  if (!system || x < 0 || x >= system->num_points())
    fail_validation("outcome out of range");
  if (rho.rows() != system->dim() || rho.cols() != system->dim())
    fail_validation("input operator has the wrong shape");
  Matrix out = Matrix::Zero(v.dim, v.dim);
  for (const Matrix& k : kraus[x]) out += k * rho * k.adjoint();
  return out;
}

Matrix CovariantInstrument::heisenberg(int x, const Matrix& b) const {
  if (!system || x < 0 || x >= system->num_points())
    fail_validation("outcome out of range");
  if (b.rows() != v.dim || b.cols() != v.dim)
    fail_validation("output operator has the wrong shape");
  Matrix out = Matrix::Zero(system->dim(), system->dim());
  for (const Matrix& k : kraus[x]) out += k.adjoint() * b * k;
  return out;
}

CovariantPOVM CovariantInstrument::povm() const {
  const Matrix id = Matrix::Identity(v.dim, v.dim);
  std::vector<Matrix> effects;
  effects.reserve(system->num_points());
  for (int x = 0; x < system->num_points(); ++x)
    effects.push_back(heisenberg(x, id));
  return povm_from_effects(system, std::move(effects));
}

double CovariantInstrument::covariance_defect() const {
  const SystemContext& sys = *system;
  const double din = sys.dim(), dout = v.dim;
  if (din * din * dout * dout > static_cast<double>(1 << 20))
    fail_validation("superoperator comparison exceeds the size guard");
  const std::vector<Matrix> basis = hermitian_basis(sys.dim());
  double worst = 0;
  for (int g = 0; g < sys.group()->order; ++g) {
    const Matrix& ug = sys.rep()(g);
    const Matrix& vg = v(g);
    for (int x = 0; x < sys.num_points(); ++x) {
      const int gx = sys.space().act(g, x);
      for (const Matrix& b : basis) {
        const Matrix lhs = apply(gx, ug * b * ug.adjoint());
        const Matrix rhs = vg * apply(x, b) * vg.adjoint();
        worst = std::max(worst, frobenius(lhs - rhs));
      }
    }
  }
  return worst;
}

CovariantInstrument build_instrument(const IntertwinerSet& s) {
  IntertwinerReport rep = validate_intertwiners(s);
  gate_built(rep, s.system->tol());
  CovariantInstrument instr;
  instr.system = s.system;
  instr.v = s.v;
  instr.source = s;
  Assembly a = assemble(s);
  instr.kraus = std::move(a.kraus);
  instr.labels = std::move(a.labels);
  return instr;
}

std::vector<Matrix> kraus_at(const IntertwinerSet& s, int x, int g) {
  check_structure(s);
  const SystemContext& sys = *s.system;
  const GSpace& sp = sys.space();
  if (x < 0 || x >= sys.num_points()) fail_validation("outcome out of range");
  if (g < 0 || g >= sys.group()->order)
    fail_validation("group element out of range");
  const int o = sp.orbit_of[x];
  if (sp.act(g, sp.base_point[o]) != x)
    fail_validation("element does not carry the base point to the outcome");
  const int ginv = sys.group()->inv(g);
  const Matrix& vg = s.v(g);
  const Matrix ug_adj = sys.rep()(g).adjoint();
  std::vector<Matrix> out;
  for (const auto& b : s.blocks) {
    if (b.orbit != o) continue;
    const IrrepClass& eta = sys.dual(o)[b.cls];
    const Matrix zeta =
        cocycle_eval(eta, sys.orbit(o).stabilizer, sp, o, ginv, x);
    for (const auto& copy : b.ops)
      for (int i = 0; i < eta.dim; ++i) {
        Matrix k = Matrix::Zero(s.v.dim, sys.dim());
        for (int j = 0; j < eta.dim; ++j)
          k += zeta(i, j) * (vg * copy[j] * ug_adj);
        out.push_back(std::move(k));
      }
  }
  return out;
}

CovariantInstrument nuclear_instrument(const CovariantPOVM& m,
                                       const Representation& v,
                                       const std::vector<Matrix>& sigma_seeds) {
  if (!m.system) fail_validation("observable has no system");
  const SystemContext& sys = *m.system;
  const Tolerances& tol = sys.tol();
  if (!v.group || v.group.get() != sys.group().get())
    fail_validation("output representation must use the system's group object");
  if (static_cast<int>(v.matrices.size()) != sys.group()->order || v.dim <= 0)
    fail_validation("output representation is incomplete");
  require_ordinary(sys.rep(), "input");
  require_ordinary(v, "output");
  if (!validate_representation(v).pass(tol.unit))
    fail_validation("output representation fails validation");
  if (static_cast<int>(sigma_seeds.size()) != sys.num_orbits())
    fail_validation("one output state per orbit required");
  if (m.normalization_defect() > 100 * tol.lin)
    fail_validation("observable must be normalized");

  CovariantInstrument instr;
  instr.system = m.system;
  instr.v = v;
  instr.source = IntertwinerSet{m.system, v, {}};
  instr.kraus.resize(sys.num_points());
  instr.labels.resize(sys.num_orbits());
  for (int o = 0; o < sys.num_orbits(); ++o) {
    const Matrix& raw = sigma_seeds[o];
    if (raw.rows() != v.dim || raw.cols() != v.dim)
      fail_validation("output state has the wrong shape");
    const double scale = std::max(1.0, frobenius(raw));
    if (!is_hermitian(raw, 100 * tol.lin * scale))
      fail_validation("output state must be Hermitian");
    const Complex tr = raw.trace();
    if (std::abs(tr.real() - 1.0) + std::abs(tr.imag()) > 100 * tol.lin)
      fail_validation("output state must have unit trace");
    if (hermitian_eig(hermitize(raw)).values(0) < -tol.psd * scale)
      fail_validation("output state must be positive semidefinite");

    // Average over the stabilizer so the transported states are coherent.
    Matrix sigma = Matrix::Zero(v.dim, v.dim);
    const Subgroup& stab = sys.orbit(o).stabilizer;
    for (int h : stab.elements) sigma += v(h) * raw * v(h).adjoint();
    sigma = hermitize(sigma / static_cast<double>(stab.order()));

    const EigResult me = hermitian_eig(hermitize(m.seeds[o].k));
    const EigResult se = hermitian_eig(sigma);
    const double mmax = me.values.size() ? me.values(me.values.size() - 1) : 0;
    const double smax = se.values.size() ? se.values(se.values.size() - 1) : 0;
    std::vector<Matrix> base;
    int ai = 0;
    for (Eigen::Index a = 0; a < me.values.size(); ++a) {
      if (me.values(a) <= tol.rank_cutoff * std::max(mmax, 0.0)) continue;
      int bi = 0;
      for (Eigen::Index b = 0; b < se.values.size(); ++b) {
        if (se.values(b) <= tol.rank_cutoff * std::max(smax, 0.0)) continue;
        const double w = std::sqrt(se.values(b) * me.values(a));
        base.push_back(w * se.vectors.col(b) * me.vectors.col(a).adjoint());
        instr.labels[o].push_back({o, -1, ai, bi});
        ++bi;
      }
      ++ai;
    }
    for (int x : sys.space().orbits[o]) {
      const int g = sys.space().section[x];
      const Matrix& vg = v(g);
      const Matrix ug_adj = sys.rep()(g).adjoint();
      for (const Matrix& k : base) instr.kraus[x].push_back(vg * k * ug_adj);
    }
  }
  return instr;
}

DilationBundle minimal_dilation(const IntertwinerSet& s) {
  IntertwinerReport rep = validate_intertwiners(s);
  const SystemContext& sys = *s.system;
  const Tolerances& tol = sys.tol();
  gate_built(rep, tol);
  if (!rep.minimal)
    fail_validation("intertwiner set is not minimal; reduce it first");

  const GSpace& sp = sys.space();
  const int np = sys.num_points();
  std::vector<int> per_orbit(sys.num_orbits(), 0);
  // (block index, offset inside a point block), per orbit in set order.
  std::vector<std::vector<std::pair<int, int>>> layout(sys.num_orbits());
  for (int bi = 0; bi < static_cast<int>(s.blocks.size()); ++bi) {
    const auto& b = s.blocks[bi];
    layout[b.orbit].push_back({bi, per_orbit[b.orbit]});
    per_orbit[b.orbit] += sys.dual(b.orbit)[b.cls].dim * b.multiplicity();
  }
  std::vector<int> offset(np, 0);
  int dim = 0;
  for (int x = 0; x < np; ++x) {
    offset[x] = dim;
    dim += per_orbit[sp.orbit_of[x]];
  }
  if (dim == 0) fail_validation("empty intertwiner set has no dilation");

  DilationBundle out;
  out.dim = dim;
  const Assembly a = assemble(s);

  out.j = Matrix::Zero(static_cast<Eigen::Index>(s.v.dim) * dim, sys.dim());
  for (int x = 0; x < np; ++x) {
    int alpha = offset[x];
    for (const Matrix& k : a.kraus[x]) {
      for (int r = 0; r < s.v.dim; ++r)
        out.j.row(static_cast<Eigen::Index>(r) * dim + alpha) = k.row(r);
      ++alpha;
    }
  }
  for (int x = 0; x < np; ++x) {
    Matrix p = Matrix::Zero(dim, dim);
    const int n = per_orbit[sp.orbit_of[x]];
    p.block(offset[x], offset[x], n, n) = Matrix::Identity(n, n);
    out.p.push_back(std::move(p));
  }

  const int order = sys.group()->order;
  std::vector<Matrix> ubar(order, Matrix::Zero(dim, dim));
  for (int g = 0; g < order; ++g) {
    const int ginv = sys.group()->inv(g);
    for (int x = 0; x < np; ++x) {
      const int o = sp.orbit_of[x];
      const int gx = sp.act(g, x);
      for (const auto& [bi, loff] : layout[o]) {
        const auto& b = s.blocks[bi];
        const IrrepClass& eta = sys.dual(o)[b.cls];
        const Matrix zeta =
            cocycle_eval(eta, sys.orbit(o).stabilizer, sp, o, ginv, gx);
        for (int m = 0; m < b.multiplicity(); ++m)
          for (int i = 0; i < eta.dim; ++i)
            for (int ip = 0; ip < eta.dim; ++ip)
              ubar[g](offset[gx] + loff + m * eta.dim + ip,
                      offset[x] + loff + m * eta.dim + i) = zeta(ip, i);
      }
    }
  }
  out.u_bar = matrix_rep(sys.group(), std::move(ubar));

  out.isometry_defect = frobenius(out.j.adjoint() * out.j -
                                  Matrix::Identity(sys.dim(), sys.dim()));
  const std::vector<Matrix> basis = hermitian_basis(s.v.dim);
  for (int x = 0; x < np; ++x)
    for (const Matrix& b : basis) {
      Matrix lhs = Matrix::Zero(sys.dim(), sys.dim());
      for (const Matrix& k : a.kraus[x]) lhs += k.adjoint() * b * k;
      const Matrix rhs = out.j.adjoint() * kron(b, out.p[x]) * out.j;
      out.stinespring_defect =
          std::max(out.stinespring_defect, frobenius(lhs - rhs));
    }
  for (int g = 0; g < order; ++g) {
    const Matrix w = kron(s.v(g), out.u_bar(g));
    out.intertwining_defect = std::max(
        out.intertwining_defect, frobenius(out.j * sys.rep()(g) - w * out.j));
    for (int x = 0; x < np; ++x)
      out.imprimitivity_defect = std::max(
          out.imprimitivity_defect,
          frobenius(out.u_bar(g) * out.p[x] * out.u_bar(g).adjoint() -
                    out.p[sp.act(g, x)]));
  }
  out.minimal = true;
  for (int o = 0; o < sys.num_orbits(); ++o) {
    const int x0 = sp.base_point[o];
    if (a.kraus[x0].empty()) continue;
    if (!matrix_independence(a.kraus[x0], tol.rank_cutoff).independent())
      out.minimal = false;
  }
  return out;
}

InstrExtremality extreme_in_covariance_structure(const IntertwinerSet& s) {
  IntertwinerReport rep = validate_intertwiners(s);
  const Tolerances& tol = s.system->tol();
  gate_built(rep, tol);
  if (!rep.minimal)
    fail_validation("intertwiner set is not minimal; reduce it first");

  std::vector<std::array<int, 3>> index;
  const std::vector<Matrix> ops = averaged_products(s, index);
  const IndependenceReport ir = matrix_independence(ops, tol.rank_cutoff);
  InstrExtremality out;
  out.extreme = ir.independent();
  out.singular_values = ir.singular_values;
  for (const auto& b : s.blocks)
    out.witness.push_back(Matrix::Zero(b.multiplicity(), b.multiplicity()));
  if (!out.extreme) out.witness = kernel_witness(s, index, ir.kernel);
  return out;
}

InstrExtremality extreme_global(const CovariantInstrument& instr) {
  if (!instr.system) fail_validation("instrument has no system");
  if (instr.source.blocks.empty())
    fail_validation("global extremality needs the intertwiner structure");
  if (!validate_intertwiners(instr.source).minimal)
    fail_validation("instrument must come from a minimal set");
  const SystemContext& sys = *instr.system;
  std::vector<Matrix> ops;
  for (int x = 0; x < sys.num_points(); ++x)
    for (const Matrix& ka : instr.kraus[x])
      for (const Matrix& kb : instr.kraus[x]) ops.push_back(ka.adjoint() * kb);
  const IndependenceReport ir = matrix_independence(ops, sys.tol().rank_cutoff);
  InstrExtremality out;
  out.extreme = ir.independent();
  out.singular_values = ir.singular_values;
  for (const auto& b : instr.source.blocks)
    out.witness.push_back(Matrix::Zero(b.multiplicity(), b.multiplicity()));
  return out;
}

WitnessSplit split_by_witness(const IntertwinerSet& s,
                              const std::vector<Matrix>& witness) {
  check_structure(s);
  const SystemContext& sys = *s.system;
  const Tolerances& tol = sys.tol();
  if (witness.size() != s.blocks.size())
    fail_validation("one witness matrix per block required");
  double wmax = 0;
  for (std::size_t bi = 0; bi < witness.size(); ++bi) {
    const Matrix& w = witness[bi];
    const int mm = s.blocks[bi].multiplicity();
    if (w.rows() != mm || w.cols() != mm)
      fail_validation("witness shape mismatch");
    if (mm == 0) continue;
    if (!is_hermitian(w, 100 * tol.lin * std::max(1.0, frobenius(w))))
      fail_validation("witness must be Hermitian");
    wmax = std::max(wmax, operator_norm(w));
  }
  if (wmax == 0) fail_validation("witness is zero");
  const double eps = 0.5 / wmax;

  WitnessSplit out;
  out.plus = s;
  out.minus = s;
  for (std::size_t bi = 0; bi < s.blocks.size(); ++bi) {
    const int mm = s.blocks[bi].multiplicity();
    if (mm == 0) continue;
    const Matrix id = Matrix::Identity(mm, mm);
    const Matrix ap =
        hermitian_isqrt(id + eps * witness[bi], tol.rank_cutoff, tol.psd).sqrt;
    const Matrix am =
        hermitian_isqrt(id - eps * witness[bi], tol.rank_cutoff, tol.psd).sqrt;
    const int d = static_cast<int>(s.blocks[bi].ops[0].size());
    for (int side = 0; side < 2; ++side) {
      const Matrix& mixer = side == 0 ? ap : am;
      auto& ops = (side == 0 ? out.plus : out.minus).blocks[bi].ops;
      for (int mp = 0; mp < mm; ++mp)
        for (int i = 0; i < d; ++i) {
          Matrix acc = Matrix::Zero(s.v.dim, sys.dim());
          for (int m = 0; m < mm; ++m)
            acc += mixer(m, mp) * s.blocks[bi].ops[m][i];
          ops[mp][i] = std::move(acc);
        }
    }
  }

  const Assembly a0 = assemble(s);
  const Assembly a1 = assemble(out.plus);
  const Assembly a2 = assemble(out.minus);
  const std::vector<Matrix> basis = hermitian_basis(sys.dim());
  auto channel = [&](const Assembly& a, int x, const Matrix& b) {
    Matrix m = Matrix::Zero(s.v.dim, s.v.dim);
    for (const Matrix& k : a.kraus[x]) m += k * b * k.adjoint();
    return m;
  };
  for (int x = 0; x < sys.num_points(); ++x)
    for (const Matrix& b : basis) {
      const Matrix avg =
          0.5 * (channel(a1, x, b) + channel(a2, x, b)) - channel(a0, x, b);
      out.average_defect = std::max(out.average_defect, frobenius(avg));
    }
  return out;
}

std::vector<std::vector<Matrix>> intertwiner_solution_basis(
    const SystemPtr& sys_ptr, const Representation& v, int orbit, int cls) {
  if (!sys_ptr) fail_validation("no system");
  const SystemContext& sys = *sys_ptr;
  if (!v.group || v.group.get() != sys.group().get())
    fail_validation("output representation must use the system's group object");
  require_ordinary(sys.rep(), "input");
  require_ordinary(v, "output");
  if (orbit < 0 || orbit >= sys.num_orbits())
    fail_validation("orbit out of range");
  const auto& dual = sys.dual(orbit);
  if (cls < 0 || cls >= static_cast<int>(dual.size()))
    fail_validation("class out of range");
  const IrrepClass& eta = dual[cls];
  const OrbitContext& oc = sys.orbit(orbit);
  const int din = sys.dim(), dout = v.dim, d = eta.dim;
  const Eigen::Index block = static_cast<Eigen::Index>(dout) * din;
  Matrix c = Matrix::Zero(block * d * oc.stabilizer.order(), block * d);
  const Matrix id_out = Matrix::Identity(dout, dout);
  const Matrix id_in = Matrix::Identity(din, din);
  Eigen::Index row0 = 0;
  for (int h : oc.stabilizer.elements) {
    const Matrix right = kron(sys.rep()(h).transpose(), id_out);
    const Matrix left = kron(id_in, v(h));
    const Matrix& eh = eta.matrices[oc.stabilizer.local_of(h)];
    for (int i = 0; i < d; ++i) {
      c.block(row0, static_cast<Eigen::Index>(i) * block, block, block) += right;
      for (int j = 0; j < d; ++j)
        c.block(row0, static_cast<Eigen::Index>(j) * block, block, block) -=
            eh(i, j) * left;
      row0 += block;
    }
  }
  const Matrix ns = null_space(c, sys.tol().rank_cutoff);
  std::vector<std::vector<Matrix>> out;
  for (Eigen::Index col = 0; col < ns.cols(); ++col) {
    std::vector<Matrix> tuple;
    for (int j = 0; j < d; ++j)
      tuple.push_back(unvectorize(
          ns.col(col).segment(static_cast<Eigen::Index>(j) * block, block),
          dout, din));
    out.push_back(std::move(tuple));
  }
  return out;
}

SystemPtr channel_system(const Representation& u, Tolerances tol,
                         std::uint64_t seed) {
  if (!u.group) fail_validation("representation has no group");
  return make_system(singleton_space(u.group), u, tol, seed);
}

ChannelReport channel_extreme(const IntertwinerSet& s) {
  check_structure(s);
  const SystemContext& sys = *s.system;
  if (sys.num_points() != 1 ||
      sys.stabilizer_order(0) != sys.group()->order)
    fail_validation("channel analysis requires the one-point outcome space");
  ChannelReport out;
  out.validation = validate_intertwiners(s);
  const Tolerances& tol = sys.tol();
  gate_built(out.validation, tol);
  if (!out.validation.minimal)
    fail_validation("intertwiner set is not minimal; reduce it first");

  // The products already commute with U, so the group sum of the generic
  // criterion only rescales them and is omitted.
  std::vector<Matrix> ops;
  std::vector<std::array<int, 3>> index;
  for (int bi = 0; bi < static_cast<int>(s.blocks.size()); ++bi) {
    const auto& b = s.blocks[bi];
    for (int m = 0; m < b.multiplicity(); ++m)
      for (int n = 0; n < b.multiplicity(); ++n) {
        Matrix t = Matrix::Zero(sys.dim(), sys.dim());
        for (std::size_t i = 0; i < b.ops[m].size(); ++i)
          t += b.ops[m][i].adjoint() * b.ops[n][i];
        for (int g = 0; g < sys.group()->order; ++g) {
          const Matrix& ug = sys.rep()(g);
          out.commutation_defect =
              std::max(out.commutation_defect, frobenius(t * ug - ug * t));
        }
        ops.push_back(std::move(t));
        index.push_back({bi, m, n});
      }
  }
  const IndependenceReport ir = matrix_independence(ops, tol.rank_cutoff);
  out.extremality.extreme = ir.independent();
  out.extremality.singular_values = ir.singular_values;
  for (const auto& b : s.blocks)
    out.extremality.witness.push_back(
        Matrix::Zero(b.multiplicity(), b.multiplicity()));
  if (!out.extremality.extreme)
    out.extremality.witness = kernel_witness(s, index, ir.kernel);
  return out;
}

}  // namespace covkit
