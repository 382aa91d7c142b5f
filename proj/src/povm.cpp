#include "covkit/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "covkit/error.hpp"

namespace covkit {
namespace {

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

Matrix CovariantPOVM::normalizer() const {
  const int d = system->dim();
  Matrix k = Matrix::Zero(d, d);
  for (const Matrix& m : effects) k += m;
  return k;
}

double CovariantPOVM::normalization_defect() const {
  const int d = system->dim();
  return frobenius(normalizer() - Matrix::Identity(d, d));
}

double CovariantPOVM::covariance_defect() const {
  const GSpace& sp = system->space();
  const Representation& u = system->rep();
  double worst = 0;
  for (int g = 0; g < sp.group->order; ++g) {
    const Matrix& ug = u(g);
    for (int x = 0; x < sp.num_points; ++x) {
      worst = std::max(
          worst, frobenius(ug * effects[x] * ug.adjoint() - effects[sp.act(g, x)]));
    }
  }
  return worst;
}

CovariantPOVM build_from_seeds(const SystemPtr& sys, std::vector<Seed> seeds) {
  if (!sys) fail_validation("build_from_seeds: null system");
  const int d = sys->dim();
  const GSpace& sp = sys->space();
  if (static_cast<int>(seeds.size()) != sp.num_orbits()) {
    fail_validation("build_from_seeds: expected one seed per orbit (" +
                    std::to_string(sp.num_orbits()) + "), got " +
                    std::to_string(seeds.size()));
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const Seed& a, const Seed& b) { return a.orbit < b.orbit; });
  for (int o = 0; o < sp.num_orbits(); ++o) {
    if (seeds[o].orbit != o) {
      fail_validation("build_from_seeds: orbit indices must cover 0.." +
                      std::to_string(sp.num_orbits() - 1) + " exactly once");
    }
    const Matrix& k = seeds[o].k;
    if (k.rows() != d || k.cols() != d) {
      fail_validation("build_from_seeds: seed for orbit " + std::to_string(o) +
                      " has shape " + std::to_string(k.rows()) + "x" +
                      std::to_string(k.cols()) + ", expected " +
                      std::to_string(d) + "x" + std::to_string(d));
    }
    const double scale = std::max(1.0, frobenius(k));
    const double herm = frobenius(k - k.adjoint());
    if (herm > sys->tol().lin * scale) {
      std::ostringstream os;
      os << "build_from_seeds: seed for orbit " << o
         << " is not Hermitian (defect " << herm << ")";
      fail_validation(os.str());
    }
    const double lo = min_eigenvalue(k);
    if (lo < -sys->tol().psd * scale) {
      std::ostringstream os;
      os << "build_from_seeds: seed for orbit " << o
         << " is not positive semidefinite (min eigenvalue " << lo << ")";
      fail_validation(os.str());
    }
    double comm = 0;
    for (int h : sp.stabilizer[o]) {
      const Matrix& uh = sys->rep()(h);
      comm = std::max(comm, frobenius(uh * k - k * uh));
    }
    if (comm > sys->tol().lin * scale) {
      std::ostringstream os;
      os << "build_from_seeds: seed for orbit " << o
         << " does not commute with the stabilizer restriction (defect "
         << comm << ")";
      fail_validation(os.str());
    }
  }

  CovariantPOVM p;
  p.system = sys;
  p.effects.resize(sp.num_points);
  for (int x = 0; x < sp.num_points; ++x) {
    p.effects[x] = sys->transport(x, seeds[sp.orbit_of[x]].k);
  }
  p.seeds = std::move(seeds);
  return p;
}

CovariantPOVM povm_from_effects(const SystemPtr& sys,
                                std::vector<Matrix> effects) {
  if (!sys) fail_validation("povm_from_effects: null system");
  const int d = sys->dim();
  const GSpace& sp = sys->space();
  if (static_cast<int>(effects.size()) != sp.num_points) {
    fail_validation("povm_from_effects: expected " +
                    std::to_string(sp.num_points) + " effects, got " +
                    std::to_string(effects.size()));
  }
  double scale = 1.0;
  for (const Matrix& m : effects) scale = std::max(scale, frobenius(m));
  for (int x = 0; x < sp.num_points; ++x) {
    const Matrix& m = effects[x];
    if (m.rows() != d || m.cols() != d) {
      fail_validation("povm_from_effects: effect " + std::to_string(x) +
                      " has wrong shape");
    }
    const double herm = frobenius(m - m.adjoint());
    if (herm > sys->tol().lin * scale) {
      std::ostringstream os;
      os << "povm_from_effects: effect " << x << " is not Hermitian (defect "
         << herm << ")";
      fail_validation(os.str());
    }
    const double lo = min_eigenvalue(m);
    if (lo < -sys->tol().psd * scale) {
      std::ostringstream os;
      os << "povm_from_effects: effect " << x
         << " is not positive semidefinite (min eigenvalue " << lo << ")";
      fail_validation(os.str());
    }
  }

  CovariantPOVM p;
  p.system = sys;
  p.effects = std::move(effects);
  const double cov = p.covariance_defect();
  if (cov > sys->tol().lin * scale) {
    std::ostringstream os;
    os << "povm_from_effects: effects are not covariant (defect " << cov
       << ")";
    fail_validation(os.str());
  }
  p.seeds.resize(sp.num_orbits());
  for (int o = 0; o < sp.num_orbits(); ++o) {
    p.seeds[o] = Seed{o, p.effects[sp.base_point[o]]};
  }
  return p;
}

NormalizationResult normalize(const CovariantPOVM& p) {
  const SystemPtr& sys = p.system;
  const int d = sys->dim();
  NormalizationResult r;
  r.k = hermitize(p.normalizer());
  IsqrtResult is = hermitian_isqrt(r.k, sys->tol().rank_cutoff, sys->tol().psd);
  if (is.rank == 0) {
    fail_validation("normalize: the zero observable has no normalization");
  }
  r.inv_sqrt = is.inv_sqrt;
  r.support = is.support;
  r.full_rank = is.rank == d;

  CovariantPOVM q;
  q.system = sys;
  q.effects.resize(p.effects.size());
  for (std::size_t x = 0; x < p.effects.size(); ++x) {
    q.effects[x] = hermitize(r.inv_sqrt * p.effects[x] * r.inv_sqrt);
  }
  q.seeds.resize(sys->num_orbits());
  for (int o = 0; o < sys->num_orbits(); ++o) {
    q.seeds[o] = Seed{o, q.effects[sys->space().base_point[o]]};
  }
  Matrix sum = q.normalizer();
  r.defect = frobenius(sum - r.support);
  if (r.defect > 1e3 * sys->tol().lin) {
    std::ostringstream os;
    os << "normalize: renormalized sum misses the support projection by "
       << r.defect;
    fail_numerical(os.str());
  }
  r.povm = std::move(q);
  return r;
}

VectorForm recover_vector_form(const CovariantPOVM& p) {
  const SystemPtr& sys = p.system;
  const GSpace& sp = sys->space();
  const Tolerances& tol = sys->tol();
  VectorForm vf;

  double global_max = 0;
  for (const Seed& s : p.seeds) {
    global_max = std::max(global_max, operator_norm(hermitize(s.k)));
  }
  if (global_max == 0) return vf;

  for (int o = 0; o < sp.num_orbits(); ++o) {
    const Matrix k = hermitize(p.seeds[o].k);
    EigResult eig = hermitian_eig(k);
    const int d = static_cast<int>(eig.values.size());
    const double lmax = std::abs(eig.values(d - 1));
    if (lmax <= tol.rank_cutoff * global_max) continue;  // zero orbit
    const double gap = tol.rank_cutoff * std::max(lmax, 1.0);

    const OrbitContext& oc = sys->orbit(o);
    const std::vector<int>& stab_elems = sp.stabilizer[o];
    const int hn = static_cast<int>(stab_elems.size());
    std::vector<int> copies_seen(oc.u_restriction.num_classes(), 0);

    Matrix krec = Matrix::Zero(k.rows(), k.cols());
    int start = 0;
    while (start < d) {
      int end = start + 1;
      while (end < d && eig.values(end) - eig.values(end - 1) <= gap) ++end;
      const double lambda =
          eig.values.segment(start, end - start).mean();
      if (lambda > tol.rank_cutoff * global_max) {
        const Matrix q = eig.vectors.middleCols(start, end - start);
        // Restrict the stabilizer action to this eigenspace.
        Representation sub;
        sub.group = oc.stabilizer.local;
        sub.dim = end - start;
        sub.matrices.resize(hn);
        double inv_defect = 0;
        for (int h = 0; h < hn; ++h) {
          const Matrix& uh = sys->rep()(stab_elems[h]);
          sub.matrices[h] = q.adjoint() * uh * q;
          inv_defect = std::max(
              inv_defect, frobenius(uh * q - q * sub.matrices[h]));
        }
        if (inv_defect > 1e3 * tol.lin) {
          std::ostringstream os;
          os << "recover_vector_form: eigenspace of orbit " << o
             << " is not stabilizer-invariant (defect " << inv_defect << ")";
          fail_numerical(os.str());
        }
        std::vector<int> all(hn);
        for (int h = 0; h < hn; ++h) all[h] = h;
        IrrepDecomposition dec = decompose_restriction(
            sub, all,
            sys->seed() ^ (0x94D049BB133111EBull * (o * 97 + start + 1)),
            &oc.u_restriction.classes, tol);
        for (int c = 0; c < dec.num_classes(); ++c) {
          for (const Matrix& copy : dec.copies[c]) {
            VectorFormCopy vc;
            vc.orbit = o;
            vc.cls = c;
            vc.m = copies_seen[c]++;
            vc.lambda = lambda;
            vc.isometry = q * copy;
            krec += lambda * vc.isometry * vc.isometry.adjoint();
            vf.copies.push_back(std::move(vc));
          }
        }
      }
      start = end;
    }
    vf.reconstruction_defect =
        std::max(vf.reconstruction_defect, frobenius(k - krec));
  }
  if (vf.reconstruction_defect > 10 * tol.lin * std::max(1.0, global_max)) {
    std::ostringstream os;
    os << "recover_vector_form: reconstruction defect "
       << vf.reconstruction_defect;
    fail_numerical(os.str());
  }
  return vf;
}

namespace {

// Index bookkeeping for the covariant extremality operators.
struct PairIndex {
  int orbit, cls, m, n;
};

// Witness seeds per orbit from a kernel coefficient vector; the kernel is
// closed under (m,n) -> conj (n,m), so the Hermitian or anti-Hermitian part
// is again a kernel element. Returns per-orbit Hermitian seeds scaled by the
// stabilizer order, which makes the point-wise sum vanish.
std::vector<Matrix> witness_seeds(const SystemPtr& sys,
                                  const std::vector<PairIndex>& idx,
                                  const std::vector<Matrix>& raw,
                                  const Vector& kernel) {
  const int d = sys->dim();
  std::vector<Matrix> seed(sys->num_orbits(), Matrix::Zero(d, d));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    seed[idx[a].orbit] += kernel(static_cast<Eigen::Index>(a)) * raw[a];
  }
  std::vector<Matrix> herm(seed.size()), anti(seed.size());
  double herm_norm = 0, anti_norm = 0;
  for (std::size_t o = 0; o < seed.size(); ++o) {
    herm[o] = 0.5 * (seed[o] + seed[o].adjoint());
    anti[o] = Complex(0, -0.5) * (seed[o] - seed[o].adjoint());
    herm_norm += frobenius(herm[o]);
    anti_norm += frobenius(anti[o]);
  }
  std::vector<Matrix>& pick = herm_norm >= anti_norm ? herm : anti;
  for (std::size_t o = 0; o < pick.size(); ++o) {
    pick[o] *= static_cast<double>(sys->stabilizer_order(static_cast<int>(o)));
  }
  return pick;
}

}  // namespace

ObsClassification classify(const CovariantPOVM& p) {
  const SystemPtr& sys = p.system;
  const GSpace& sp = sys->space();
  const Tolerances& tol = sys->tol();
  const int d = sys->dim();
  const int nx = sp.num_points;

  ObsClassification c;
  c.seed = sys->seed();
  c.normalization_defect = p.normalization_defect();
  if (c.normalization_defect > 100 * tol.lin) {
    std::ostringstream os;
    os << "classify: observable is not normalized (defect "
       << c.normalization_defect << "); call normalize first";
    fail_validation(os.str());
  }
  c.covariance_defect = p.covariance_defect();

  double gamma = 0;
  std::vector<EigResult> eigs(nx);
  for (int x = 0; x < nx; ++x) {
    eigs[x] = hermitian_eig(hermitize(p.effects[x]));
    gamma = std::max(gamma, std::abs(eigs[x].values(d - 1)));
  }
  c.psd_margin = std::numeric_limits<double>::infinity();
  c.effect_ranks.resize(nx);
  bool rank1 = true;
  for (int x = 0; x < nx; ++x) {
    c.psd_margin = std::min(c.psd_margin, eigs[x].values(0));
    int r = 0;
    for (int i = 0; i < d; ++i) {
      if (eigs[x].values(i) > tol.rank_cutoff * gamma) ++r;
    }
    c.effect_ranks[x] = r;
    if (r > 1) rank1 = false;
  }
  c.is_rank1 = rank1;

  c.zero_orbit.resize(sp.num_orbits());
  for (int o = 0; o < sp.num_orbits(); ++o) {
    c.zero_orbit[o] =
        operator_norm(hermitize(p.seeds[o].k)) <= tol.rank_cutoff * gamma;
  }

  // Projective property: effects idempotent and mutually orthogonal.
  c.pvm_defect = 0;
  for (int x = 0; x < nx; ++x) {
    c.pvm_defect = std::max(
        c.pvm_defect, frobenius(p.effects[x] * p.effects[x] - p.effects[x]));
    for (int y = x + 1; y < nx; ++y) {
      c.pvm_defect =
          std::max(c.pvm_defect, frobenius(p.effects[x] * p.effects[y]));
    }
  }
  c.is_pvm = c.pvm_defect <= 100 * tol.lin;

  c.norm1_defect = 0;
  for (int x = 0; x < nx; ++x) {
    if (c.effect_ranks[x] == 0) continue;
    c.norm1_defect =
        std::max(c.norm1_defect, std::abs(eigs[x].values(d - 1) - 1.0));
  }
  c.is_norm1 = c.norm1_defect <= 100 * tol.lin;

  {
    IndependenceReport ir = matrix_independence(p.effects, tol.rank_cutoff);
    c.ic_singulars = ir.singular_values;
    c.ic_span_dim = ir.rank;
    c.is_informationally_complete = ir.rank == d * d;
  }

  // Extremality within the covariance structure: the operators
  //   E_{(O,c),mn} = avg_g U(g) sqrt(lambda_m lambda_n) S_m S_n* U(g)*
  // over copy pairs of each class are linearly independent exactly at the
  // extreme points.
  VectorForm vf = recover_vector_form(p);
  std::vector<PairIndex> idx;
  std::vector<Matrix> raw;    // sqrt(lm ln) S_m S_n*
  std::vector<Matrix> avg;    // group average of raw
  for (int o = 0; o < sp.num_orbits(); ++o) {
    const OrbitContext& oc = sys->orbit(o);
    for (int cls = 0; cls < oc.u_restriction.num_classes(); ++cls) {
      std::vector<const VectorFormCopy*> copies;
      for (const VectorFormCopy& vc : vf.copies) {
        if (vc.orbit == o && vc.cls == cls) copies.push_back(&vc);
      }
      for (std::size_t m = 0; m < copies.size(); ++m) {
        for (std::size_t n = 0; n < copies.size(); ++n) {
          Matrix op = std::sqrt(copies[m]->lambda * copies[n]->lambda) *
                      copies[m]->isometry * copies[n]->isometry.adjoint();
          idx.push_back(PairIndex{o, cls, static_cast<int>(m),
                                  static_cast<int>(n)});
          avg.push_back(sys->group_average(op));
          raw.push_back(std::move(op));
        }
      }
    }
  }
  if (avg.empty()) {
    c.is_extreme_covariant = false;  // zero observable cannot occur here
  } else {
    IndependenceReport ir = matrix_independence(avg, tol.rank_cutoff);
    c.extreme_covariant_singulars = ir.singular_values;
    c.is_extreme_covariant = ir.independent();
    if (!c.is_extreme_covariant && ir.kernel.size() > 0) {
      std::vector<Matrix> w = witness_seeds(sys, idx, raw, ir.kernel);
      // Scale so both M +/- P stay positive: the perturbation lives inside
      // the effect supports, so the smallest positive eigenvalue bounds the
      // admissible step.
      double lam_min = std::numeric_limits<double>::infinity();
      double wmax = 0;
      for (int o = 0; o < sp.num_orbits(); ++o) {
        wmax = std::max(wmax, operator_norm(w[o]));
        if (c.zero_orbit[o]) continue;
        const EigResult ke = hermitian_eig(hermitize(p.seeds[o].k));
        for (int i = 0; i < d; ++i) {
          if (ke.values(i) > tol.rank_cutoff * gamma) {
            lam_min = std::min(lam_min, ke.values(i));
            break;
          }
        }
      }
      if (wmax > 0 && std::isfinite(lam_min)) {
        const double eps = 0.5 * lam_min / wmax;
        c.perturbation.resize(nx);
        for (int x = 0; x < nx; ++x) {
          c.perturbation[x] =
              eps * sys->transport(x, w[sp.orbit_of[x]]);
        }
      }
    }
  }

  // Extremality among all observables: rank-one pieces across every point.
  std::vector<Matrix> global_ops;
  for (int x = 0; x < nx; ++x) {
    const int o = sp.orbit_of[x];
    std::vector<Vector> vecs;
    for (const VectorFormCopy& vc : vf.copies) {
      if (vc.orbit != o) continue;
      const Matrix cols = sys->rep()(sp.section[x]) * vc.isometry;
      for (Eigen::Index i = 0; i < cols.cols(); ++i) {
        vecs.push_back(std::sqrt(vc.lambda) * cols.col(i));
      }
    }
    for (const Vector& a : vecs) {
      for (const Vector& b : vecs) {
        global_ops.push_back(a * b.adjoint());
      }
    }
  }
  if (global_ops.empty()) {
    c.is_extreme_global = false;
  } else {
    IndependenceReport ir = matrix_independence(global_ops, tol.rank_cutoff);
    c.extreme_global_singulars = ir.singular_values;
    c.is_extreme_global = ir.independent();
  }
  return c;
}

Margins margins(const CovariantPOVM& p) {
  const SystemPtr& sys = p.system;
  const GSpace& sp = sys->space();
  if (sp.power != 2) {
    fail_validation("margins: outcome space is not a squared space");
  }
  const int nb = sp.base_points;
  const int d = sys->dim();
  Margins mg;
  mg.row.assign(nb, Matrix::Zero(d, d));
  mg.col.assign(nb, Matrix::Zero(d, d));
  for (int m = 0; m < nb; ++m) {
    for (int n = 0; n < nb; ++n) {
      const Matrix& e = p.effects[m * nb + n];
      mg.row[m] += e;
      mg.col[n] += e;
    }
  }
  // The base action is read off the diagonal points (they map diagonally).
  for (int g = 0; g < sp.group->order; ++g) {
    const Matrix& ug = sys->rep()(g);
    for (int m = 0; m < nb; ++m) {
      const int gm = sp.act(g, m * nb + m) / nb;
      mg.covariance_defect = std::max(
          mg.covariance_defect,
          frobenius(ug * mg.row[m] * ug.adjoint() - mg.row[gm]));
      mg.covariance_defect = std::max(
          mg.covariance_defect,
          frobenius(ug * mg.col[m] * ug.adjoint() - mg.col[gm]));
    }
  }
  return mg;
}

CovariantPOVM drop_zero_orbits(const CovariantPOVM& p) {
  const SystemPtr& sys = p.system;
  const GSpace& sp = sys->space();
  const Tolerances& tol = sys->tol();
  double gamma = 0;
  for (const Matrix& m : p.effects) {
    gamma = std::max(gamma, operator_norm(hermitize(m)));
  }
  std::vector<bool> keep(sp.num_orbits());
  int kept_points = 0;
  for (int o = 0; o < sp.num_orbits(); ++o) {
    keep[o] = operator_norm(hermitize(p.seeds[o].k)) > tol.rank_cutoff * gamma;
    if (keep[o]) kept_points += static_cast<int>(sp.orbits[o].size());
  }
  if (kept_points == sp.num_points) return p;
  if (kept_points == 0) {
    fail_validation("drop_zero_orbits: every orbit is zero");
  }

  std::vector<int> old_of_new, new_of_old(sp.num_points, -1);
  for (int x = 0; x < sp.num_points; ++x) {
    if (keep[sp.orbit_of[x]]) {
      new_of_old[x] = static_cast<int>(old_of_new.size());
      old_of_new.push_back(x);
    }
  }
  std::vector<int> action(static_cast<std::size_t>(sp.group->order) *
                          kept_points);
  for (int g = 0; g < sp.group->order; ++g) {
    for (int i = 0; i < kept_points; ++i) {
      action[static_cast<std::size_t>(g) * kept_points + i] =
          new_of_old[sp.act(g, old_of_new[i])];
    }
  }
  GSpace reduced = make_gspace(sp.group, std::move(action), sp.policy);
  SystemPtr rs = make_system(std::move(reduced), sys->rep(), tol, sys->seed());
  std::vector<Matrix> effects(kept_points);
  for (int i = 0; i < kept_points; ++i) effects[i] = p.effects[old_of_new[i]];
  return povm_from_effects(rs, std::move(effects));
}

}  // namespace covkit
