#include "covkit/irrep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covkit {

Subgroup make_subgroup(const GroupPtr& parent, std::vector<int> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  Subgroup sub;
  sub.parent = parent;
  sub.parent_to_local.assign(parent->order, -1);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] < 0 || elements[i] >= parent->order)
      fail_validation("subgroup: element id out of range");
    sub.parent_to_local[elements[i]] = static_cast<int>(i);
  }
  const int n = static_cast<int>(elements.size());
  auto local = std::make_shared<FiniteGroup>();
  local->order = n;
  local->table.resize(static_cast<std::size_t>(n) * n);
  local->labels.reserve(n);
  for (int i = 0; i < n; ++i) local->labels.push_back(parent->label(elements[i]));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int prod = parent->mult(elements[i], elements[j]);
      int loc = sub.parent_to_local[prod];
      if (loc < 0) fail_validation("subgroup: set is not closed under products");
      local->table[static_cast<std::size_t>(i) * n + j] = loc;
    }
  int e = sub.parent_to_local[parent->identity];
  if (e < 0) fail_validation("subgroup: identity not contained");
  local->identity = e;
  local->inverse.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int inv = sub.parent_to_local[parent->inv(elements[i])];
    if (inv < 0) fail_validation("subgroup: set is not closed under inverses");
    local->inverse[i] = inv;
  }
  sub.local = local;
  sub.elements = std::move(elements);
  return sub;
}

Matrix IrrepDecomposition::embedding(int cls) const {
  const int d = classes[cls].dim;
  const int m = multiplicity[cls];
  Matrix e(ambient_dim, static_cast<Eigen::Index>(d) * m);
  for (int c = 0; c < m; ++c) e.middleCols(static_cast<Eigen::Index>(c) * d, d) = copies[cls][c];
  return e;
}

namespace {

// Character comparison with tolerance; descending (Re, Im) so the trivial
// character of the subgroup sorts before other one-dimensional characters.
bool character_less(const Vector& a, const Vector& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > tol) return a(i).real() > b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > tol) return a(i).imag() > b(i).imag();
  }
  return false;
}

bool character_match(const Vector& a, const Vector& b, double tol) {
  return (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

double commutant_dimension(const std::vector<Matrix>& w) {
  double s = 0;
  for (const Matrix& m : w) s += std::norm(m.trace());
  return s / static_cast<double>(w.size());
}

// Intertwiner from eta onto the block representation, unitarized; returns an
// empty matrix when the random probe degenerates.
Matrix align_intertwiner(const std::vector<Matrix>& block,
                         const IrrepClass& eta, Rng& rng) {
  const int d = eta.dim;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix x = random_matrix(d, d, rng);
    Matrix t = Matrix::Zero(d, d);
    for (std::size_t h = 0; h < block.size(); ++h)
      t += block[h] * x * eta.matrices[h].adjoint();
    t /= static_cast<double>(block.size());
    if (t.norm() < 1e-8 * x.norm()) continue;
    // polar: T (T*T)^{-1/2}
    EigResult eig = hermitian_eig(t.adjoint() * t);
    if (eig.values(0) < 1e-12 * eig.values(d - 1)) continue;
    Matrix isq = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
      isq += eig.vectors.col(i) * eig.vectors.col(i).adjoint() /
             std::sqrt(eig.values(i));
    return t * isq;
  }
  return Matrix();
}

}  // namespace

IrrepDecomposition decompose_restriction(const Representation& rep,
                                         const std::vector<int>& subgroup_elements,
                                         std::uint64_t seed,
                                         const std::vector<IrrepClass>* align_to,
                                         const Tolerances& tol) {
  IrrepDecomposition dec;
  dec.subgroup = make_subgroup(rep.group, subgroup_elements);
  dec.ambient_dim = rep.dim;
  const Subgroup& sub = dec.subgroup;
  const int nh = sub.order();

  if (rep.projective()) {
    double defect = 0;
    for (int a : sub.elements)
      for (int b : sub.elements)
        defect = std::max(defect, std::abs(rep.phase(a, b) - Complex(1, 0)));
    if (defect > 1e3 * tol.unit)
      fail_validation(
          "decompose_restriction: multiplier is nontrivial on the subgroup; "
          "pass through the central extension first");
  }

  std::vector<Matrix> w;
  w.reserve(nh);
  for (int h = 0; h < nh; ++h) w.push_back(rep(sub.elements[h]));

  Rng rng(seed);
  // Refine invariant subspaces until each block has a scalar commutant.
  std::vector<Matrix> pending{Matrix::Identity(rep.dim, rep.dim)};
  std::vector<Matrix> done;  // isometries of irreducible blocks
  while (!pending.empty()) {
    Matrix s = pending.back();
    pending.pop_back();
    const int k = static_cast<int>(s.cols());
    std::vector<Matrix> block;
    block.reserve(nh);
    for (const Matrix& m : w) block.push_back(s.adjoint() * m * s);
    if (k == 1 || commutant_dimension(block) < 1.5) {
      done.push_back(std::move(s));
      continue;
    }
    bool split = false;
    for (int attempt = 0; attempt < 12 && !split; ++attempt) {
      Matrix a = random_hermitian(k, rng);
      Matrix c = Matrix::Zero(k, k);
      for (const Matrix& m : block) c += m * a * m.adjoint();
      c /= static_cast<double>(nh);
      EigResult eig = hermitian_eig(c);
      const double spread = eig.values(k - 1) - eig.values(0);
      const double gap_tol = 1e-6 * std::max(1.0, spread);
      int start = 0;
      for (int i = 1; i <= k; ++i) {
        if (i < k && eig.values(i) - eig.values(i - 1) <= gap_tol) continue;
        if (start == 0 && i == k) break;  // single cluster: retry
        pending.push_back(s * eig.vectors.middleCols(start, i - start));
        start = i;
        split = true;
      }
      if (split && start < k)
        pending.push_back(s * eig.vectors.middleCols(start, k - start));
    }
    if (!split)
      fail_numerical(
          "decompose_restriction: commutant refinement made no progress");
  }

  // Group blocks by character.
  struct Raw {
    Vector character;
    std::vector<Matrix> isometries;
  };
  std::vector<Raw> groups;
  for (Matrix& s : done) {
    Vector chi(nh);
    for (int h = 0; h < nh; ++h) chi(h) = (s.adjoint() * w[h] * s).trace();
    bool placed = false;
    for (Raw& raw : groups) {
      if (character_match(raw.character, chi, tol.character)) {
        raw.isometries.push_back(std::move(s));
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back(Raw{std::move(chi), {std::move(s)}});
  }

  auto block_of = [&](const Matrix& s) {
    std::vector<Matrix> b;
    b.reserve(nh);
    for (const Matrix& m : w) b.push_back(s.adjoint() * m * s);
    return b;
  };
  auto align_copy = [&](Matrix& s, const IrrepClass& eta) {
    Matrix t = align_intertwiner(block_of(s), eta, rng);
    if (t.size() == 0)
      fail_numerical("decompose_restriction: failed to align a block onto its class");
    s = s * t;
    double d = 0;
    auto b = block_of(s);
    for (int h = 0; h < nh; ++h) d = std::max(d, defect(b[h], eta.matrices[h]));
    if (d > 1e4 * tol.lin)
      fail_numerical("decompose_restriction: aligned block deviates from class (defect " +
                     std::to_string(d) + ")");
  };

  if (align_to) {
    dec.classes = *align_to;
    dec.multiplicity.assign(dec.classes.size(), 0);
    dec.copies.assign(dec.classes.size(), {});
    for (Raw& raw : groups) {
      int found = -1;
      for (std::size_t c = 0; c < dec.classes.size(); ++c)
        if (character_match(dec.classes[c].character, raw.character, tol.character)) {
          found = static_cast<int>(c);
          break;
        }
      if (found < 0)
        fail_numerical("decompose_restriction: block matches no target class");
      for (Matrix& s : raw.isometries) {
        align_copy(s, dec.classes[found]);
        dec.copies[found].push_back(std::move(s));
        ++dec.multiplicity[found];
      }
    }
  } else {
    // First copy of each group fixes the class's matrix elements.
    struct Built {
      IrrepClass cls;
      std::vector<Matrix> copies;
    };
    std::vector<Built> built;
    for (Raw& raw : groups) {
      Built b;
      const Matrix& first = raw.isometries[0];
      b.cls.dim = static_cast<int>(first.cols());
      b.cls.matrices = block_of(first);
      b.cls.character = raw.character;
      b.copies.push_back(first);
      for (std::size_t i = 1; i < raw.isometries.size(); ++i) {
        align_copy(raw.isometries[i], b.cls);
        b.copies.push_back(raw.isometries[i]);
      }
      built.push_back(std::move(b));
    }
    std::sort(built.begin(), built.end(), [&](const Built& a, const Built& b) {
      if (a.cls.dim != b.cls.dim) return a.cls.dim < b.cls.dim;
      return character_less(a.cls.character, b.cls.character, 1e-7);
    });
    for (Built& b : built) {
      dec.classes.push_back(std::move(b.cls));
      dec.multiplicity.push_back(static_cast<int>(b.copies.size()));
      dec.copies.push_back(std::move(b.copies));
    }
  }

  int total = 0;
  for (std::size_t c = 0; c < dec.classes.size(); ++c)
    total += dec.classes[c].dim * dec.multiplicity[c];
  if (total != rep.dim)
    fail_numerical("decompose_restriction: dimensions do not add up");
  return dec;
}

std::vector<IrrepClass> complete_dual(const Subgroup& sub, std::uint64_t seed,
                                      const Tolerances& tol) {
  std::vector<int> all(sub.order());
  std::iota(all.begin(), all.end(), 0);
  IrrepDecomposition dec =
      decompose_restriction(regular_rep(sub.local), all, seed, nullptr, tol);
  std::vector<IrrepClass> dual;
  dual.reserve(dec.classes.size());
  for (auto& c : dec.classes) dual.push_back(std::move(c));
  return dual;
}

std::vector<int> class_multiplicities(const Representation& rep,
                                      const Subgroup& sub,
                                      const std::vector<IrrepClass>& dual) {
  const int nh = sub.order();
  Vector chi(nh);
  for (int h = 0; h < nh; ++h) chi(h) = rep(sub.elements[h]).trace();
  std::vector<int> mult;
  mult.reserve(dual.size());
  for (const IrrepClass& eta : dual) {
    Complex m = 0;
    for (int h = 0; h < nh; ++h) m += chi(h) * std::conj(eta.character(h));
    mult.push_back(static_cast<int>(std::lround(m.real() / nh)));
  }
  return mult;
}

namespace {

int cocycle_argument(const GSpace& space, int orbit, int g, int x) {
  const FiniteGroup& grp = *space.group;
  if (space.orbit_of[x] != orbit)
    fail_validation("cocycle: point is not in the orbit");
  int gx = space.act(g, x);
  // s(x)^{-1} g^{-1} s(gx)
  return grp.mult(grp.inv(space.section[x]),
                  grp.mult(grp.inv(g), space.section[gx]));
}

}  // namespace

Matrix cocycle_eval(const IrrepClass& eta, const Subgroup& stab,
                    const GSpace& space, int orbit, int g, int x) {
  int a = cocycle_argument(space, orbit, g, x);
  int la = stab.local_of(a);
  if (la < 0) fail_numerical("cocycle: argument left the stabilizer");
  return eta.matrices[la];
}

Matrix cocycle_eval(const Representation& pi, const GSpace& space, int orbit,
                    int g, int x) {
  return pi(cocycle_argument(space, orbit, g, x));
}

double schur_orthogonality_defect(const Subgroup& sub,
                                  const std::vector<IrrepClass>& classes) {
  const int nh = sub.order();
  double worst = 0;
  for (std::size_t a = 0; a < classes.size(); ++a)
    for (std::size_t b = a; b < classes.size(); ++b) {
      const IrrepClass& eta = classes[a];
      const IrrepClass& tht = classes[b];
      for (int i = 0; i < eta.dim; ++i)
        for (int j = 0; j < eta.dim; ++j)
          for (int k = 0; k < tht.dim; ++k)
            for (int l = 0; l < tht.dim; ++l) {
              Complex s = 0;
              for (int h = 0; h < nh; ++h)
                s += eta.matrices[h](i, j) * std::conj(tht.matrices[h](k, l));
              s /= static_cast<double>(nh);
              Complex expect = (a == b && i == k && j == l)
                                   ? Complex(1.0 / eta.dim, 0)
                                   : Complex(0, 0);
              worst = std::max(worst, std::abs(s - expect));
            }
    }
  return worst;
}

double reconstruction_defect(const Representation& rep,
                             const IrrepDecomposition& dec) {
  double worst = 0;
  const int nh = dec.subgroup.order();
  for (int h = 0; h < nh; ++h) {
    Matrix sum = Matrix::Zero(rep.dim, rep.dim);
    for (int c = 0; c < dec.num_classes(); ++c)
      for (const Matrix& s : dec.copies[c])
        sum += s * dec.classes[c].matrices[h] * s.adjoint();
    worst = std::max(worst, defect(sum, rep(dec.subgroup.elements[h])));
  }
  return worst;
}

}  // namespace covkit
