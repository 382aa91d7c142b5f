#include "covkit/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace covkit {

namespace {

constexpr int kDenseTableLimit = 10080;  // S_7 fits, S_8 composes on demand

std::vector<int> compose(const std::vector<int>& g, const std::vector<int>& h) {
  // (g o h)(x) = g(h(x)); matches action first-h-then-g.
  std::vector<int> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = g[h[x]];
  return out;
}

// Lexicographic rank of a permutation of {0..n-1} (factorial number system).
int lehmer_rank(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  static const long long fact[13] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320,
                                     362880, 3628800, 39916800, 479001600};
  long long rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    rank += smaller * fact[n - 1 - i];
  }
  return static_cast<int>(rank);
}

}  // namespace

int FiniteGroup::mult(int g, int h) const {
  if (has_table()) return table[static_cast<std::size_t>(g) * order + h];
  return lehmer_rank(compose(images[g], images[h]));
}

const std::string& FiniteGroup::label(int g) const {
  static const std::string empty;
  return labels.empty() ? empty : labels[g];
}

int FiniteGroup::element_by_label(const std::string& lab) const {
  for (int g = 0; g < order; ++g)
    if (labels[g] == lab) return g;
  return -1;
}

std::string cycle_notation(const std::vector<int>& image) {
  const int n = static_cast<int>(image.size());
  std::vector<bool> seen(n, false);
  std::ostringstream os;
  bool any = false;
  for (int i = 0; i < n; ++i) {
    if (seen[i] || image[i] == i) continue;
    os << '(';
    int j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) os << (n > 9 ? " " : "");
      os << (j + 1);
      first = false;
      j = image[j];
    }
    os << ')';
    any = true;
  }
  return any ? os.str() : "(1)";
}

void check_group_axioms(const FiniteGroup& g, std::uint64_t seed) {
  const int n = g.order;
  if (n <= 0) fail_validation("group: empty");
  // identity
  for (int a = 0; a < n; ++a) {
    if (g.mult(g.identity, a) != a || g.mult(a, g.identity) != a)
      fail_validation("group: identity law fails at element " + std::to_string(a));
  }
  // inverses
  for (int a = 0; a < n; ++a) {
    int b = g.inv(a);
    if (b < 0 || b >= n || g.mult(a, b) != g.identity || g.mult(b, a) != g.identity)
      fail_validation("group: inverse law fails at element " + std::to_string(a));
  }
  // closure / latin square (table form only; permutation form is closed by
  // construction)
  if (g.has_table()) {
    std::vector<bool> seen(n);
    for (int a = 0; a < n; ++a) {
      std::fill(seen.begin(), seen.end(), false);
      for (int b = 0; b < n; ++b) {
        int c = g.mult(a, b);
        if (c < 0 || c >= n) fail_validation("group: product out of range");
        if (seen[c]) fail_validation("group: row " + std::to_string(a) + " is not a permutation");
        seen[c] = true;
      }
    }
  }
  // associativity: full scan for small groups, randomized otherwise
  if (n <= 60) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.mult(g.mult(a, b), c) != g.mult(a, g.mult(b, c)))
            fail_validation("group: associativity fails");
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int trial = 0; trial < 10000; ++trial) {
      int a = pick(rng), b = pick(rng), c = pick(rng);
      if (g.mult(g.mult(a, b), c) != g.mult(a, g.mult(b, c)))
        fail_validation("group: associativity fails");
    }
  }
}

namespace {

void finish_group(FiniteGroup& g) {
  const int n = g.order;
  g.inverse.assign(n, -1);
  if (g.has_images() && !g.has_table()) {
    // Invert the permutation directly instead of scanning products.
    for (int a = 0; a < n; ++a) {
      std::vector<int> inv(g.images[a].size());
      for (std::size_t x = 0; x < inv.size(); ++x) inv[g.images[a][x]] = static_cast<int>(x);
      g.inverse[a] = lehmer_rank(inv);
    }
    return;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (g.mult(a, b) == g.identity) {
        g.inverse[a] = b;
        break;
      }
    }
    if (g.inverse[a] < 0) fail_validation("group: element without inverse");
  }
}

}  // namespace

GroupPtr symmetric_group(int n) {
  if (n < 1 || n > 8) fail_validation("symmetric_group: n must be in 1..8");
  auto g = std::make_shared<FiniteGroup>();
  g->degree = n;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    g->images.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  g->order = static_cast<int>(g->images.size());
  g->identity = 0;  // identity is lexicographically first
  g->labels.reserve(g->order);
  for (const auto& p : g->images) g->labels.push_back(cycle_notation(p));
  if (g->order <= kDenseTableLimit) {
    g->table.resize(static_cast<std::size_t>(g->order) * g->order);
    for (int a = 0; a < g->order; ++a)
      for (int b = 0; b < g->order; ++b)
        g->table[static_cast<std::size_t>(a) * g->order + b] =
            lehmer_rank(compose(g->images[a], g->images[b]));
  }
  finish_group(*g);
  return g;
}

GroupPtr cyclic_group(int n) {
  if (n < 1) fail_validation("cyclic_group: n must be positive");
  auto g = std::make_shared<FiniteGroup>();
  g->order = n;
  g->identity = 0;
  g->degree = n;
  g->table.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    std::vector<int> img(n);
    for (int x = 0; x < n; ++x) img[x] = (x + a) % n;
    g->images.push_back(img);
    g->labels.push_back("c" + std::to_string(a));
    for (int b = 0; b < n; ++b)
      g->table[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
  }
  finish_group(*g);
  return g;
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  auto g = std::make_shared<FiniteGroup>();
  const int na = a->order, nb = b->order;
  g->order = na * nb;
  g->identity = a->identity * nb + b->identity;
  g->table.resize(static_cast<std::size_t>(g->order) * g->order);
  g->labels.reserve(g->order);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      g->labels.push_back("(" + a->label(i) + "," + b->label(j) + ")");
  for (int i = 0; i < g->order; ++i)
    for (int j = 0; j < g->order; ++j) {
      int ai = i / nb, bi = i % nb, aj = j / nb, bj = j % nb;
      g->table[static_cast<std::size_t>(i) * g->order + j] =
          a->mult(ai, aj) * nb + b->mult(bi, bj);
    }
  finish_group(*g);
  return g;
}

GroupPtr group_from_table(std::vector<int> table, std::vector<std::string> labels) {
  auto g = std::make_shared<FiniteGroup>();
  const auto sz = table.size();
  int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(sz))));
  if (n <= 0 || static_cast<std::size_t>(n) * n != sz)
    fail_validation("group_from_table: table is not square");
  g->order = n;
  g->table = std::move(table);
  // locate the identity
  g->identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = g->mult(e, a) == a && g->mult(a, e) == a;
    if (ok) {
      g->identity = e;
      break;
    }
  }
  if (g->identity < 0) fail_validation("group_from_table: no identity element");
  if (!labels.empty()) {
    if (static_cast<int>(labels.size()) != n)
      fail_validation("group_from_table: wrong number of labels");
    g->labels = std::move(labels);
  } else {
    for (int a = 0; a < n; ++a) g->labels.push_back("g" + std::to_string(a));
  }
  finish_group(*g);
  check_group_axioms(*g);
  return g;
}

// ---------------------------------------------------------------------------

std::string GSpace::point_label(int x) const {
  if (power == 2)
    return "(" + std::to_string(x / base_points + 1) + "," +
           std::to_string(x % base_points + 1) + ")";
  return std::to_string(x);
}

namespace {

int moved_points(const std::vector<int>& image) {
  int m = 0;
  for (std::size_t i = 0; i < image.size(); ++i)
    if (image[i] != static_cast<int>(i)) ++m;
  return m;
}

void validate_action(const GSpace& s) {
  const FiniteGroup& g = *s.group;
  for (int x = 0; x < s.num_points; ++x)
    if (s.act(g.identity, x) != x)
      fail_validation("gspace: identity does not fix point " + std::to_string(x));
  const long long work =
      static_cast<long long>(g.order) * g.order * s.num_points;
  if (work <= 2'000'000) {
    for (int a = 0; a < g.order; ++a)
      for (int b = 0; b < g.order; ++b)
        for (int x = 0; x < s.num_points; ++x)
          if (s.act(g.mult(a, b), x) != s.act(a, s.act(b, x)))
            fail_validation("gspace: action is not compatible with the product");
  } else {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pg(0, g.order - 1), px(0, s.num_points - 1);
    for (int t = 0; t < 10000; ++t) {
      int a = pg(rng), b = pg(rng), x = px(rng);
      if (s.act(g.mult(a, b), x) != s.act(a, s.act(b, x)))
        fail_validation("gspace: action is not compatible with the product");
    }
  }
}

}  // namespace

GSpace make_gspace(const GroupPtr& group, std::vector<int> action,
                   SectionPolicy policy, bool validate) {
  GSpace s;
  s.group = group;
  s.policy = policy;
  const int n = group->order;
  if (n == 0 || action.size() % n != 0)
    fail_validation("gspace: action table size is not a multiple of the group order");
  s.num_points = static_cast<int>(action.size()) / n;
  if (s.num_points == 0) fail_validation("gspace: no points");
  for (int v : action)
    if (v < 0 || v >= s.num_points) fail_validation("gspace: point out of range");
  s.action = std::move(action);
  if (validate) validate_action(s);

  // orbits, smallest point first
  s.orbit_of.assign(s.num_points, -1);
  for (int x = 0; x < s.num_points; ++x) {
    if (s.orbit_of[x] >= 0) continue;
    const int orbit_index = static_cast<int>(s.orbits.size());
    std::vector<int> orbit;
    for (int g = 0; g < n; ++g) {
      int y = s.act(g, x);
      if (s.orbit_of[y] < 0) {
        s.orbit_of[y] = orbit_index;
        orbit.push_back(y);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    s.orbits.push_back(std::move(orbit));
    s.base_point.push_back(x);  // x is the smallest unassigned, hence minimal
  }

  // stabilizers and sections
  s.stabilizer.resize(s.orbits.size());
  s.section.assign(s.num_points, -1);
  for (std::size_t o = 0; o < s.orbits.size(); ++o) {
    const int base = s.base_point[o];
    for (int g = 0; g < n; ++g)
      if (s.act(g, base) == base) s.stabilizer[o].push_back(g);
    for (int x : s.orbits[o]) {
      int best = -1;
      for (int g = 0; g < n; ++g) {
        if (s.act(g, base) != x) continue;
        if (x == base) {
          best = group->identity;
          break;
        }
        if (best < 0) {
          best = g;
        } else if (policy == SectionPolicy::MinMoved && group->has_images()) {
          // prefer the representative moving the fewest points, ties by id
          int mg = moved_points(group->images[g]);
          int mb = moved_points(group->images[best]);
          if (mg < mb) best = g;
        }
        if (policy == SectionPolicy::LexMin) break;  // ids scanned ascending
      }
      if (best < 0) fail_validation("gspace: orbit bookkeeping failed");
      s.section[x] = best;
    }
  }
  return s;
}

GSpace natural_action_space(const GroupPtr& group, SectionPolicy policy) {
  if (!group->has_images())
    fail_validation("natural_action_space: group has no permutation realization");
  const int n = group->order, d = group->degree;
  std::vector<int> action(static_cast<std::size_t>(n) * d);
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < d; ++x)
      action[static_cast<std::size_t>(g) * d + x] = group->images[g][x];
  return make_gspace(group, std::move(action), policy, false);
}

GSpace product_action_space(const GroupPtr& group, int power,
                            SectionPolicy policy) {
  if (power != 1 && power != 2)
    fail_validation("product_action_space: power must be 1 or 2");
  if (power == 1) return natural_action_space(group, policy);
  if (!group->has_images())
    fail_validation("product_action_space: group has no permutation realization");
  const int n = group->order, d = group->degree, m = d * d;
  std::vector<int> action(static_cast<std::size_t>(n) * m);
  for (int g = 0; g < n; ++g) {
    const auto& img = group->images[g];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        action[static_cast<std::size_t>(g) * m + a * d + b] = img[a] * d + img[b];
  }
  GSpace s = make_gspace(group, std::move(action), policy, false);
  s.power = 2;
  s.base_points = d;
  return s;
}

GSpace regular_action_space(const GroupPtr& group, SectionPolicy policy) {
  const int n = group->order;
  std::vector<int> action(static_cast<std::size_t>(n) * n);
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x)
      action[static_cast<std::size_t>(g) * n + x] = group->mult(g, x);
  return make_gspace(group, std::move(action), policy, false);
}

GSpace singleton_space(const GroupPtr& group) {
  return make_gspace(group, std::vector<int>(group->order, 0),
                     SectionPolicy::LexMin, false);
}

std::vector<int> stabilizer_of(const GSpace& space, int point) {
  std::vector<int> out;
  for (int g = 0; g < space.group->order; ++g)
    if (space.act(g, point) == point) out.push_back(g);
  return out;
}

}  // namespace covkit
