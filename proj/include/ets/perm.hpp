#pragma once

// Permutations and permutation groups on points 0..n-1.
//
// Groups are held as a generating set plus a base and strong generating set
// (stabilizer chain) built with the deterministic Schreier-Sims algorithm.
// Everything here is sized for "desk scale" groups: orders up to ~10^5 and
// degrees up to a few thousand points.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ets/error.hpp"

namespace ets {

using Point = std::uint32_t;

inline std::size_t hash_mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

/// Unordered pair of distinct points, stored smaller first.
struct Edge {
  Point lo = 0;
  Point hi = 0;

  Edge() = default;
  Edge(Point a, Point b) : lo(std::min(a, b)), hi(std::max(a, b)) {}

  bool contains(Point x) const { return x == lo || x == hi; }
  Point other(Point x) const { return x == lo ? hi : lo; }

  auto operator<=>(const Edge&) const = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const {
    return hash_mix(std::hash<Point>{}(e.lo), e.hi);
  }
};

class Permutation {
 public:
  Permutation() = default;

  /// Throws InputError unless `images` is a bijection on 0..images.size()-1.
  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point x : images_) {
      if (x >= images_.size() || seen[x])
        throw InputError("permutation images are not a bijection on 0.." +
                         std::to_string(images_.size() == 0 ? 0 : images_.size() - 1));
      seen[x] = true;
    }
  }

  static Permutation identity(std::size_t degree) {
    std::vector<Point> images(degree);
    std::iota(images.begin(), images.end(), Point{0});
    return Permutation(std::move(images), Unchecked{});
  }

  /// Builds a permutation from disjoint cycles, e.g. {{0, 1, 2}, {3, 4}}.
  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<Point>>& cycles) {
    std::vector<Point> images(degree);
    std::iota(images.begin(), images.end(), Point{0});
    std::vector<bool> used(degree, false);
    for (const auto& cycle : cycles) {
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        Point x = cycle[i];
        if (x >= degree || used[x])
          throw InputError("cycle notation repeats a point or leaves the domain");
        used[x] = true;
        images[x] = cycle[(i + 1) % cycle.size()];
      }
    }
    return Permutation(std::move(images), Unchecked{});
  }

  std::size_t degree() const { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  Edge operator()(const Edge& e) const { return Edge(images_[e.lo], images_[e.hi]); }
  std::span<const Point> images() const { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<Point> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
    return Permutation(std::move(inv), Unchecked{});
  }

  /// Least common multiple of the cycle lengths.
  std::uint64_t order() const {
    std::vector<bool> seen(images_.size(), false);
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i]) continue;
      std::uint64_t len = 0;
      for (Point x = static_cast<Point>(i); !seen[x]; x = images_[x]) {
        seen[x] = true;
        ++len;
      }
      result = std::lcm(result, len);
    }
    return result;
  }

  std::size_t hash() const {
    std::size_t h = images_.size();
    for (Point x : images_) h = hash_mix(h, x);
    return h;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

  friend Permutation compose(const Permutation& p, const Permutation& q);

 private:
  struct Unchecked {};
  Permutation(std::vector<Point> images, Unchecked) : images_(std::move(images)) {}

  std::vector<Point> images_;
};

struct PermHash {
  std::size_t operator()(const Permutation& p) const { return p.hash(); }
};

/// (p o q)(x) = p(q(x)).
inline Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree())
    throw InputError("compose: degree mismatch (" + std::to_string(p.degree()) + " vs " +
                     std::to_string(q.degree()) + ")");
  std::vector<Point> images(q.degree());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = p.images_[q.images_[i]];
  return Permutation(std::move(images), Permutation::Unchecked{});
}

/// g x g^-1
inline Permutation conjugate(const Permutation& g, const Permutation& x) {
  return compose(compose(g, x), g.inverse());
}

/// Default ceiling on group orders for which element-level work is attempted.
inline constexpr std::uint64_t kDefaultMaxGroupOrder = 100000;

class PermGroup {
 public:
  /// One level of the stabilizer chain. `transversal[i]` maps `base` to `orbit[i]`.
  struct Level {
    Point base = 0;
    std::vector<Permutation> gens;
    std::vector<Point> orbit;
    std::vector<Permutation> transversal;
    std::vector<std::int32_t> slot;           // point -> orbit index, or -1
    std::vector<std::size_t> verified_upto;   // per orbit index: Schreier gens checked

    const Permutation* rep(Point x) const {
      return slot[x] < 0 ? nullptr : &transversal[static_cast<std::size_t>(slot[x])];
    }
  };

  PermGroup() = default;

  /// The chain is built immediately; `base_prefix` fixes the first base points.
  PermGroup(std::size_t degree, std::vector<Permutation> generators,
            std::span<const Point> base_prefix = {})
      : degree_(degree) {
    for (auto& g : generators) {
      if (g.degree() != degree)
        throw InputError("generator degree " + std::to_string(g.degree()) +
                         " does not match group degree " + std::to_string(degree));
      if (!g.is_identity()) generators_.push_back(std::move(g));
    }
    build(base_prefix);
  }

  static PermGroup trivial(std::size_t degree) { return PermGroup(degree, {}); }

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  const std::vector<Level>& chain() const { return levels_; }

  std::vector<Point> base() const {
    std::vector<Point> b;
    for (const auto& l : levels_) b.push_back(l.base);
    return b;
  }

  std::uint64_t order() const {
    std::uint64_t result = 1;
    for (const auto& l : levels_) {
      std::uint64_t s = l.orbit.size();
      if (result > std::numeric_limits<std::uint64_t>::max() / s)
        throw CeilingError("group order overflows 64 bits");
      result *= s;
    }
    return result;
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_) return false;
    auto [residue, level] = sift(g, 0);
    return level == levels_.size() && residue.is_identity();
  }

  /// Visits every element as u_0 o u_1 o ... o u_k; stops early if `f` returns false.
  template <class F>
  void for_each_element(F&& f) const {
    Permutation id = Permutation::identity(degree_);
    bool go = true;
    visit(0, id, f, go);
  }

  std::vector<Permutation> elements(std::uint64_t limit = kDefaultMaxGroupOrder) const {
    std::uint64_t n = order();
    if (n > limit)
      throw CeilingError("group of order " + std::to_string(n) +
                         " exceeds the element enumeration ceiling " + std::to_string(limit));
    std::vector<Permutation> out;
    out.reserve(n);
    for_each_element([&](const Permutation& g) {
      out.push_back(g);
      return true;
    });
    return out;
  }

 private:
  std::pair<Permutation, std::size_t> sift(Permutation g, std::size_t from) const {
    for (std::size_t l = from; l < levels_.size(); ++l) {
      const Level& level = levels_[l];
      const Permutation* u = level.rep(g(level.base));
      if (u == nullptr) return {std::move(g), l};
      g = compose(u->inverse(), g);
    }
    return {std::move(g), levels_.size()};
  }

  Level make_level(Point base) const {
    Level level;
    level.base = base;
    level.orbit = {base};
    level.transversal = {Permutation::identity(degree_)};
    level.slot.assign(degree_, -1);
    level.slot[base] = 0;
    level.verified_upto = {0};
    return level;
  }

  void build(std::span<const Point> prefix) {
    for (Point p : prefix) {
      if (p >= degree_) throw InputError("base point outside the group's domain");
      if (std::find_if(levels_.begin(), levels_.end(),
                       [&](const Level& l) { return l.base == p; }) == levels_.end())
        levels_.push_back(make_level(p));
    }
    if (levels_.empty() && !generators_.empty()) levels_.push_back(make_level(largest_orbit_point()));
    for (const auto& g : generators_) insert(g, 0);
  }

  // Smallest point in a largest orbit of <generators>.
  Point largest_orbit_point() const {
    std::vector<bool> seen(degree_, false);
    Point best = 0;
    std::size_t best_size = 0;
    for (Point start = 0; start < degree_; ++start) {
      if (seen[start]) continue;
      std::vector<Point> queue{start};
      seen[start] = true;
      for (std::size_t i = 0; i < queue.size(); ++i)
        for (const auto& g : generators_)
          if (Point y = g(queue[i]); !seen[y]) {
            seen[y] = true;
            queue.push_back(y);
          }
      if (queue.size() > best_size) {
        best_size = queue.size();
        best = start;
      }
    }
    return best;
  }

  // Point on a longest cycle of h (h is not the identity).
  static Point new_base_point(const Permutation& h) {
    std::vector<bool> seen(h.degree(), false);
    Point best = 0;
    std::size_t best_len = 0;
    for (Point i = 0; i < h.degree(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (Point x = i; !seen[x]; x = h(x)) {
        seen[x] = true;
        ++len;
      }
      if (len > best_len) {
        best_len = len;
        best = i;
      }
    }
    return best;
  }

  // g lies in the stabilizer of the first `from` base points.
  void insert(const Permutation& g, std::size_t from) {
    auto [h, j] = sift(g, from);
    if (j == levels_.size() && h.is_identity()) return;
    if (j == levels_.size()) levels_.push_back(make_level(new_base_point(h)));
    for (std::size_t l = from; l <= j; ++l) levels_[l].gens.push_back(h);
    for (std::size_t l = j + 1; l-- > from;) close(l);
  }

  // Extends the orbit of level l and sifts every unchecked Schreier generator.
  void close(std::size_t l) {
    {
      Level& level = levels_[l];
      for (std::size_t i = 0; i < level.orbit.size(); ++i) {
        for (const auto& s : level.gens) {
          Point y = s(level.orbit[i]);
          if (level.slot[y] >= 0) continue;
          level.slot[y] = static_cast<std::int32_t>(level.orbit.size());
          level.orbit.push_back(y);
          level.transversal.push_back(compose(s, level.transversal[i]));
          level.verified_upto.push_back(0);
        }
      }
    }
    for (std::size_t i = 0; i < levels_[l].orbit.size(); ++i) {
      while (levels_[l].verified_upto[i] < levels_[l].gens.size()) {
        const Level& level = levels_[l];
        const Permutation& s = level.gens[level.verified_upto[i]];
        const Permutation& u = level.transversal[i];
        Permutation su = compose(s, u);
        Permutation schreier = compose(level.rep(su(level.base))->inverse(), su);
        ++levels_[l].verified_upto[i];
        // Only levels below l change here, so `level` stays valid up to this point.
        insert(schreier, l + 1);
      }
    }
  }

  template <class F>
  void visit(std::size_t l, const Permutation& partial, F& f, bool& go) const {
    if (!go) return;
    if (l == levels_.size()) {
      go = f(partial);
      return;
    }
    for (const auto& u : levels_[l].transversal) {
      visit(l + 1, compose(partial, u), f, go);
      if (!go) return;
    }
  }

  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Level> levels_;
};

/// Subgroup representative together with its ambient group.
struct SubgroupRep {
  PermGroup group;
  std::shared_ptr<const PermGroup> parent;
};

// ---------------------------------------------------------------------------
// Orbits

template <class T, class Act>
std::vector<T> orbit_under(const PermGroup& g, const T& x, Act act) {
  std::vector<T> out{x};
  std::set<T> seen{x};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& s : g.generators()) {
      T y = act(s, out[i]);
      if (seen.insert(y).second) out.push_back(y);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Point> orbit(const PermGroup& g, Point x) {
  if (x >= g.degree()) throw InputError("orbit: point outside the group's domain");
  return orbit_under(g, x, [](const Permutation& s, Point p) { return s(p); });
}

inline std::vector<Edge> orbit(const PermGroup& g, const Edge& e) {
  if (e.hi >= g.degree() || e.lo == e.hi)
    throw InputError("orbit: edge outside the group's domain");
  return orbit_under(g, e, [](const Permutation& s, const Edge& x) { return s(x); });
}

/// Partition of the points into orbits, each sorted, ordered by least point.
inline std::vector<std::vector<Point>> orbits(const PermGroup& g) {
  std::vector<std::vector<Point>> out;
  std::vector<bool> seen(g.degree(), false);
  for (Point x = 0; x < g.degree(); ++x) {
    if (seen[x]) continue;
    auto o = orbit(g, x);
    for (Point y : o) seen[y] = true;
    out.push_back(std::move(o));
  }
  return out;
}

template <class T>
bool is_transitive(const PermGroup& g, const std::vector<T>& domain) {
  if (domain.empty()) throw InputError("is_transitive: empty domain");
  std::set<T> members(domain.begin(), domain.end());
  for (const auto& s : g.generators())
    for (const auto& x : domain)
      if (!members.contains(s(x)))
        throw InputError("is_transitive: domain is not closed under the group");
  return orbit(g, domain.front()).size() == members.size();
}

// ---------------------------------------------------------------------------
// Backtrack search for subgroups defined by a property.

/// Returns {g in G : pred(g)}, which must be a subgroup. The search walks the
/// stabilizer chain rebased at `base_prefix`; a branch is cut as soon as some
/// base point is sent to a point of a different `cell`, so `cell` must be a
/// partition that every member of the subgroup preserves.
template <class Pred>
PermGroup subgroup_search(const PermGroup& g, std::span<const Point> base_prefix,
                          std::span<const int> cell, Pred pred,
                          std::uint64_t limit = kDefaultMaxGroupOrder) {
  if (g.order() > limit)
    throw CeilingError("subgroup search in a group of order " + std::to_string(g.order()) +
                       " exceeds the ceiling " + std::to_string(limit));
  PermGroup rebased(g.degree(), g.generators(), base_prefix);
  const auto& chain = rebased.chain();
  std::vector<Permutation> found;
  PermGroup result = PermGroup::trivial(g.degree());

  auto dfs = [&](auto&& self, std::size_t l, const Permutation& partial) -> void {
    if (l == chain.size()) {
      if (pred(partial) && !result.contains(partial)) {
        found.push_back(partial);
        result = PermGroup(g.degree(), found);
      }
      return;
    }
    const auto& level = chain[l];
    for (std::size_t i = 0; i < level.orbit.size(); ++i) {
      Point image = partial(level.orbit[i]);
      if (cell[image] != cell[level.base]) continue;
      self(self, l + 1, compose(partial, level.transversal[i]));
    }
  };
  dfs(dfs, 0, Permutation::identity(g.degree()));
  return result;
}

inline PermGroup stabilizer(const PermGroup& g, Point x,
                            std::uint64_t limit = kDefaultMaxGroupOrder) {
  if (x >= g.degree()) throw InputError("stabilizer: point outside the group's domain");
  std::vector<int> cell(g.degree(), 0);
  cell[x] = 1;
  Point prefix[] = {x};
  return subgroup_search(g, prefix, cell, [](const Permutation&) { return true; }, limit);
}

/// Setwise stabilizer of an unordered pair.
inline PermGroup stabilizer(const PermGroup& g, const Edge& e,
                            std::uint64_t limit = kDefaultMaxGroupOrder) {
  if (e.hi >= g.degree() || e.lo == e.hi)
    throw InputError("stabilizer: edge outside the group's domain");
  std::vector<int> cell(g.degree(), 0);
  cell[e.lo] = cell[e.hi] = 1;
  Point prefix[] = {e.lo, e.hi};
  return subgroup_search(g, prefix, cell, [](const Permutation&) { return true; }, limit);
}

// ---------------------------------------------------------------------------
// Subgroups of a given order, up to conjugacy.

namespace detail {

/// Dense indexing of the elements of a small group.
class ElementIndex {
 public:
  explicit ElementIndex(const PermGroup& g, std::uint64_t limit) : elements_(g.elements(limit)) {
    index_.reserve(elements_.size() * 2);
    for (std::uint32_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
    for (const auto& s : g.generators()) {
      Permutation inv = s.inverse();
      std::vector<std::uint32_t> table(elements_.size());
      for (std::uint32_t i = 0; i < elements_.size(); ++i)
        table[i] = at(compose(compose(s, elements_[i]), inv));
      conj_.push_back(std::move(table));
    }
    for (std::uint32_t i = 0; i < elements_.size(); ++i) orders_.push_back(elements_[i].order());
  }

  std::size_t size() const { return elements_.size(); }
  const Permutation& operator[](std::uint32_t i) const { return elements_[i]; }
  std::uint64_t element_order(std::uint32_t i) const { return orders_[i]; }
  std::uint32_t at(const Permutation& p) const { return index_.at(p); }
  const std::vector<std::vector<std::uint32_t>>& conjugation_tables() const { return conj_; }

 private:
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, std::uint32_t, PermHash> index_;
  std::vector<std::vector<std::uint32_t>> conj_;
  std::vector<std::uint64_t> orders_;
};

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = v.size();
    for (auto x : v) h = hash_mix(h, x);
    return h;
  }
};

/// Sorted element indices of <gens>, or empty if the group grows beyond `cap`.
inline std::vector<std::uint32_t> closure(const ElementIndex& index,
                                          const std::vector<Permutation>& gens,
                                          std::size_t cap) {
  std::vector<std::uint32_t> members{index.at(Permutation::identity(index[0].degree()))};
  std::unordered_set<std::uint32_t> seen(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (const auto& s : gens) {
      std::uint32_t y = index.at(compose(index[members[i]], s));
      if (seen.insert(y).second) {
        members.push_back(y);
        if (members.size() > cap) return {};
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

}  // namespace detail

/// One representative per conjugacy class of subgroups of order exactly k.
///
/// Lattice walk: every subgroup K is reached along a chain
/// <g1> < <g1,g2> < ... < K whose members all have order dividing |K|, so
/// joining class representatives with single elements and discarding joins
/// whose order does not divide k enumerates every class. Each class is stored
/// with all of its conjugates for exact membership tests.
inline std::vector<SubgroupRep> subgroups_of_order(const std::shared_ptr<const PermGroup>& g,
                                                   std::uint64_t k,
                                                   std::uint64_t limit = kDefaultMaxGroupOrder) {
  const std::uint64_t n = g->order();
  if (k == 0 || n % k != 0)
    throw InputError("subgroups_of_order: " + std::to_string(k) + " does not divide |G| = " +
                     std::to_string(n));
  if (n > limit)
    throw CeilingError("subgroup enumeration refused: |G| = " + std::to_string(n) +
                       " exceeds the ceiling " + std::to_string(limit));
  if (k == n) return {SubgroupRep{*g, g}};
  if (k == 1) return {SubgroupRep{PermGroup::trivial(g->degree()), g}};

  detail::ElementIndex index(*g, limit);
  const auto& conj = index.conjugation_tables();

  struct Candidate {
    std::vector<Permutation> gens;
    std::vector<std::uint32_t> members;
  };
  std::unordered_set<std::vector<std::uint32_t>, detail::KeyHash> known;
  std::vector<Candidate> reps;
  std::vector<Candidate> result;

  auto admit = [&](Candidate c) {
    if (known.contains(c.members)) return;
    // Record the whole conjugacy class.
    std::vector<std::vector<std::uint32_t>> queue{c.members};
    known.insert(c.members);
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto& table : conj) {
        std::vector<std::uint32_t> img;
        img.reserve(queue[i].size());
        for (auto x : queue[i]) img.push_back(table[x]);
        std::sort(img.begin(), img.end());
        if (known.insert(img).second) queue.push_back(std::move(img));
      }
    if (c.members.size() == k)
      result.push_back(std::move(c));
    else
      reps.push_back(std::move(c));
  };

  admit(Candidate{{}, detail::closure(index, {}, k)});
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const std::vector<Permutation> base_gens = reps[r].gens;
    const std::vector<std::uint32_t> members = reps[r].members;
    std::vector<bool> skip(index.size(), false);
    for (auto m : members) skip[m] = true;
    for (std::uint32_t x = 0; x < index.size(); ++x) {
      if (skip[x] || k % index.element_order(x) != 0) continue;
      // <H, x> = <H, hx> for every h in H.
      for (auto m : members) skip[index.at(compose(index[m], index[x]))] = true;
      std::vector<Permutation> gens = base_gens;
      gens.push_back(index[x]);
      auto joined = detail::closure(index, gens, k);
      if (joined.empty() || k % joined.size() != 0) continue;
      admit(Candidate{std::move(gens), std::move(joined)});
    }
  }

  std::sort(result.begin(), result.end(),
            [](const Candidate& a, const Candidate& b) { return a.members < b.members; });
  std::vector<SubgroupRep> out;
  for (auto& c : result) out.push_back(SubgroupRep{PermGroup(g->degree(), std::move(c.gens)), g});
  return out;
}

/// True iff some g in G has g A g^-1 = B.
inline bool conjugate_subgroups(const PermGroup& g, const PermGroup& a, const PermGroup& b,
                                std::uint64_t limit = kDefaultMaxGroupOrder) {
  if (a.order() != b.order()) return false;
  if (g.order() > limit)
    throw CeilingError("conjugacy test in a group of order " + std::to_string(g.order()) +
                       " exceeds the ceiling " + std::to_string(limit));
  bool found = false;
  g.for_each_element([&](const Permutation& x) {
    found = std::all_of(a.generators().begin(), a.generators().end(),
                        [&](const Permutation& s) { return b.contains(conjugate(x, s)); });
    return !found;
  });
  return found;
}

}  // namespace ets
