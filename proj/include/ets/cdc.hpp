#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ets/error.hpp"
#include "ets/graph.hpp"
#include "ets/perm.hpp"

namespace ets {

/// Simple cycle stored in canonical form: it starts at its least vertex and
/// runs in the direction whose second vertex is smaller.
class Cycle {
 public:
  Cycle() = default;

  explicit Cycle(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3)
      throw InputError("cycle needs at least 3 vertices, got " + std::to_string(vertices_.size()));
    std::vector<Point> sorted = vertices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InputError("cycle repeats a vertex");
    canonicalize();
  }

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  /// Consecutive pairs including last -> first, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      out.emplace_back(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    std::sort(out.begin(), out.end());
    return out;
  }

  Cycle image(const Permutation& p) const {
    std::vector<Point> v;
    v.reserve(vertices_.size());
    for (Point x : vertices_) v.push_back(p(x));
    Cycle c;
    c.vertices_ = std::move(v);
    c.canonicalize();
    return c;
  }

  bool lies_on(const CubicGraph& g) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      Point a = vertices_[i];
      Point b = vertices_[(i + 1) % vertices_.size()];
      if (a >= g.vertex_count() || b >= g.vertex_count() || !g.adjacent(a, b)) return false;
    }
    return true;
  }

  friend bool operator==(const Cycle&, const Cycle&) = default;
  friend auto operator<=>(const Cycle&, const Cycle&) = default;

 private:
  void canonicalize() {
    auto least = std::min_element(vertices_.begin(), vertices_.end());
    std::rotate(vertices_.begin(), least, vertices_.end());
    if (vertices_[1] > vertices_.back()) std::reverse(vertices_.begin() + 1, vertices_.end());
  }

  std::vector<Point> vertices_;
};

struct CycleHash {
  std::size_t operator()(const Cycle& c) const {
    std::size_t h = c.size();
    for (Point x : c.vertices()) h = hash_mix(h, x);
    return h;
  }
};

using CycleSet = std::vector<Cycle>;

inline CycleSet image(const CycleSet& cycles, const Permutation& p) {
  CycleSet out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(c.image(p));
  std::sort(out.begin(), out.end());
  return out;
}

/// First edge whose coverage is not exactly 2, with its coverage count.
inline std::optional<std::pair<Edge, int>> coverage_defect(const CubicGraph& g,
                                                           const CycleSet& cycles) {
  std::vector<int> cover(g.edge_count(), 0);
  for (const auto& c : cycles) {
    if (!c.lies_on(g)) throw SurfaceError("cycle is not a cycle of the host graph");
    for (const auto& e : c.edges()) ++cover[g.edge_index(e)];
  }
  for (std::size_t i = 0; i < cover.size(); ++i)
    if (cover[i] != 2) return std::pair{g.edges()[i], cover[i]};
  return std::nullopt;
}

inline bool is_cdc(const CubicGraph& g, const CycleSet& cycles) {
  for (const auto& c : cycles)
    if (!c.lies_on(g)) return false;
  return !coverage_defect(g, cycles).has_value();
}

/// First pair of cycles (by index) sharing more than one edge.
inline std::optional<std::pair<std::size_t, std::size_t>> faithfulness_defect(
    const CycleSet& cycles) {
  std::map<Edge, std::vector<std::size_t>> holders;
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (const auto& e : cycles[i].edges()) holders[e].push_back(i);
  std::map<std::pair<std::size_t, std::size_t>, int> shared;
  for (const auto& [e, list] : holders)
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = a + 1; b < list.size(); ++b)
        if (++shared[{list[a], list[b]}] > 1) return std::pair{list[a], list[b]};
  return std::nullopt;
}

inline bool is_vertex_faithful(const CycleSet& cycles) {
  return !faithfulness_defect(cycles).has_value();
}

/// Vertex-faithful cycle double cover of a host graph. Cycles are kept sorted.
class CycleDoubleCover {
 public:
  CycleDoubleCover() = default;

  /// Throws SurfaceError naming the violated condition.
  CycleDoubleCover(const CubicGraph& g, CycleSet cycles) : cycles_(std::move(cycles)) {
    std::sort(cycles_.begin(), cycles_.end());
    if (auto d = coverage_defect(g, cycles_))
      throw SurfaceError("not a cycle double cover: edge {" + std::to_string(d->first.lo) + "," +
                         std::to_string(d->first.hi) + "} is covered " +
                         std::to_string(d->second) + " times");
    if (auto d = faithfulness_defect(cycles_))
      throw SurfaceError("cycle double cover is not vertex-faithful: cycles " +
                         std::to_string(d->first) + " and " + std::to_string(d->second) +
                         " share more than one edge");
  }

  const CycleSet& cycles() const { return cycles_; }
  std::size_t size() const { return cycles_.size(); }

  friend bool operator==(const CycleDoubleCover&, const CycleDoubleCover&) = default;
  friend auto operator<=>(const CycleDoubleCover&, const CycleDoubleCover&) = default;

 private:
  CycleSet cycles_;
};

// ---------------------------------------------------------------------------
// Automorphism-induced cycles

/// Sweeps path[0..n-2] around by the powers of sigma. Returns nullopt (the
/// empty cycle) unless the (n-1)*order(sigma) swept vertices are distinct and
/// there are at least 3 of them.
inline std::optional<Cycle> alpha_cycle(const CubicGraph& g, const Permutation& sigma,
                                        const std::vector<Point>& path) {
  if (path.size() < 2) throw InputError("alpha_cycle: path needs at least 2 vertices");
  for (Point v : path)
    if (v >= g.vertex_count()) throw InputError("alpha_cycle: path vertex outside the graph");
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (!g.adjacent(path[i], path[i + 1]))
      throw InputError("alpha_cycle: consecutive path vertices are not adjacent");
  if (!is_automorphism(g, sigma)) throw InputError("alpha_cycle: sigma is not an automorphism");
  if (sigma(path.front()) != path.back())
    throw InputError("alpha_cycle: sigma does not map the first path vertex to the last");

  const std::uint64_t ell = sigma.order();
  const std::size_t seg = path.size() - 1;
  std::vector<Point> seq;
  seq.reserve(seg * ell);
  std::vector<Point> cur(path.begin(), path.end() - 1);
  for (std::uint64_t i = 0; i < ell; ++i) {
    for (Point& v : cur) v = sigma(v);
    seq.insert(seq.end(), cur.begin(), cur.end());
  }
  std::vector<Point> sorted = seq;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  if (seq.size() < 3) return std::nullopt;
  return Cycle(std::move(seq));
}

/// {h(c) : h in H}, sorted.
inline CycleSet cycle_orbit(const PermGroup& h, const Cycle& c) {
  return orbit_under(h, c, [](const Permutation& s, const Cycle& x) { return x.image(s); });
}

/// Automorphisms of g (inside `aut`) that permute the cycles of the cover.
inline PermGroup cdc_stabilizer(const PermGroup& aut, const CycleSet& cycles,
                                std::uint64_t limit = kDefaultMaxGroupOrder) {
  // Cell of a vertex: the sorted lengths of the cycles through it.
  std::vector<std::vector<std::size_t>> lengths(aut.degree());
  for (const auto& c : cycles)
    for (Point v : c.vertices()) lengths[v].push_back(c.size());
  std::map<std::vector<std::size_t>, int> ids;
  std::vector<int> cell(aut.degree());
  for (Point v = 0; v < aut.degree(); ++v) {
    std::sort(lengths[v].begin(), lengths[v].end());
    cell[v] = ids.emplace(lengths[v], static_cast<int>(ids.size())).first->second;
  }
  std::unordered_set<Cycle, CycleHash> members(cycles.begin(), cycles.end());
  return subgroup_search(
      aut, {}, cell,
      [&](const Permutation& p) {
        return std::all_of(cycles.begin(), cycles.end(),
                           [&](const Cycle& c) { return members.contains(c.image(p)); });
      },
      limit);
}

/// Least image of the cycle set over the given group elements.
inline CycleSet canonical_form(const std::vector<Permutation>& elements, const CycleSet& cycles) {
  CycleSet best = cycles;
  std::sort(best.begin(), best.end());
  for (const auto& p : elements) {
    CycleSet img = image(cycles, p);
    if (img < best) best = std::move(img);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

inline constexpr std::size_t kDefaultOracleBound = 20;

/// All simple cycles of g, each once, in canonical form and sorted.
inline CycleSet simple_cycles(const CubicGraph& g) {
  const Point n = static_cast<Point>(g.vertex_count());
  CycleSet out;
  std::vector<Point> path;
  std::vector<bool> on_path(n, false);
  auto dfs = [&](auto&& self, Point start, Point v) -> void {
    for (Point w : g.neighbors(v)) {
      if (w == start && path.size() >= 3 && path[1] < path.back()) out.emplace_back(path);
      if (w <= start || on_path[w]) continue;
      on_path[w] = true;
      path.push_back(w);
      self(self, start, w);
      path.pop_back();
      on_path[w] = false;
    }
  };
  for (Point s = 0; s < n; ++s) {
    path = {s};
    on_path[s] = true;
    dfs(dfs, s, s);
    on_path[s] = false;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Calls `f` once per vertex-faithful cycle double cover of g (cycles sorted).
///
/// Exact cover with multiplicity two: the edge with the fewest viable cycles
/// is branched on; a cycle is viable if it is unused, none of its edges is
/// already covered twice and it shares at most one edge with every chosen
/// cycle. Siblings exclude the cycles tried before them, so each cover is
/// produced exactly once.
template <class F>
void for_each_cdc_bruteforce(const CubicGraph& g, F&& f,
                             std::size_t bound = kDefaultOracleBound) {
  if (g.vertex_count() > bound)
    throw CeilingError("brute-force CDC enumeration refused: " + std::to_string(g.vertex_count()) +
                       " vertices exceeds the oracle bound " + std::to_string(bound));
  const CycleSet cycles = simple_cycles(g);
  const std::size_t m = g.edge_count();
  const std::size_t words = (m + 63) / 64;
  std::vector<std::vector<std::uint32_t>> edges_of(cycles.size());
  std::vector<std::vector<std::uint64_t>> mask(cycles.size(), std::vector<std::uint64_t>(words, 0));
  std::vector<std::vector<std::uint32_t>> through(m);
  for (std::uint32_t c = 0; c < cycles.size(); ++c)
    for (const auto& e : cycles[c].edges()) {
      auto idx = static_cast<std::uint32_t>(g.edge_index(e));
      edges_of[c].push_back(idx);
      mask[c][idx / 64] |= std::uint64_t{1} << (idx % 64);
      through[idx].push_back(c);
    }
  std::vector<std::vector<std::uint32_t>> clashes(cycles.size());
  for (std::uint32_t a = 0; a < cycles.size(); ++a)
    for (std::uint32_t b = a + 1; b < cycles.size(); ++b) {
      int shared = 0;
      for (std::size_t w = 0; w < words; ++w) shared += std::popcount(mask[a][w] & mask[b][w]);
      if (shared > 1) {
        clashes[a].push_back(b);
        clashes[b].push_back(a);
      }
    }

  std::vector<int> cover(m, 0);
  std::vector<int> blocked(cycles.size(), 0);  // chosen, excluded or clashing
  std::vector<std::uint32_t> chosen;
  std::size_t uncovered = 2 * m;

  auto viable = [&](std::uint32_t c) {
    if (blocked[c] != 0) return false;
    for (auto e : edges_of[c])
      if (cover[e] >= 2) return false;
    return true;
  };
  auto take = [&](std::uint32_t c, int delta) {
    for (auto e : edges_of[c]) cover[e] += delta;
    blocked[c] += delta;
    for (auto d : clashes[c]) blocked[d] += delta;
    uncovered -= static_cast<std::size_t>(delta) * edges_of[c].size();
  };

  std::vector<std::uint32_t> options;
  auto search = [&](auto&& self) -> void {
    if (uncovered == 0) {
      CycleSet out;
      for (auto c : chosen) out.push_back(cycles[c]);
      std::sort(out.begin(), out.end());
      f(std::move(out));
      return;
    }
    std::size_t best_edge = m;
    std::size_t best_count = SIZE_MAX;
    for (std::size_t e = 0; e < m; ++e) {
      if (cover[e] == 2) continue;
      std::size_t count = 0;
      for (auto c : through[e]) count += viable(c) ? 1 : 0;
      if (count < static_cast<std::size_t>(2 - cover[e])) return;
      if (count < best_count) {
        best_count = count;
        best_edge = e;
      }
    }
    std::vector<std::uint32_t> branch;
    for (auto c : through[best_edge])
      if (viable(c)) branch.push_back(c);
    std::size_t excluded = 0;
    for (auto c : branch) {
      if (viable(c)) {
        chosen.push_back(c);
        take(c, 1);
        self(self);
        take(c, -1);
        chosen.pop_back();
      }
      ++blocked[c];
      ++excluded;
    }
    for (std::size_t i = 0; i < excluded; ++i) --blocked[branch[i]];
  };
  search(search);
}

/// Every vertex-faithful cycle double cover of g, canonically sorted.
inline std::vector<CycleDoubleCover> enumerate_cdcs_bruteforce(
    const CubicGraph& g, std::size_t bound = kDefaultOracleBound) {
  std::vector<CycleDoubleCover> out;
  for_each_cdc_bruteforce(
      g, [&](CycleSet cycles) { out.emplace_back(g, std::move(cycles)); }, bound);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ets
