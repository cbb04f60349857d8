#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ets/error.hpp"
#include "ets/perm.hpp"

namespace ets {

/// Connected simple graph in which every vertex has exactly three neighbours.
class CubicGraph {
 public:
  using Neighbors = std::array<Point, 3>;

  CubicGraph() = default;

  /// Throws NotCubic, Disconnected or InputError (loops, repeated edges).
  static CubicGraph from_edges(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<Point>> adj(n);
    for (const auto& e : edges) {
      if (e.hi >= n) throw InputError("edge endpoint outside 0.." + std::to_string(n - 1));
      if (e.lo == e.hi) throw InputError("loop at vertex " + std::to_string(e.lo));
      adj[e.lo].push_back(e.hi);
      adj[e.hi].push_back(e.lo);
    }
    return from_adjacency(std::move(adj));
  }

  static CubicGraph from_adjacency(std::vector<std::vector<Point>> adj) {
    const std::size_t n = adj.size();
    if (n == 0) throw NotCubic("graph has no vertices");
    CubicGraph g;
    g.adj_.resize(n);
    for (Point v = 0; v < n; ++v) {
      auto& nb = adj[v];
      std::sort(nb.begin(), nb.end());
      if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
        throw InputError("repeated edge at vertex " + std::to_string(v));
      if (nb.size() != 3)
        throw NotCubic("vertex " + std::to_string(v) + " has degree " +
                       std::to_string(nb.size()) + ", expected 3");
      std::copy(nb.begin(), nb.end(), g.adj_[v].begin());
      for (Point w : nb) {
        if (w == v) throw InputError("loop at vertex " + std::to_string(v));
        if (w > v) g.edges_.emplace_back(v, w);
      }
    }
    for (Point v = 0; v < n; ++v)
      for (Point w : g.adj_[v])
        if (!g.adjacent(w, v)) throw InputError("adjacency is not symmetric");
    std::sort(g.edges_.begin(), g.edges_.end());

    std::vector<bool> seen(n, false);
    std::vector<Point> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      Point v = stack.back();
      stack.pop_back();
      for (Point w : g.adj_[v])
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
    }
    if (reached != n)
      throw Disconnected("graph is disconnected: " + std::to_string(reached) + " of " +
                         std::to_string(n) + " vertices reachable from vertex 0");
    return g;
  }

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Neighbors& neighbors(Point v) const { return adj_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool adjacent(Point u, Point v) const {
    const auto& nb = adj_[u];
    return nb[0] == v || nb[1] == v || nb[2] == v;
  }

  std::size_t edge_index(const Edge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e)
      throw InputError("{" + std::to_string(e.lo) + "," + std::to_string(e.hi) +
                       "} is not an edge");
    return static_cast<std::size_t>(it - edges_.begin());
  }

  friend bool operator==(const CubicGraph&, const CubicGraph&) = default;

 private:
  std::vector<Neighbors> adj_;
  std::vector<Edge> edges_;
};

// ---------------------------------------------------------------------------
// graph6

/// Parses one graph6 line (no ">>graph6<<" header). Trailing newline is allowed.
inline CubicGraph parse_graph6(std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw MalformedGraph6("empty graph6 string");
  for (char ch : text)
    if (ch < 63 || ch > 126)
      throw MalformedGraph6("graph6 byte out of range 63..126: " + std::string(1, ch));

  auto value = [&](std::size_t i) { return static_cast<std::uint64_t>(text[i] - 63); };
  std::uint64_t n = 0;
  std::size_t pos = 0;
  if (value(0) < 63) {
    n = value(0);
    pos = 1;
  } else if (text.size() >= 4 && value(1) < 63) {
    n = (value(1) << 12) | (value(2) << 6) | value(3);
    pos = 4;
  } else if (text.size() >= 8 && value(1) == 63) {
    for (std::size_t i = 2; i < 8; ++i) n = (n << 6) | value(i);
    pos = 8;
  } else {
    throw MalformedGraph6("truncated graph6 size field");
  }

  const std::uint64_t bits = n * (n - (n > 0 ? 1 : 0)) / 2;
  const std::uint64_t bytes = (bits + 5) / 6;
  if (text.size() - pos != bytes)
    throw MalformedGraph6("graph6 body has " + std::to_string(text.size() - pos) +
                          " bytes, expected " + std::to_string(bytes) + " for n = " +
                          std::to_string(n));

  std::vector<std::vector<Point>> adj(n);
  std::uint64_t k = 0;
  for (Point j = 1; j < n; ++j)
    for (Point i = 0; i < j; ++i, ++k) {
      std::uint64_t byte = value(pos + k / 6);
      if ((byte >> (5 - k % 6)) & 1U) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  for (; k < bytes * 6; ++k)
    if ((value(pos + k / 6) >> (5 - k % 6)) & 1U)
      throw MalformedGraph6("graph6 padding bits are not zero");
  return CubicGraph::from_adjacency(std::move(adj));
}

inline std::string write_graph6(const CubicGraph& g) {
  const std::uint64_t n = g.vertex_count();
  std::string out;
  if (n < 63) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n < 258048) {
    out.push_back(126);
    for (int shift : {12, 6, 0}) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
  } else {
    out.push_back(126);
    out.push_back(126);
    for (int shift : {30, 24, 18, 12, 6, 0})
      out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
  }
  int acc = 0;
  int used = 0;
  for (Point j = 1; j < n; ++j)
    for (Point i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
      if (++used == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = used = 0;
      }
    }
  if (used > 0) out.push_back(static_cast<char>((acc << (6 - used)) + 63));
  return out;
}

/// Vertex v of g becomes p(v).
inline CubicGraph relabel(const CubicGraph& g, const Permutation& p) {
  if (p.degree() != g.vertex_count())
    throw InputError("relabel: permutation degree " + std::to_string(p.degree()) +
                     " does not match vertex count " + std::to_string(g.vertex_count()));
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back(p(e));
  return CubicGraph::from_edges(g.vertex_count(), edges);
}

/// Proper 2-colouring (0/1 per vertex, vertex 0 coloured 0), if one exists.
inline std::optional<std::vector<int>> is_bipartite(const CubicGraph& g) {
  std::vector<int> colour(g.vertex_count(), -1);
  std::vector<Point> queue{0};
  colour[0] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Point v = queue[i];
    for (Point w : g.neighbors(v)) {
      if (colour[w] < 0) {
        colour[w] = 1 - colour[v];
        queue.push_back(w);
      } else if (colour[w] == colour[v]) {
        return std::nullopt;
      }
    }
  }
  return colour;
}

// ---------------------------------------------------------------------------
// Automorphisms and isomorphisms

namespace detail {

using Cells = std::vector<std::vector<Point>>;
using Trace = std::vector<std::uint32_t>;

// Refines to the coarsest equitable partition below `cells`. Within a cell,
// vertices are split by the sorted cells of their neighbours and fragments are
// ordered by that signature, so the result and its trace are invariant under
// isomorphism.
inline Trace refine(const CubicGraph& g, Cells& cells) {
  Trace trace;
  std::vector<std::uint32_t> cell_of(g.vertex_count());
  using Sig = std::array<std::uint32_t, 3>;
  std::vector<std::pair<Sig, Point>> buf;
  while (true) {
    for (std::uint32_t c = 0; c < cells.size(); ++c)
      for (Point v : cells[c]) cell_of[v] = c;
    Cells next;
    next.reserve(cells.size());
    for (std::uint32_t c = 0; c < cells.size(); ++c) {
      if (cells[c].size() == 1) {
        next.push_back(cells[c]);
        continue;
      }
      buf.clear();
      for (Point v : cells[c]) {
        const auto& nb = g.neighbors(v);
        Sig s{cell_of[nb[0]], cell_of[nb[1]], cell_of[nb[2]]};
        std::sort(s.begin(), s.end());
        buf.emplace_back(s, v);
      }
      std::sort(buf.begin(), buf.end());
      for (std::size_t i = 0; i < buf.size();) {
        std::size_t j = i;
        next.emplace_back();
        while (j < buf.size() && buf[j].first == buf[i].first) next.back().push_back(buf[j++].second);
        trace.insert(trace.end(), {c, buf[i].first[0], buf[i].first[1], buf[i].first[2],
                                   static_cast<std::uint32_t>(j - i)});
        i = j;
      }
    }
    bool stable = next.size() == cells.size();
    cells = std::move(next);
    if (stable) return trace;
  }
}

inline Cells individualize(const Cells& cells, std::size_t c, Point x) {
  Cells out;
  out.reserve(cells.size() + 1);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != c) {
      out.push_back(cells[i]);
      continue;
    }
    out.push_back({x});
    out.emplace_back();
    for (Point y : cells[i])
      if (y != x) out.back().push_back(y);
  }
  return out;
}

inline std::optional<std::size_t> target_cell(const Cells& cells) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].size() > 1 && (!best || cells[i].size() < cells[*best].size())) best = i;
  return best;
}

// Searches for an isomorphism a -> b compatible with the (already matched)
// ordered partitions left/right.
inline std::optional<Permutation> extend(const CubicGraph& a, const CubicGraph& b,
                                         const Cells& left, const Cells& right) {
  auto c = target_cell(left);
  if (!c) {
    std::vector<Point> images(a.vertex_count());
    for (std::size_t i = 0; i < left.size(); ++i) images[left[i][0]] = right[i][0];
    for (const auto& e : a.edges())
      if (!b.adjacent(images[e.lo], images[e.hi])) return std::nullopt;
    return Permutation(std::move(images));
  }
  Point x = left[*c][0];
  Cells l1 = individualize(left, *c, x);
  Trace tl = refine(a, l1);
  for (Point y : right[*c]) {
    Cells r1 = individualize(right, *c, y);
    if (refine(b, r1) != tl) continue;
    if (auto m = extend(a, b, l1, r1)) return m;
  }
  return std::nullopt;
}

inline Cells unit_cells(std::size_t n) {
  Cells cells(1);
  for (Point v = 0; v < n; ++v) cells[0].push_back(v);
  return cells;
}

}  // namespace detail

/// Some isomorphism a -> b (as a permutation of 0..n-1), if the graphs are isomorphic.
inline std::optional<Permutation> find_isomorphism(const CubicGraph& a, const CubicGraph& b) {
  if (a.vertex_count() != b.vertex_count()) return std::nullopt;
  auto left = detail::unit_cells(a.vertex_count());
  auto right = left;
  if (detail::refine(a, left) != detail::refine(b, right)) return std::nullopt;
  return detail::extend(a, b, left, right);
}

/// Full automorphism group by individualization-refinement.
///
/// Walks the leftmost branch of the search tree to get a base b_0..b_k. Then,
/// deepest level first, every vertex y in the target cell of level i that is
/// not yet in the orbit of b_i under the generators found so far is tested
/// for an automorphism fixing b_0..b_{i-1} and sending b_i to y. The
/// generators found at level i and below generate the pointwise stabilizer
/// of b_0..b_{i-1}.
inline PermGroup automorphism_group(const CubicGraph& g) {
  using namespace detail;
  const std::size_t n = g.vertex_count();
  std::vector<Cells> path{unit_cells(n)};
  refine(g, path[0]);
  std::vector<std::size_t> target;
  std::vector<Point> base;
  std::vector<Trace> traces;
  while (auto c = target_cell(path.back())) {
    target.push_back(*c);
    base.push_back(path.back()[*c][0]);
    Cells next = individualize(path.back(), *c, base.back());
    traces.push_back(refine(g, next));
    path.push_back(std::move(next));
  }

  std::vector<Permutation> gens;
  std::vector<bool> in_orbit(n);
  auto grow_orbit = [&](Point start) {
    std::fill(in_orbit.begin(), in_orbit.end(), false);
    std::vector<Point> queue{start};
    in_orbit[start] = true;
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (const auto& s : gens)
        if (Point y = s(queue[k]); !in_orbit[y]) {
          in_orbit[y] = true;
          queue.push_back(y);
        }
  };
  for (std::size_t i = base.size(); i-- > 0;) {
    grow_orbit(base[i]);
    for (Point y : path[i][target[i]]) {
      if (in_orbit[y]) continue;
      Cells right = individualize(path[i], target[i], y);
      if (refine(g, right) != traces[i]) continue;
      if (auto m = extend(g, g, path[i + 1], right)) {
        gens.push_back(std::move(*m));
        grow_orbit(base[i]);
      }
    }
  }
  return PermGroup(n, std::move(gens));
}

inline bool is_automorphism(const CubicGraph& g, const Permutation& p) {
  if (p.degree() != g.vertex_count()) return false;
  return std::all_of(g.edges().begin(), g.edges().end(),
                     [&](const Edge& e) { return g.adjacent(p(e.lo), p(e.hi)); });
}

inline bool is_edge_transitive(const CubicGraph& g, const PermGroup& aut) {
  return orbit(aut, g.edges().front()).size() == g.edge_count();
}

inline bool is_edge_transitive(const CubicGraph& g) {
  return is_edge_transitive(g, automorphism_group(g));
}

}  // namespace ets
