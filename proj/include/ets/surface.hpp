#pragma once

// Simplicial surfaces seen through their face graphs.
//
// A surface is held as its face graph F(X) (faces are graph vertices, two
// faces adjacent when they share an edge) together with the vertex-faithful
// cycle double cover formed by its umbrellas. Surface vertex v is the cycle
// umbrella(v); surface edges are the graph edges. Automorphisms of X act on
// the faces, i.e. as the subgroup of Aut(F(X)) that preserves the cover.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ets/cdc.hpp"
#include "ets/error.hpp"
#include "ets/graph.hpp"
#include "ets/perm.hpp"

namespace ets {

class SimplicialSurface {
 public:
  SimplicialSurface() = default;

  /// Vertex v of the surface is umbrellas[v]; `labels[v]` is its external name.
  SimplicialSurface(CubicGraph face_graph, std::vector<Cycle> umbrellas, std::vector<long> labels,
                    bool constructed)
      : graph_(std::move(face_graph)),
        cdc_(graph_, umbrellas),
        umbrellas_(std::move(umbrellas)),
        labels_(std::move(labels)),
        constructed_(constructed) {
    std::vector<std::vector<Point>> through(graph_.vertex_count());
    for (Point v = 0; v < umbrellas_.size(); ++v)
      for (Point f : umbrellas_[v].vertices()) through[f].push_back(v);
    face_vertices_.resize(graph_.vertex_count());
    for (Point f = 0; f < graph_.vertex_count(); ++f) {
      if (through[f].size() != 3)
        throw SurfaceError("face " + std::to_string(f) + " lies on " +
                           std::to_string(through[f].size()) + " umbrellas, expected 3");
      std::copy(through[f].begin(), through[f].end(), face_vertices_[f].begin());
    }
    edge_vertices_.resize(graph_.edge_count());
    for (std::size_t e = 0; e < graph_.edge_count(); ++e) {
      const Edge& fe = graph_.edges()[e];
      std::vector<Point> common;
      std::set_intersection(through[fe.lo].begin(), through[fe.lo].end(), through[fe.hi].begin(),
                            through[fe.hi].end(), std::back_inserter(common));
      if (common.size() != 2) throw SurfaceError("adjacent faces do not share exactly one edge");
      edge_vertices_[e] = {common[0], common[1]};
    }
  }

  std::size_t vertex_count() const { return umbrellas_.size(); }
  std::size_t edge_count() const { return graph_.edge_count(); }
  std::size_t face_count() const { return graph_.vertex_count(); }

  const CubicGraph& face_graph() const { return graph_; }
  const CycleDoubleCover& cdc() const { return cdc_; }
  bool constructed() const { return constructed_; }

  /// Faces around v in cyclic order.
  const Cycle& umbrella(Point v) const { return umbrellas_.at(v); }
  const std::vector<Cycle>& umbrellas() const { return umbrellas_; }
  long label(Point v) const { return labels_.at(v); }

  const std::array<Point, 3>& face_vertices(Point f) const { return face_vertices_.at(f); }
  const std::array<Point, 2>& edge_vertices(std::size_t e) const { return edge_vertices_.at(e); }
  /// The two faces of edge e.
  std::array<Point, 2> edge_faces(std::size_t e) const {
    const Edge& fe = graph_.edges().at(e);
    return {fe.lo, fe.hi};
  }
  std::array<std::size_t, 3> face_edges(Point f) const {
    std::array<std::size_t, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = graph_.edge_index(Edge(f, graph_.neighbors(f)[i]));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Faces as sorted label triples, in face order.
  std::vector<std::array<long, 3>> labelled_faces() const {
    std::vector<std::array<long, 3>> out;
    for (const auto& fv : face_vertices_) {
      std::array<long, 3> t{labels_[fv[0]], labels_[fv[1]], labels_[fv[2]]};
      std::sort(t.begin(), t.end());
      out.push_back(t);
    }
    return out;
  }

 private:
  CubicGraph graph_;
  CycleDoubleCover cdc_;
  std::vector<Cycle> umbrellas_;
  std::vector<long> labels_;
  std::vector<std::array<Point, 3>> face_vertices_;
  std::vector<std::array<Point, 2>> edge_vertices_;
  bool constructed_ = false;
};

/// Throws SurfaceError unless cycles form a vertex-faithful CDC of g.
inline SimplicialSurface surface_from_cdc(const CubicGraph& g, const CycleSet& cycles) {
  CycleDoubleCover cdc(g, cycles);
  std::vector<long> labels(cdc.size());
  std::iota(labels.begin(), labels.end(), 0L);
  return SimplicialSurface(g, cdc.cycles(), std::move(labels), true);
}

/// Builds a surface from face triples over arbitrary integer vertex labels.
/// Vertices are numbered by increasing label; faces keep their input order.
inline SimplicialSurface load_surface(const std::vector<std::array<long, 3>>& faces) {
  if (faces.empty()) throw SurfaceError("surface has no faces");
  std::set<long> label_set;
  for (const auto& f : faces) label_set.insert(f.begin(), f.end());
  std::vector<long> labels(label_set.begin(), label_set.end());
  auto id = [&](long x) {
    return static_cast<Point>(std::lower_bound(labels.begin(), labels.end(), x) - labels.begin());
  };

  std::vector<std::array<Point, 3>> tri;
  std::set<std::array<Point, 3>> seen_faces;
  for (const auto& f : faces) {
    std::array<Point, 3> t{id(f[0]), id(f[1]), id(f[2])};
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2])
      throw SurfaceError("face {" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
                         std::to_string(f[2]) + "} repeats a vertex");
    if (!seen_faces.insert(t).second)
      throw SurfaceError("face {" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
                         std::to_string(f[2]) + "} appears twice");
    tri.push_back(t);
  }

  std::map<std::pair<Point, Point>, std::vector<Point>> edge_faces;
  for (Point f = 0; f < tri.size(); ++f) {
    const auto& t = tri[f];
    for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[0], t[2]}, std::pair{t[1], t[2]}})
      edge_faces[{a, b}].push_back(f);
  }
  std::vector<Edge> graph_edges;
  for (const auto& [e, fs] : edge_faces) {
    if (fs.size() != 2)
      throw SurfaceError("edge {" + std::to_string(labels[e.first]) + "," +
                         std::to_string(labels[e.second]) + "} lies in " +
                         std::to_string(fs.size()) + " faces, expected 2");
    graph_edges.emplace_back(fs[0], fs[1]);
  }

  // Umbrellas: walk around each vertex through faces sharing an edge at it.
  std::vector<std::vector<Point>> faces_at(labels.size());
  for (Point f = 0; f < tri.size(); ++f)
    for (Point v : tri[f]) faces_at[v].push_back(f);
  std::vector<Cycle> umbrellas;
  for (Point v = 0; v < labels.size(); ++v) {
    std::vector<Point> seq{faces_at[v].front()};
    Point prev = faces_at[v].front();
    Point cur = faces_at[v].front();
    // Leave the first face through the edge {v, x} for its smaller other vertex x.
    auto other_vertices = [&](Point f) {
      std::vector<Point> o;
      for (Point x : tri[f])
        if (x != v) o.push_back(x);
      return o;
    };
    Point x = other_vertices(cur)[0];
    while (true) {
      const auto& fs = edge_faces.at({std::min(v, x), std::max(v, x)});
      Point next = fs[0] == cur ? fs[1] : fs[0];
      if (next == seq.front()) break;
      seq.push_back(next);
      auto o = other_vertices(next);
      x = o[0] == x ? o[1] : o[0];
      prev = cur;
      cur = next;
    }
    (void)prev;
    if (seq.size() != faces_at[v].size())
      throw SurfaceError("faces around vertex " + std::to_string(labels[v]) +
                         " do not form a single umbrella (" + std::to_string(seq.size()) +
                         " of " + std::to_string(faces_at[v].size()) + " faces reached)");
    umbrellas.emplace_back(std::move(seq));
  }
  std::optional<CubicGraph> graph;
  try {
    graph = CubicGraph::from_edges(tri.size(), graph_edges);
  } catch (const Disconnected&) {
    throw SurfaceError("surface is not connected");
  }
  return SimplicialSurface(std::move(*graph), std::move(umbrellas), std::move(labels), false);
}

inline const CubicGraph& face_graph(const SimplicialSurface& s) { return s.face_graph(); }

inline long euler_characteristic(const SimplicialSurface& s) {
  return static_cast<long>(s.vertex_count()) - static_cast<long>(s.edge_count()) +
         static_cast<long>(s.face_count());
}

/// First edge (as a surface vertex pair) at which consistent face orientations
/// fail to propagate, or nullopt if the surface is orientable.
inline std::optional<std::array<Point, 2>> orientation_conflict(const SimplicialSurface& s) {
  const CubicGraph& g = s.face_graph();
  std::vector<std::optional<std::array<Point, 3>>> orient(s.face_count());
  auto runs = [](const std::array<Point, 3>& o, Point a, Point b) {
    for (int i = 0; i < 3; ++i)
      if (o[i] == a && o[(i + 1) % 3] == b) return true;
    return false;
  };
  orient[0] = s.face_vertices(0);
  std::vector<Point> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Point f = queue[i];
    const auto& of = *orient[f];
    for (Point h : g.neighbors(f)) {
      const auto& ev = s.edge_vertices(g.edge_index(Edge(f, h)));
      Point a = ev[0];
      Point b = ev[1];
      if (!runs(of, a, b)) std::swap(a, b);
      // f runs a -> b, so h must run b -> a.
      if (orient[h]) {
        if (!runs(*orient[h], b, a)) return ev;
        continue;
      }
      Point third = 0;
      for (Point x : s.face_vertices(h))
        if (x != a && x != b) third = x;
      orient[h] = std::array<Point, 3>{b, a, third};
      queue.push_back(h);
    }
  }
  return std::nullopt;
}

inline bool is_orientable(const SimplicialSurface& s) { return !orientation_conflict(s); }

/// Faces coloured 0/1 so that faces sharing an edge differ, if possible.
inline std::optional<std::vector<int>> face_2_coloring(const SimplicialSurface& s) {
  return is_bipartite(s.face_graph());
}

/// Aut(X) as a permutation group on the faces: the stabilizer of the
/// umbrella cover inside Aut(F(X)).
inline PermGroup automorphism_group_surface(const SimplicialSurface& s, const PermGroup& face_graph_aut,
                                            std::uint64_t limit = kDefaultMaxGroupOrder) {
  return cdc_stabilizer(face_graph_aut, s.cdc().cycles(), limit);
}

inline PermGroup automorphism_group_surface(const SimplicialSurface& s,
                                            std::uint64_t limit = kDefaultMaxGroupOrder) {
  return automorphism_group_surface(s, automorphism_group(s.face_graph()), limit);
}

// ---------------------------------------------------------------------------
// Classification

struct FaceEdgeType {
  std::uint64_t face_orbits = 0;
  std::uint64_t edge_stab_order = 0;
  std::optional<int> subtype;  // only for (1,2)

  friend bool operator==(const FaceEdgeType&, const FaceEdgeType&) = default;

  std::string str() const {
    std::string s = "(" + std::to_string(face_orbits) + "," + std::to_string(edge_stab_order) + ")";
    if (subtype) s += "." + std::to_string(*subtype);
    return s;
  }
};

struct VertexFaceType {
  std::uint64_t vertex_orbits = 0;
  std::uint64_t face_stab_order = 0;

  friend bool operator==(const VertexFaceType&, const VertexFaceType&) = default;
};

/// Orbit and stabilizer data of a surface under its automorphism group.
struct Classification {
  std::uint64_t aut_order = 0;
  std::size_t vertex_orbits = 0;
  std::size_t edge_orbits = 0;
  std::size_t face_orbits = 0;
  std::uint64_t edge_stab_order = 0;
  std::uint64_t face_stab_order = 0;
  bool edge_stab_elementary = false;  // abelian of exponent at most 2
  bool edge_transitive = false;
  std::optional<FaceEdgeType> fe;
  VertexFaceType vf;
};

namespace detail {

inline std::size_t count_orbits(const std::vector<Cycle>& items, const PermGroup& g) {
  std::map<Cycle, std::size_t> idx;
  for (std::size_t i = 0; i < items.size(); ++i) idx.emplace(items[i], i);
  std::vector<bool> seen(items.size(), false);
  std::size_t count = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (seen[i]) continue;
    ++count;
    for (const auto& c : cycle_orbit(g, items[i])) seen[idx.at(c)] = true;
  }
  return count;
}

/// 1 if some sigma in Aut(X) sweeps a single adjacent pair of the umbrella
/// into the whole umbrella, otherwise 2 (after checking that a sweep of two
/// consecutive steps works).
inline int subtype_12(const SimplicialSurface& s, const PermGroup& aut, std::uint64_t limit) {
  const CubicGraph& g = s.face_graph();
  const Cycle& u = s.umbrella(0);
  const auto& fs = u.vertices();
  const auto elements = aut.elements(limit);
  const std::size_t n = fs.size();
  auto matches = [&](const std::vector<Point>& path) {
    for (const auto& sigma : elements) {
      if (sigma(path.front()) != path.back()) continue;
      auto c = alpha_cycle(g, sigma, path);
      if (c && *c == u) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    Point a = fs[i];
    Point b = fs[(i + 1) % n];
    if (matches({a, b}) || matches({b, a})) return 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Point a = fs[i];
    Point b = fs[(i + 1) % n];
    Point c = fs[(i + 2) % n];
    if (matches({a, b, c}) || matches({c, b, a})) return 2;
  }
  throw VerificationError("fe (1,2) surface whose umbrella is not an automorphism-induced cycle");
}

}  // namespace detail

inline Classification classify(const SimplicialSurface& s, const PermGroup& aut_x,
                               std::uint64_t limit = kDefaultMaxGroupOrder) {
  const CubicGraph& g = s.face_graph();
  Classification c;
  c.aut_order = aut_x.order();
  c.vertex_orbits = detail::count_orbits(s.umbrellas(), aut_x);
  c.face_orbits = orbits(aut_x).size();
  {
    std::set<Edge> seen;
    for (const auto& e : g.edges())
      if (!seen.contains(e)) {
        ++c.edge_orbits;
        for (const auto& x : orbit(aut_x, e)) seen.insert(x);
      }
  }
  PermGroup edge_stab = stabilizer(aut_x, g.edges().front(), limit);
  c.edge_stab_order = edge_stab.order();
  {
    auto elems = edge_stab.elements(limit);
    c.edge_stab_elementary = std::all_of(elems.begin(), elems.end(), [&](const Permutation& x) {
      if (!compose(x, x).is_identity()) return false;
      return std::all_of(elems.begin(), elems.end(), [&](const Permutation& y) {
        return compose(x, y) == compose(y, x);
      });
    });
  }
  c.face_stab_order = c.aut_order / orbit(aut_x, Point{0}).size();
  c.edge_transitive = c.edge_orbits == 1;
  c.vf = VertexFaceType{c.vertex_orbits, c.face_stab_order};
  if (c.edge_transitive) {
    FaceEdgeType fe{c.face_orbits, c.edge_stab_order, std::nullopt};
    if (fe.face_orbits == 1 && fe.edge_stab_order == 2) fe.subtype = detail::subtype_12(s, aut_x, limit);
    c.fe = fe;
  }
  return c;
}

inline Classification classify(const SimplicialSurface& s,
                               std::uint64_t limit = kDefaultMaxGroupOrder) {
  return classify(s, automorphism_group_surface(s, limit), limit);
}

inline bool is_edge_transitive_surface(const SimplicialSurface& s) {
  PermGroup aut = automorphism_group_surface(s);
  return orbit(aut, s.face_graph().edges().front()).size() == s.edge_count();
}

/// Throws InputError if the surface is not edge-transitive.
inline FaceEdgeType face_edge_type(const SimplicialSurface& s) {
  auto c = classify(s);
  if (!c.fe) throw InputError("face-edge type requested for a surface that is not edge-transitive");
  return *c.fe;
}

inline VertexFaceType vertex_face_type(const SimplicialSurface& s) { return classify(s).vf; }

/// Every structural property an (edge-transitive) surface must have; returns
/// a description of each violation, empty when all hold.
inline std::vector<std::string> invariant_violations(const SimplicialSurface& s,
                                                     const Classification& c,
                                                     const PermGroup& face_graph_aut) {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  const CubicGraph& g = s.face_graph();
  expect(2 * s.edge_count() == 3 * s.face_count(), "|X1| != 3/2 |X2|");
  expect(is_cdc(g, s.cdc().cycles()) && is_vertex_faithful(s.cdc().cycles()),
         "umbrellas are not a vertex-faithful cycle double cover of the face graph");
  if (is_orientable(s))
    expect(euler_characteristic(s) % 2 == 0, "orientable surface with odd Euler characteristic");

  const bool vf16 = c.vertex_orbits == 1 && c.face_orbits == 1 && c.face_stab_order == 6;
  const bool vf13 = c.vertex_orbits == 1 && c.face_orbits == 1 && c.face_stab_order == 3;
  if (vf16) expect(c.fe && c.fe->face_orbits == 1 && c.fe->edge_stab_order == 4,
                   "face-transitive with vf (1,6) but fe is not (1,4)");
  if (vf13) expect(c.fe && c.fe->face_orbits == 1 && c.fe->edge_stab_order == 2,
                   "face-transitive with vf (1,3) but fe is not (1,2)");
  if (!c.edge_transitive) return bad;

  const auto& fe = *c.fe;
  const std::pair<std::uint64_t, std::uint64_t> t{fe.face_orbits, fe.edge_stab_order};
  expect(t == std::pair<std::uint64_t, std::uint64_t>{1, 2} || t == std::pair<std::uint64_t, std::uint64_t>{1, 4} ||
             t == std::pair<std::uint64_t, std::uint64_t>{2, 1} || t == std::pair<std::uint64_t, std::uint64_t>{2, 2},
         "fe " + fe.str() + " is not one of (1,2), (1,4), (2,1), (2,2)");
  expect(c.face_orbits <= 2, "more than two face orbits");
  expect(c.vertex_orbits == 1, "more than one vertex orbit");
  expect(c.edge_stab_elementary &&
             (c.edge_stab_order == 1 || c.edge_stab_order == 2 || c.edge_stab_order == 4),
         "edge stabilizer does not embed in C2 x C2");
  expect(c.aut_order == c.edge_stab_order * s.edge_count(), "|Aut(X)| != |edge stabilizer| * |X1|");
  if (t == std::pair<std::uint64_t, std::uint64_t>{1, 4}) expect(vf16, "fe (1,4) but vf is not (1,6)");
  if (t == std::pair<std::uint64_t, std::uint64_t>{1, 2}) expect(vf13, "fe (1,2) but vf is not (1,3)");
  expect(is_edge_transitive(g, face_graph_aut), "face graph of an edge-transitive surface is not edge-transitive");
  if (fe.face_orbits == 2) {
    auto colouring = face_2_coloring(s);
    expect(colouring.has_value(), "two face orbits but no face 2-colouring");
  }
  return bad;
}

/// True iff an incidence-preserving bijection exists.
inline bool surfaces_isomorphic(const SimplicialSurface& a, const SimplicialSurface& b,
                                std::uint64_t limit = kDefaultMaxGroupOrder) {
  if (a.vertex_count() != b.vertex_count() || a.face_count() != b.face_count()) return false;
  auto phi = find_isomorphism(a.face_graph(), b.face_graph());
  if (!phi) return false;
  CycleSet mapped = image(a.cdc().cycles(), *phi);
  const CycleSet& target = b.cdc().cycles();
  bool found = false;
  automorphism_group(b.face_graph()).for_each_element([&](const Permutation& x) {
    found = image(mapped, x) == target;
    return !found;
  });
  (void)limit;
  return found;
}

}  // namespace ets
