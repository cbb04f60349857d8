#pragma once

// Edge-transitive surfaces with a given face graph, built as orbits of
// automorphism-induced cycles under edge-transitive subgroups.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ets/cdc.hpp"
#include "ets/error.hpp"
#include "ets/graph.hpp"
#include "ets/perm.hpp"
#include "ets/surface.hpp"

namespace ets {

using FeKey = std::pair<std::uint64_t, std::uint64_t>;

inline const std::set<FeKey>& all_fe_types() {
  static const std::set<FeKey> types{{1, 2}, {1, 4}, {2, 1}, {2, 2}};
  return types;
}

struct CensusConfig {
  std::uint64_t max_aut_order = kDefaultMaxGroupOrder;
  std::size_t max_subgroups = 100000;
  std::size_t max_paths = 1000000;
  std::set<FeKey> types = all_fe_types();
};

struct ConstructionTask {
  const CubicGraph* graph = nullptr;
  std::shared_ptr<const PermGroup> aut;
  std::uint64_t t = 0;           // edge stabilizer order in H
  std::size_t path_length = 0;  // 2 or 3
};

/// How a record was found: H = <generators>, and the cover is
/// alpha(sigma, path)^H.
struct Witness {
  std::uint64_t t = 0;
  std::vector<Permutation> generators;
  std::vector<Point> path;
  Permutation sigma;
};

struct CensusRecord {
  std::string graph_id;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
  long euler = 0;
  bool orientable = false;
  FaceEdgeType fe;
  std::uint64_t aut_order = 0;
  CycleSet cdc;  // least image under Aut(graph)
  Witness witness;
};

/// Sort key: graph, face count, fe type, canonical CDC.
inline bool record_less(const CensusRecord& a, const CensusRecord& b) {
  auto key = [](const CensusRecord& r) {
    return std::tie(r.graph_id, r.faces, r.fe.face_orbits, r.fe.edge_stab_order);
  };
  if (key(a) != key(b)) return key(a) < key(b);
  if (a.fe.subtype != b.fe.subtype) return a.fe.subtype < b.fe.subtype;
  return a.cdc < b.cdc;
}

/// Conjugacy class representatives of edge-transitive H <= Aut(g) with
/// |H| = t|E|. H must be vertex-transitive for t = 4, may have one or two
/// vertex orbits for t = 2, and must have two for t = 1.
inline std::vector<SubgroupRep> candidate_subgroups(const CubicGraph& g,
                                                    const std::shared_ptr<const PermGroup>& aut,
                                                    std::uint64_t t,
                                                    const CensusConfig& config = {}) {
  if (t != 1 && t != 2 && t != 4) throw InputError("candidate_subgroups: t must be 1, 2 or 4");
  if (aut->order() > config.max_aut_order)
    throw CeilingError("|Aut| = " + std::to_string(aut->order()) + " exceeds --max-aut-order " +
                       std::to_string(config.max_aut_order));
  const std::uint64_t k = t * g.edge_count();
  if (aut->order() % k != 0) return {};
  auto reps = subgroups_of_order(aut, k, config.max_aut_order);
  if (reps.size() > config.max_subgroups)
    throw CeilingError(std::to_string(reps.size()) + " subgroups of order " + std::to_string(k) +
                       " exceed the subgroup ceiling");
  const auto& edges = g.edges();
  std::vector<SubgroupRep> out;
  for (auto& h : reps) {
    if (orbit(h.group, edges.front()).size() != edges.size()) continue;
    const std::size_t vorbits = orbits(h.group).size();
    const bool ok = t == 4 ? vorbits == 1 : t == 2 ? vorbits <= 2 : vorbits == 2;
    if (ok) out.push_back(std::move(h));
  }
  return out;
}

struct Found {
  CycleSet cdc;
  SimplicialSurface surface;
  Classification classification;
  Witness witness;
};

namespace detail {

inline std::vector<std::vector<Point>> paths_of_length(const CubicGraph& g, std::size_t n) {
  std::vector<std::vector<Point>> out;
  for (Point a = 0; a < g.vertex_count(); ++a)
    for (Point b : g.neighbors(a)) {
      if (n == 2) {
        out.push_back({a, b});
        continue;
      }
      for (Point c : g.neighbors(b))
        if (c != a) out.push_back({a, b, c});
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// All edge-transitive surfaces alpha(sigma, path)^H over path orbit
/// representatives and sigma in H with sigma(F1) = Fn; distinct covers only.
inline std::vector<Found> search_surfaces(const ConstructionTask& task, const SubgroupRep& h,
                                          const CensusConfig& config = {}) {
  const CubicGraph& g = *task.graph;
  if (task.path_length != 2 && task.path_length != 3)
    throw InputError("search_surfaces: path length must be 2 or 3");
  const auto elements = h.group.elements(config.max_aut_order);
  auto paths = detail::paths_of_length(g, task.path_length);
  if (paths.size() > config.max_paths)
    throw CeilingError(std::to_string(paths.size()) + " paths exceed the path ceiling");

  // Elements bucketed by the image of each point: sigma(F1) = Fn is a
  // transversal element composed with the stabilizer of F1.
  std::vector<std::map<Point, std::vector<std::size_t>>> by_image(g.vertex_count());
  auto bucket = [&](Point x) -> const std::map<Point, std::vector<std::size_t>>& {
    auto& m = by_image[x];
    if (m.empty())
      for (std::size_t i = 0; i < elements.size(); ++i) m[elements[i](x)].push_back(i);
    return m;
  };

  std::set<std::vector<Point>> covered;
  std::set<CycleSet> seen;
  std::vector<Found> out;
  for (const auto& path : paths) {
    if (covered.contains(path)) continue;
    for (const auto& x : elements) {
      std::vector<Point> img;
      for (Point v : path) img.push_back(x(v));
      covered.insert(std::move(img));
    }
    const auto& m = bucket(path.front());
    auto it = m.find(path.back());
    if (it == m.end()) continue;
    for (std::size_t i : it->second) {
      const Permutation& sigma = elements[i];
      auto cycle = alpha_cycle(g, sigma, path);
      if (!cycle) continue;
      CycleSet cover = cycle_orbit(h.group, *cycle);
      if (seen.contains(cover)) continue;
      seen.insert(cover);
      if (!is_cdc(g, cover) || !is_vertex_faithful(cover)) continue;
      SimplicialSurface s = surface_from_cdc(g, cover);
      PermGroup aut_x = automorphism_group_surface(s, *task.aut, config.max_aut_order);
      const auto& gens = h.group.generators();
      if (!std::all_of(gens.begin(), gens.end(), [&](const Permutation& p) { return aut_x.contains(p); }))
        throw VerificationError("subgroup does not preserve its own alpha-cycle orbit");
      Classification c = classify(s, aut_x, config.max_aut_order);
      if (!c.edge_transitive) continue;
      out.push_back(Found{std::move(cover), std::move(s), std::move(c),
                          Witness{task.t, gens, path, sigma}});
    }
  }
  return out;
}

namespace detail {

inline Witness conjugate_witness(const Witness& w, const Permutation& a) {
  Witness out{w.t, {}, {}, conjugate(a, w.sigma)};
  for (const auto& p : w.generators) out.generators.push_back(conjugate(a, p));
  for (Point v : w.path) out.path.push_back(a(v));
  return out;
}

}  // namespace detail

/// One record per Aut(g)-orbit of covers, each moved to the least image of
/// its cover; canonically sorted.
inline std::vector<CensusRecord> dedup(std::vector<CensusRecord> records, const CubicGraph& g,
                                       const PermGroup& aut,
                                       std::uint64_t limit = kDefaultMaxGroupOrder) {
  (void)g;
  if (records.empty()) return records;
  const auto elements = aut.elements(limit);
  std::map<CycleSet, CensusRecord> by_key;
  for (auto& r : records) {
    std::size_t best = 0;
    CycleSet best_img;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      CycleSet img = image(r.cdc, elements[i]);
      if (i == 0 || img < best_img) {
        best_img = std::move(img);
        best = i;
      }
    }
    if (by_key.contains(best_img)) continue;
    r.witness = detail::conjugate_witness(r.witness, elements[best]);
    r.cdc = best_img;
    by_key.emplace(std::move(best_img), std::move(r));
  }
  std::vector<CensusRecord> out;
  for (auto& [k, r] : by_key) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(), record_less);
  return out;
}

/// Every edge-transitive surface with face graph g, up to isomorphism.
/// Throws InputError if g is not edge-transitive.
inline std::vector<CensusRecord> census_graph(const CubicGraph& g, const std::string& graph_id,
                                              const CensusConfig& config = {}) {
  auto aut = std::make_shared<const PermGroup>(automorphism_group(g));
  if (aut->order() > config.max_aut_order)
    throw CeilingError("|Aut| = " + std::to_string(aut->order()) + " exceeds --max-aut-order " +
                       std::to_string(config.max_aut_order));
  if (!is_edge_transitive(g, *aut))
    throw InputError("graph " + graph_id + " is not edge-transitive, so it is not the face graph of an edge-transitive surface");

  std::vector<CensusRecord> records;
  // Largest t first: the first witness of a cover then has |H| = |Aut(X)|.
  for (std::uint64_t t : {4u, 2u, 1u}) {
    for (const auto& h : candidate_subgroups(g, aut, t, config)) {
      for (std::size_t n : {2u, 3u}) {
        ConstructionTask task{&g, aut, t, n};
        for (auto& f : search_surfaces(task, h, config)) {
          const auto& fe = *f.classification.fe;
          if (!config.types.contains({fe.face_orbits, fe.edge_stab_order})) continue;
          auto bad = invariant_violations(f.surface, f.classification, *aut);
          if (!bad.empty())
            throw VerificationError("graph " + graph_id + ": " + bad.front());
          CensusRecord r;
          r.graph_id = graph_id;
          r.vertices = f.surface.vertex_count();
          r.edges = f.surface.edge_count();
          r.faces = f.surface.face_count();
          r.euler = euler_characteristic(f.surface);
          r.orientable = is_orientable(f.surface);
          r.fe = fe;
          r.aut_order = f.classification.aut_order;
          r.cdc = std::move(f.cdc);
          r.witness = std::move(f.witness);
          records.push_back(std::move(r));
        }
      }
    }
  }
  return dedup(std::move(records), g, *aut, config.max_aut_order);
}

}  // namespace ets
