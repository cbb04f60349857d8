#include <gtest/gtest.h>

#include "ets/cdc.hpp"
#include "oracles.hpp"

using namespace ets;

namespace {

const char* kPrism = "E{Sw";

Permutation cyc(std::size_t n, std::vector<std::vector<Point>> cycles) {
  return Permutation::from_cycles(n, cycles);
}

CycleSet k4_triangles() {
  return {Cycle({0, 1, 2}), Cycle({0, 1, 3}), Cycle({0, 2, 3}), Cycle({1, 2, 3})};
}

// The six square faces of a cube graph.
CycleSet four_cycles(const CubicGraph& g) {
  CycleSet out;
  for (const auto& c : simple_cycles(g))
    if (c.size() == 4) out.push_back(c);
  return out;
}

// Vertex-faithful CDCs as subsets of the simple cycles, by trying all of them.
std::set<CycleSet> cdcs_by_subsets(const CubicGraph& g) {
  const auto cycles = simple_cycles(g);
  std::set<CycleSet> out;
  for (std::uint64_t mask = 1; mask < (1ULL << cycles.size()); ++mask) {
    CycleSet pick;
    std::size_t len = 0;
    for (std::size_t i = 0; i < cycles.size(); ++i)
      if (mask >> i & 1) {
        pick.push_back(cycles[i]);
        len += cycles[i].size();
      }
    if (len != 2 * g.edge_count()) continue;
    std::map<Edge, int> cover;
    for (const auto& c : pick)
      for (const auto& e : c.edges()) ++cover[e];
    if (cover.size() != g.edge_count()) continue;
    if (!std::all_of(cover.begin(), cover.end(), [](const auto& kv) { return kv.second == 2; })) continue;
    bool faithful = true;
    for (std::size_t i = 0; i < pick.size() && faithful; ++i)
      for (std::size_t j = i + 1; j < pick.size() && faithful; ++j) {
        auto a = pick[i].edges(), b = pick[j].edges();
        std::vector<Edge> common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        faithful = common.size() <= 1;
      }
    if (faithful) out.insert(pick);
  }
  return out;
}

}  // namespace

TEST(Cycle, CanonicalForm) {
  EXPECT_EQ(Cycle({2, 0, 1}).vertices(), (std::vector<Point>{0, 1, 2}));
  EXPECT_EQ(Cycle({3, 2, 1, 0}).vertices(), (std::vector<Point>{0, 1, 2, 3}));
  EXPECT_EQ(Cycle({1, 0, 3, 2}), Cycle({0, 1, 2, 3}));
  EXPECT_THROW(Cycle({0, 1}), InputError);
  EXPECT_THROW(Cycle({0, 1, 0}), InputError);
}

TEST(AlphaCycle, K4ThreeCycle) {
  auto g = parse_graph6("C~");
  auto c = alpha_cycle(g, cyc(4, {{0, 1, 2}}), {0, 1});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, Cycle({1, 2, 0}));
}

TEST(AlphaCycle, K4FourCycleFromLongerPath) {
  auto g = parse_graph6("C~");
  auto c = alpha_cycle(g, cyc(4, {{0, 2}, {1, 3}}), {0, 1, 2});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, Cycle({2, 3, 0, 1}));
}

TEST(AlphaCycle, LengthTwoIsEmpty) {
  auto g = parse_graph6("C~");
  EXPECT_FALSE(alpha_cycle(g, cyc(4, {{0, 1}, {2, 3}}), {0, 1}).has_value());
}

TEST(AlphaCycle, RepeatedVerticesAreEmpty) {
  auto g = parse_graph6("C~");
  // sigma = (0 1 2) fixes 3, so sweeping the segment 0,3 repeats 3.
  EXPECT_FALSE(alpha_cycle(g, cyc(4, {{0, 1, 2}}), {0, 3, 1}).has_value());
  // (0 1)(2 3) on 0,2 gives 1,3,0,2: distinct, a 4-cycle.
  EXPECT_EQ(alpha_cycle(g, cyc(4, {{0, 1}, {2, 3}}), {0, 2, 1}), Cycle({1, 3, 0, 2}));
}

TEST(AlphaCycle, Errors) {
  auto g = parse_graph6("C~");
  EXPECT_THROW(alpha_cycle(g, cyc(4, {{0, 1, 2}}), {0, 2}), InputError);   // sigma(F1) != Fn
  EXPECT_THROW(alpha_cycle(g, cyc(4, {{0, 1, 2}}), {0}), InputError);      // too short
  auto q3 = parse_graph6("Gr`HOk");
  Point u = 0, w = 0;
  for (Point x = 1; x < 8; ++x)
    if (!q3.adjacent(0, x)) w = x;
  EXPECT_THROW(alpha_cycle(q3, Permutation::identity(8), {u, w}), InputError);  // not a path
  EXPECT_THROW(alpha_cycle(q3, cyc(8, {{0, 1}}), {0, q3.neighbors(0)[0]}), InputError);  // not an automorphism
}

TEST(AlphaCycle, SweepIsSigmaInvariant) {
  for (const char* g6 : {"C~", "Gr`HOk", "IheA@GUAo"}) {
    auto g = parse_graph6(g6);
    auto elems = oracle::automorphisms(g);
    for (const auto& s : elems) {
      Permutation sigma(s);
      for (Point a = 0; a < g.vertex_count(); ++a)
        for (Point b : g.neighbors(a)) {
          std::vector<std::vector<Point>> paths{{a, b}};
          for (Point c : g.neighbors(b))
            if (c != a) paths.push_back({a, b, c});
          for (const auto& path : paths) {
            if (sigma(path.front()) != path.back()) continue;
            auto cycle = alpha_cycle(g, sigma, path);
            if (!cycle) continue;
            EXPECT_TRUE(cycle->lies_on(g));
            EXPECT_EQ(cycle->image(sigma), *cycle);
          }
        }
    }
  }
}

TEST(CycleOrbit, Examples) {
  auto g = parse_graph6("C~");
  auto aut = oracle::group_of(4, oracle::automorphisms(g));
  EXPECT_EQ(cycle_orbit(aut, Cycle({0, 1, 2})).size(), 4u);
  EXPECT_EQ(cycle_orbit(PermGroup::trivial(4), Cycle({0, 1, 2})), CycleSet{Cycle({0, 1, 2})});
  PermGroup rot(4, {cyc(4, {{0, 1, 2}})});
  EXPECT_EQ(cycle_orbit(rot, Cycle({0, 1, 2})), CycleSet{Cycle({0, 1, 2})});
}

TEST(IsCdc, Examples) {
  auto k4 = parse_graph6("C~");
  auto t = k4_triangles();
  EXPECT_TRUE(is_cdc(k4, t));
  EXPECT_TRUE(is_vertex_faithful(t));
  t.pop_back();
  EXPECT_FALSE(is_cdc(k4, t));
  auto q3 = parse_graph6("Gr`HOk");
  auto faces = four_cycles(q3);
  ASSERT_EQ(faces.size(), 6u);
  EXPECT_TRUE(is_cdc(q3, faces));
  EXPECT_TRUE(is_vertex_faithful(faces));
}

TEST(IsVertexFaithful, DoubledHexagon) {
  Cycle h({0, 1, 2, 3, 4, 5});
  EXPECT_FALSE(is_vertex_faithful({h, h}));
}

TEST(CycleDoubleCover, RejectsWithReason) {
  auto k4 = parse_graph6("C~");
  auto t = k4_triangles();
  t.pop_back();
  EXPECT_THROW(CycleDoubleCover(k4, t), SurfaceError);
}

TEST(CdcStabilizer, K4TrianglesFixedByAll) {
  auto g = parse_graph6("C~");
  auto aut = automorphism_group(g);
  EXPECT_EQ(cdc_stabilizer(aut, k4_triangles()).order(), 24u);
}

TEST(Oracle, K4HasOneCover) {
  auto g = parse_graph6("C~");
  EXPECT_EQ(simple_cycles(g).size(), 7u);
  auto all = enumerate_cdcs_bruteforce(g);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].cycles(), k4_triangles());
}

TEST(Oracle, CubeIncludesFaceCover) {
  auto g = parse_graph6("Gr`HOk");
  auto faces = four_cycles(g);
  std::sort(faces.begin(), faces.end());
  auto all = enumerate_cdcs_bruteforce(g);
  EXPECT_TRUE(std::any_of(all.begin(), all.end(), [&](const auto& c) { return c.cycles() == faces; }));
}

TEST(Oracle, RefusesAboveBound) {
  EXPECT_THROW(enumerate_cdcs_bruteforce(parse_graph6("Gr`HOk"), 6), CeilingError);
  EXPECT_THROW(enumerate_cdcs_bruteforce(oracle::corpus_graph("Dyck")), CeilingError);
}

TEST(Oracle, MatchesSubsetEnumeration) {
  for (const char* g6 : {"C~", "EFz_", kPrism}) {
    auto g = parse_graph6(g6);
    std::set<CycleSet> got;
    for (const auto& c : enumerate_cdcs_bruteforce(g)) got.insert(c.cycles());
    EXPECT_EQ(got, cdcs_by_subsets(g)) << g6;
  }
}

TEST(Oracle, OutputsAreFaithfulCoversThroughEveryVertexThrice) {
  for (const auto& [name, line] : oracle::corpus()) {
    auto g = parse_graph6(line);
    if (g.vertex_count() > kDefaultOracleBound) continue;
    for (const auto& c : enumerate_cdcs_bruteforce(g)) {
      EXPECT_TRUE(is_cdc(g, c.cycles())) << name;
      EXPECT_TRUE(is_vertex_faithful(c.cycles())) << name;
      std::vector<int> through(g.vertex_count(), 0);
      for (const auto& cy : c.cycles())
        for (Point v : cy.vertices()) ++through[v];
      EXPECT_TRUE(std::all_of(through.begin(), through.end(), [](int k) { return k == 3; })) << name;
    }
  }
}

TEST(CanonicalForm, RelabelledCoversAgree) {
  auto g = parse_graph6("C~");
  auto aut = automorphism_group(g);
  auto elems = aut.elements();
  auto base = canonical_form(elems, k4_triangles());
  for (const auto& p : elems) EXPECT_EQ(canonical_form(elems, image(k4_triangles(), p)), base);
}
