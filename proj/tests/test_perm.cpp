#include <gtest/gtest.h>

#include <random>

#include "ets/perm.hpp"
#include "oracles.hpp"

using namespace ets;

namespace {

Permutation cyc(std::size_t n, std::vector<std::vector<Point>> cycles) {
  return Permutation::from_cycles(n, cycles);
}

std::vector<oracle::Images> all_perms(std::size_t n) {
  oracle::Images p(n);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<oracle::Images> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

PermGroup k4_group() { return oracle::group_of(4, oracle::automorphisms(parse_graph6("C~"))); }

}  // namespace

TEST(Permutation, RejectsNonBijection) {
  EXPECT_THROW(Permutation({0, 0, 1}), InputError);
  EXPECT_THROW(Permutation({0, 3, 1}), InputError);
}

TEST(Compose, IdentityLeft) {
  EXPECT_EQ(compose(Permutation::identity(2), cyc(2, {{0, 1}})), cyc(2, {{0, 1}}));
}

TEST(Compose, ThreeCycleSquared) {
  EXPECT_EQ(compose(cyc(3, {{0, 1, 2}}), cyc(3, {{0, 1, 2}})), cyc(3, {{0, 2, 1}}));
}

// compose(p, q) applies q first. The values 1->0, 2->1, 0->2 belong to the
// left-to-right product, i.e. compose(q, p).
TEST(Compose, TranspositionsByHand) {
  const Permutation p = cyc(3, {{0, 1}});
  const Permutation q = cyc(3, {{1, 2}});
  Permutation r = compose(p, q);
  EXPECT_EQ(r(0), 1u);
  EXPECT_EQ(r(1), 2u);
  EXPECT_EQ(r(2), 0u);
  Permutation l = compose(q, p);
  EXPECT_EQ(l(1), 0u);
  EXPECT_EQ(l(2), 1u);
  EXPECT_EQ(l(0), 2u);
}

TEST(Compose, MatchesPointwiseOverS3) {
  for (const auto& p : all_perms(3))
    for (const auto& q : all_perms(3)) {
      Permutation r = compose(Permutation(p), Permutation(q));
      for (Point x = 0; x < 3; ++x) EXPECT_EQ(r(x), p[q[x]]);
    }
}

TEST(Compose, DegreeMismatchThrows) {
  EXPECT_THROW(compose(Permutation::identity(2), Permutation::identity(3)), InputError);
}

TEST(Permutation, InverseAndOrder) {
  for (const auto& p : all_perms(5)) {
    Permutation x(p);
    EXPECT_TRUE(compose(x, x.inverse()).is_identity());
    std::uint64_t k = 1;
    Permutation y = x;
    while (!y.is_identity()) {
      y = compose(x, y);
      ++k;
    }
    EXPECT_EQ(x.order(), k);
  }
}

TEST(Orbit, CyclicTransitive) {
  PermGroup g(4, {cyc(4, {{0, 1, 2, 3}})});
  EXPECT_EQ(orbit(g, Point{0}), (std::vector<Point>{0, 1, 2, 3}));
}

TEST(Orbit, TrivialGroup) {
  EXPECT_EQ(orbit(PermGroup::trivial(6), Point{5}), (std::vector<Point>{5}));
}

TEST(Orbit, K4EdgeOrbitMatchesBruteForce) {
  auto elems = oracle::automorphisms(parse_graph6("C~"));
  std::set<Edge> expected;
  for (const auto& p : elems) expected.insert(Edge(p[0], p[1]));
  auto got = orbit(k4_group(), Edge(0, 1));
  EXPECT_EQ(std::set<Edge>(got.begin(), got.end()), expected);
  EXPECT_EQ(got.size(), 6u);
}

TEST(Order, Basics) {
  EXPECT_EQ(PermGroup::trivial(3).order(), 1u);
  EXPECT_EQ(PermGroup(5, {cyc(5, {{0, 1, 2, 3, 4}})}).order(), 5u);
  EXPECT_EQ(k4_group().order(), 24u);
}

// Chain order and membership against breadth-first closure.
TEST(SchreierSims, MatchesNaiveClosureOnRandomGroups) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 3 + rng() % 7;
    const std::size_t k = 1 + rng() % 3;
    std::vector<Permutation> gens;
    std::vector<oracle::Images> raw;
    for (std::size_t i = 0; i < k; ++i) {
      oracle::Images p(n);
      std::iota(p.begin(), p.end(), 0u);
      // Sparse permutations keep most groups small.
      for (int s = 0; s < 2; ++s) std::swap(p[rng() % n], p[rng() % n]);
      raw.push_back(p);
      gens.emplace_back(p);
    }
    PermGroup g(n, gens);
    if (g.order() > 5000) continue;
    auto elems = oracle::closure(n, raw);
    ASSERT_EQ(g.order(), elems.size());
    std::set<oracle::Images> inside(elems.begin(), elems.end());
    for (const auto& p : all_perms(std::min<std::size_t>(n, 6)))
      if (n <= 6) EXPECT_EQ(g.contains(Permutation(p)), inside.contains(p));
    std::set<oracle::Images> listed;
    for (const auto& x : g.elements()) listed.insert(oracle::images(x));
    EXPECT_EQ(listed, inside);
  }
}

TEST(SchreierSims, GeneratorsAreMembers) {
  PermGroup g(6, {cyc(6, {{0, 1, 2, 3, 4, 5}}), cyc(6, {{0, 1}})});
  EXPECT_EQ(g.order(), 720u);
  for (const auto& s : g.generators()) EXPECT_TRUE(g.contains(s));
  std::uint64_t product = 1;
  for (const auto& level : g.chain()) product *= level.orbit.size();
  EXPECT_EQ(product, g.order());
}

TEST(Stabilizer, K4EdgeHasOrderFour) {
  auto elems = oracle::automorphisms(parse_graph6("C~"));
  std::size_t expected = std::count_if(elems.begin(), elems.end(), [](const auto& p) {
    return Edge(p[0], p[1]) == Edge(0, 1);
  });
  EXPECT_EQ(expected, 4u);
  EXPECT_EQ(stabilizer(k4_group(), Edge(0, 1)).order(), expected);
}

TEST(Stabilizer, CyclicPointIsTrivial) {
  EXPECT_EQ(stabilizer(PermGroup(3, {cyc(3, {{0, 1, 2}})}), Point{0}).order(), 1u);
}

TEST(Stabilizer, OrbitStabilizerOnRandomGroups) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng() % 5;
    std::vector<oracle::Images> raw;
    for (int i = 0; i < 2; ++i) {
      oracle::Images p(n);
      std::iota(p.begin(), p.end(), 0u);
      std::shuffle(p.begin(), p.end(), rng);
      raw.push_back(p);
    }
    auto elems = oracle::closure(n, raw);
    PermGroup g = oracle::group_of(n, raw);
    for (Point x = 0; x < n; ++x) {
      auto st = stabilizer(g, x);
      std::size_t naive = std::count_if(elems.begin(), elems.end(), [&](const auto& p) { return p[x] == x; });
      EXPECT_EQ(st.order(), naive);
      EXPECT_EQ(orbit(g, x).size() * st.order(), g.order());
    }
    Edge e(0, 1);
    auto st = stabilizer(g, e);
    std::size_t naive = std::count_if(elems.begin(), elems.end(), [&](const auto& p) { return Edge(p[0], p[1]) == e; });
    EXPECT_EQ(st.order(), naive);
    EXPECT_EQ(orbit(g, e).size() * st.order(), g.order());
  }
}

TEST(IsTransitive, Examples) {
  auto g = k4_group();
  EXPECT_TRUE(is_transitive(g, orbit(g, Edge(0, 1))));
  EXPECT_FALSE(is_transitive(PermGroup::trivial(2), std::vector<Point>{0, 1}));
  EXPECT_FALSE(is_transitive(PermGroup(4, {cyc(4, {{0, 1}, {2, 3}})}), std::vector<Point>{0, 1, 2, 3}));
}

TEST(IsTransitive, RejectsBadDomains) {
  PermGroup g(3, {cyc(3, {{0, 1, 2}})});
  EXPECT_THROW(is_transitive(g, std::vector<Point>{0, 1}), InputError);
  EXPECT_THROW(is_transitive(g, std::vector<Point>{}), InputError);
}

TEST(SubgroupsOfOrder, S3OrderThree) {
  auto s3 = std::make_shared<const PermGroup>(3, std::vector<Permutation>{cyc(3, {{0, 1, 2}}), cyc(3, {{0, 1}})});
  auto reps = subgroups_of_order(s3, 3);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].group.order(), 3u);
  EXPECT_EQ(oracle::class_counts(3, oracle::images_of(s3->elements())).at(3), 1u);
}

TEST(SubgroupsOfOrder, WholeGroup) {
  auto g = std::make_shared<const PermGroup>(k4_group());
  auto reps = subgroups_of_order(g, 24);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].group.order(), 24u);
}

TEST(SubgroupsOfOrder, S4OrderTwelve) {
  auto g = std::make_shared<const PermGroup>(k4_group());
  EXPECT_EQ(subgroups_of_order(g, 12).size(), 1u);
}

TEST(SubgroupsOfOrder, Errors) {
  auto g = std::make_shared<const PermGroup>(k4_group());
  EXPECT_THROW(subgroups_of_order(g, 5), InputError);
  EXPECT_THROW(subgroups_of_order(g, 12, 10), CeilingError);
}

// Class counts per order against exhaustive enumeration, on groups of order
// at most 200.
TEST(SubgroupsOfOrder, MatchesExhaustiveEnumeration) {
  std::vector<std::pair<std::string, std::shared_ptr<const PermGroup>>> groups;
  for (const char* g6 : {"C~", "EFz_", "Gr`HOk", "IheA@GUAo"}) {
    auto g = parse_graph6(g6);
    groups.emplace_back(g6, std::make_shared<const PermGroup>(oracle::group_of(g.vertex_count(), oracle::automorphisms(g))));
  }
  // AGL(1,7), order 42.
  groups.emplace_back("AGL(1,7)", std::make_shared<const PermGroup>(
                                      7, std::vector<Permutation>{cyc(7, {{0, 1, 2, 3, 4, 5, 6}}),
                                                                  cyc(7, {{1, 3, 2, 6, 4, 5}})}));
  for (const auto& [name, g] : groups) {
    ASSERT_LE(g->order(), 200u) << name;
    auto elems = oracle::images_of(g->elements());
    auto expected = oracle::class_counts(g->degree(), elems);
    std::set<oracle::Images> in_g(elems.begin(), elems.end());
    for (std::uint64_t k = 1; k <= g->order(); ++k) {
      if (g->order() % k) continue;
      auto reps = subgroups_of_order(g, k);
      EXPECT_EQ(reps.size(), expected.count(k) ? expected.at(k) : 0u) << name << " k=" << k;
      for (const auto& r : reps) {
        EXPECT_EQ(r.group.order(), k);
        for (const auto& s : r.group.generators()) EXPECT_TRUE(in_g.contains(oracle::images(s)));
      }
      for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j)
          EXPECT_FALSE(conjugate_subgroups(*g, reps[i].group, reps[j].group)) << name << " k=" << k;
    }
  }
}

TEST(ConjugateSubgroups, Examples) {
  PermGroup s3(3, {cyc(3, {{0, 1, 2}}), cyc(3, {{0, 1}})});
  PermGroup a3(3, {cyc(3, {{0, 1, 2}})});
  PermGroup t(3, {cyc(3, {{0, 1}})});
  EXPECT_TRUE(conjugate_subgroups(s3, a3, a3));
  EXPECT_FALSE(conjugate_subgroups(s3, a3, t));
  auto s4 = k4_group();
  EXPECT_TRUE(conjugate_subgroups(s4, stabilizer(s4, Point{0}), stabilizer(s4, Point{3})));
}
