#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace gapamp {
namespace {

// Straight from the recursive definition: disjoint union of the children's
// instances, then one fresh layer of copies wired by the child bijections.
DagInstance compose_by_definition(const DagInstance& base, const Scheme& s) {
  const int k = s.shape().k();
  if (s.shape().d() == 1) return base;
  const int n = base.graph().vertex_count();
  std::vector<DagInstance> kids;
  for (int i = 1; i <= k; ++i) kids.push_back(compose_by_definition(base, s.subtree(NodeAddress({i}))));
  std::vector<Arc> arcs;
  std::vector<Vertex> offset;
  Vertex next = 0;
  for (const auto& j : kids) {
    offset.push_back(next);
    for (const Arc& a : j.graph().arcs()) arcs.push_back({next + a.from, next + a.to});
    next += j.graph().vertex_count();
  }
  const auto width = static_cast<std::uint64_t>(kids.front().k());
  const Vertex layer_start = next;
  for (std::uint64_t x = 0; x < width; ++x) {
    for (const Arc& a : base.graph().arcs()) {
      arcs.push_back({layer_start + static_cast<Vertex>(x) * n + a.from,
                      layer_start + static_cast<Vertex>(x) * n + a.to});
    }
  }
  std::vector<Request> requests;
  for (int i = 1; i <= k; ++i) {
    const Permutation& f = s.permutation(NodeAddress({i}));
    const DagInstance& j = kids[static_cast<std::size_t>(i - 1)];
    const Vertex off = offset[static_cast<std::size_t>(i - 1)];
    for (std::uint64_t v = 1; v <= width; ++v) {
      const Vertex copy = layer_start + static_cast<Vertex>(f[v - 1] - 1) * n;
      const Request& r = j.request(static_cast<int>(v));
      arcs.push_back({off + r.sink, copy + base.request(i).source});
      requests.push_back({off + r.source, copy + base.request(i).sink});
    }
  }
  return DagInstance(Digraph(layer_start + static_cast<Vertex>(width) * n, std::move(arcs)),
                     std::move(requests));
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

TEST(Compose, DepthOneIsTheBaseInstance) {
  const DagInstance base = gen_no_instance(2);
  const ComposedInstance j = compose(base, random_scheme(TreeShape(2, 1), 1));
  EXPECT_EQ(canonicalize(j.instance), canonicalize(base));
  EXPECT_EQ(j.connector_arcs, 0u);
  EXPECT_EQ(j.copies.size(), 1u);
}

TEST(Compose, SmallestTwoLayerExample) {
  // I: s1=1 -> t1=2, s2=3 -> t2=4; identity scheme on T(2,2)
  const DagInstance base = gen_yes_instance(2, 0);
  const ComposedInstance j = compose(base, Scheme::identity(TreeShape(2, 2)));
  // copies: J(1) at 0, J(2) at 4, layer-2 copies at 8 and 12
  EXPECT_EQ(j.instance.graph().vertex_count(), 16);
  EXPECT_EQ(j.instance.requests(),
            (std::vector<Request>{{1, 10}, {3, 14}, {5, 12}, {7, 16}}));
  EXPECT_TRUE(j.instance.graph().has_arc({2, 9}));
  EXPECT_TRUE(j.instance.graph().has_arc({4, 13}));
  EXPECT_TRUE(j.instance.graph().has_arc({6, 11}));
  EXPECT_TRUE(j.instance.graph().has_arc({8, 15}));
}

TEST(Compose, ArityMismatchThrows) {
  EXPECT_THROW(compose(gen_no_instance(3), Scheme::identity(TreeShape(2, 2))), std::invalid_argument);
}

TEST(Compose, PropertyMatchesRecursiveDefinition) {
  Rng rng(707);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + static_cast<int>(uniform_below(rng, 2));
    const int d = 1 + static_cast<int>(uniform_below(rng, 3));
    DagInstance base = testing::random_dag(rng, 2 * k + 2, 0.4, k);
    const Scheme s = random_scheme(TreeShape(k, d), rng());
    const ComposedInstance j = compose(base, s);
    const DagInstance expected = compose_by_definition(base, s);
    EXPECT_EQ(canonicalize(j.instance), canonicalize(expected));
  }
}

TEST(Compose, PropertySizeLaws) {
  for (int k = 2; k <= 3; ++k) {
    for (int d = 1; d <= 3; ++d) {
      const DagInstance base = gen_no_instance(k);
      const ComposedInstance j = compose(base, random_scheme(TreeShape(k, d), 100 + k * 10 + d));
      const std::uint64_t copies = static_cast<std::uint64_t>(d) * ipow(k, d - 1);
      EXPECT_EQ(j.copies.size(), copies);
      EXPECT_EQ(j.connector_arcs, static_cast<std::uint64_t>(d - 1) * ipow(k, d));
      EXPECT_EQ(static_cast<std::uint64_t>(j.instance.k()), ipow(k, d));
      EXPECT_EQ(j.instance.graph().arcs().size(), copies * base.graph().arcs().size() + j.connector_arcs);
      EXPECT_TRUE(validate_instance(j.instance).empty());
      for (int layer = 1; layer <= d; ++layer) {
        const auto on_layer = std::count_if(j.copies.begin(), j.copies.end(),
                                            [&](const CopyRecord& c) { return c.layer == layer; });
        EXPECT_EQ(static_cast<std::uint64_t>(on_layer), ipow(k, d - 1));
      }
      for (const auto& route : j.routes) EXPECT_EQ(route.size(), static_cast<std::size_t>(d));
    }
  }
}

TEST(Compose, RoutesCrossLayersInOrder) {
  const ComposedInstance j = compose(gen_yes_instance(2, 1), random_scheme(TreeShape(2, 3), 9));
  for (std::size_t leaf = 0; leaf < j.routes.size(); ++leaf) {
    for (std::size_t l = 0; l < j.routes[leaf].size(); ++l) {
      EXPECT_EQ(j.copies[j.routes[leaf][l].copy].layer, static_cast<int>(l) + 1);
    }
    // layer-1 copy hosts the leaf's parent and uses the leaf's child index
    const NodeAddress addr = j.shape.leaf_address(leaf + 1);
    EXPECT_EQ(j.copies[j.routes[leaf][0].copy].host, addr.parent());
    EXPECT_EQ(j.routes[leaf][0].request, addr.digits().back());
  }
}

TEST(Lift, PropertyYesInstancesStayFullyServable) {
  for (int d = 2; d <= 4; ++d) {
    for (int pad = 0; pad <= 1; ++pad) {
      const DagInstance base = gen_yes_instance(2, pad);
      const Decision sol = decide_disjoint_paths(base, all_requests(base));
      ASSERT_TRUE(sol.feasible);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scheme s = random_scheme(TreeShape(2, d), seed);
        const ComposedInstance j = compose(base, s);
        const PathSolution lifted = lift_solution(base, *sol.witness, s, j);
        EXPECT_EQ(lifted.paths.size(), ipow(2, d));
        const auto check = verify_solution(j.instance, lifted, all_requests(j.instance));
        EXPECT_TRUE(check.ok) << (check.violations.empty() ? "" : check.violations.front());
      }
    }
  }
}

TEST(Lift, RandomYesBasesAtArityThree) {
  Rng rng(808);
  int lifted_count = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const DagInstance base = testing::planted_yes_dag(rng, 8, 0.3, 3);
    const Decision sol = decide_disjoint_paths(base, all_requests(base));
    ASSERT_TRUE(sol.feasible);
    ++lifted_count;
    const Scheme s = random_scheme(TreeShape(3, 2), rng());
    const ComposedInstance j = compose(base, s);
    EXPECT_TRUE(verify_solution(j.instance, lift_solution(base, *sol.witness, s, j),
                                all_requests(j.instance)).ok);
  }
  EXPECT_EQ(lifted_count, 10);
}

TEST(Lift, RejectsPartialBaseSolution) {
  const DagInstance base = gen_no_instance(2);
  const Scheme s = Scheme::identity(TreeShape(2, 2));
  const ComposedInstance j = compose(base, s);
  const PathSolution partial{{{1, {1, 3, 4}}}};
  EXPECT_THROW(lift_solution(base, partial, s, j), PreconditionError);
}

// A collision routes every request of A through one copy of a no-instance.
TEST(Compose, PropertyCollisionBlocksNoInstances) {
  const DagInstance base = gen_no_instance(2);
  const TreeShape t(2, 2);
  int blocked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scheme s = random_scheme(t, seed);
    const ComposedInstance j = compose(base, s);
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      std::vector<LeafNumber> members;
      for (int b = 0; b < 4; ++b) {
        if (mask >> b & 1u) members.push_back(static_cast<LeafNumber>(b) + 1);
      }
      const LeafSet a(t, members);
      if (!find_collision(a, s)) continue;
      ++blocked;
      RequestSubset subset(members.begin(), members.end());
      EXPECT_FALSE(decide_disjoint_paths(j.instance, subset).feasible) << "mask " << mask;
      EXPECT_FALSE(brute_force_decide(j.instance, subset));
    }
  }
  EXPECT_GT(blocked, 0);
}

TEST(Compose, OutputsAreDeterministic) {
  const DagInstance base = gen_no_instance(3);
  const Scheme s = random_scheme(TreeShape(3, 2), 5);
  const ComposedInstance a = compose(base, s);
  const ComposedInstance b = compose(base, s);
  EXPECT_EQ(serialize_instance(a.instance), serialize_instance(b.instance));
  EXPECT_EQ(serialize_composition_map(a), serialize_composition_map(b));
}

TEST(Compose, DotAndMapRendering) {
  const DagInstance base = gen_yes_instance(2, 0);
  const ComposedInstance j = compose(base, Scheme::identity(TreeShape(2, 2)));
  const std::string dot = to_dot(j, base.graph().vertex_count());
  EXPECT_EQ(dot.rfind("digraph J {", 0), 0u);
  EXPECT_NE(dot.find("2 -> 9;"), std::string::npos);
  EXPECT_NE(dot.find("cluster_3"), std::string::npos);
  const std::string map = serialize_composition_map(j);
  EXPECT_EQ(map.rfind("composed 2 2\nleaf 1 request 1\n", 0), 0u);
  EXPECT_NE(map.find("copy 3 layer 2 host root slot 1 offset 8"), std::string::npos);
}

}  // namespace
}  // namespace gapamp
