#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace gapamp {
namespace {

TEST(RequiredDepth, KnownValues) {
  EXPECT_EQ(required_depth(2, 1), BigInt(131072));
  EXPECT_EQ(required_depth(2, 2), BigInt(33554432));
  EXPECT_EQ(required_depth(4, 1), BigInt(4) * big_pow(BigInt(4), 32));
  EXPECT_THROW(required_depth(1, 2), PreconditionError);
}

TEST(RequiredDepth, RoundsExponentUpForNonPowersOfTwo) {
  // 3^12 = 531441 lies in (2^19, 2^20]
  EXPECT_EQ(required_depth(3, 1), BigInt(3) * big_pow(BigInt(4), 20));
}

TEST(CeilLog2, Values) {
  EXPECT_EQ(ceil_log2(BigInt(1)), 0u);
  EXPECT_EQ(ceil_log2(BigInt(2)), 1u);
  EXPECT_EQ(ceil_log2(BigInt(3)), 2u);
  EXPECT_EQ(ceil_log2(BigInt(256)), 8u);
  EXPECT_EQ(ceil_log2(BigInt(257)), 9u);
}

TEST(HeavySetNumbers, SpacingAndBound) {
  EXPECT_EQ(heavy_set_spacing(2, 2), 8);   // (2q)^(2k) = 256
  EXPECT_EQ(heavy_set_spacing(2, 4), 12);  // 8^4 = 4096
  EXPECT_EQ(heavy_set_bound(2, 16, 2), BigRational(4));
}

TEST(GreedyDescend, StopsImmediatelyWhenChildrenAreDense) {
  const TreeShape t(2, 4);
  const auto r = greedy_descend(LeafSet::all(t), NodeAddress::root(), 2, 4);
  EXPECT_TRUE(r.preconditions_met());
  EXPECT_EQ(r.steps, 0);
  EXPECT_TRUE(r.node.is_root());
  EXPECT_TRUE(r.children_dense);
}

TEST(GreedyDescend, FollowsTheDenseSideWithSmallestIndexOnTies) {
  const TreeShape t(2, 3);
  // leaves 1..4 all in A, right half empty
  const LeafSet a(t, std::vector<LeafNumber>{1, 2, 3, 4});
  const auto r = greedy_descend(a, NodeAddress::root(), 2, 4);
  EXPECT_EQ(r.steps, 1);
  EXPECT_EQ(r.node.to_string(), "1");
  ASSERT_EQ(r.trail.size(), 2u);
  EXPECT_EQ(r.trail[0].frac, Fraction(1, 2));
  EXPECT_EQ(r.trail[1].frac, Fraction(1));
  EXPECT_TRUE(r.children_dense);
}

TEST(GreedyDescend, ReportsViolatedPreconditions) {
  const TreeShape t(2, 6);
  const LeafSet sparse(t, std::vector<LeafNumber>{1});
  const auto r = greedy_descend(sparse, NodeAddress::root(), 2, 4);
  EXPECT_FALSE(r.preconditions_met());
  EXPECT_FALSE(greedy_descend(LeafSet::all(t), NodeAddress::root(), 2, 3).preconditions_met());
  EXPECT_FALSE(greedy_descend(LeafSet::all(t), NodeAddress::parse("1.1.1"), 2, 4).preconditions_met());
}

// Each step multiplies Frac by at least 1 + 1/(2k-2), so the walk is short.
TEST(GreedyDescend, PropertyGrowthAndStepBoundAtDepth12) {
  const TreeShape t(2, 12);
  const std::uint64_t q = 2;
  const int tau = 8;
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    // clustered sets make the descent actually move
    std::vector<char> present(static_cast<std::size_t>(t.leaf_count()), 0);
    const std::uint64_t block = std::uint64_t{1} << uniform_below(rng, 8);
    const std::uint64_t blocks = t.leaf_count() / block;
    std::vector<std::uint64_t> order(static_cast<std::size_t>(blocks));
    for (std::uint64_t i = 0; i < blocks; ++i) order[static_cast<std::size_t>(i)] = i;
    fisher_yates(rng, order);
    for (std::uint64_t b = 0; b < blocks / q; ++b) {
      for (std::uint64_t j = 0; j < block; ++j) present[static_cast<std::size_t>(order[b] * block + j)] = 1;
    }
    const LeafSet a(t, present);
    ASSERT_TRUE(a.is_q_subset(q));
    const auto r = greedy_descend(a, NodeAddress::root(), q, tau);
    ASSERT_TRUE(r.preconditions_met());
    EXPECT_TRUE(r.children_dense);
    EXPECT_LE(r.steps, tau - 1);
    const Fraction growth(2 * t.k() - 1, 2 * t.k() - 2);
    for (std::size_t i = 1; i < r.trail.size(); ++i) {
      EXPECT_GE(r.trail[i].frac, r.trail[i - 1].frac * growth);
      EXPECT_EQ(r.trail[i].frac, frac(a, r.trail[i].node));
    }
    const NodeRef stop = t.locate(r.node);
    if (stop.depth < t.d()) {
      for (int i = 1; i <= t.k(); ++i) {
        EXPECT_GE(frac(a, child_ref(t, stop, i)), Fraction(1, static_cast<std::int64_t>(2 * q)));
      }
    }
  }
}

TEST(HeavySet, RejectsBadParameters) {
  EXPECT_THROW(build_heavy_set_F(LeafSet::all(TreeShape(2, 15)), 2), PreconditionError);
  EXPECT_THROW(build_heavy_set_F(LeafSet::all(TreeShape(2, 16)), 1), PreconditionError);
  const TreeShape t(2, 16);
  EXPECT_THROW(build_heavy_set_F(LeafSet(t, std::vector<LeafNumber>{1, 2, 3}), 2), PreconditionError);
}

TEST(HeavySet, FullSetAnchorsEveryNodeOnSpacedLayers) {
  const TreeShape t(2, 16);
  const HeavySet f = build_heavy_set_F(LeafSet::all(t), 2);
  EXPECT_EQ(f.tau, 8);
  EXPECT_EQ(f.layers, 2);
  EXPECT_EQ(f.dense_per_layer, (std::vector<std::uint64_t>{1, 256}));
  EXPECT_EQ(f.members.size(), 257u);
  EXPECT_EQ(f.leaves_sum, 65536u + 256u * 256u);
}

void check_heavy_set(const LeafSet& a, std::uint64_t q) {
  const TreeShape& t = a.shape();
  const HeavySet f = build_heavy_set_F(a, q);
  const Fraction floor(1, static_cast<std::int64_t>(4 * q));
  for (const HeavyMember& m : f.members) {
    EXPECT_TRUE(m.anchor.is_ancestor_of(m.node));
    EXPECT_LT(m.steps, f.tau);
    const NodeRef u = t.locate(m.node);
    if (u.depth == t.d()) continue;
    for (int i = 1; i <= t.k(); ++i) EXPECT_GE(frac(a, child_ref(t, u, i)), floor) << m.node.to_string();
  }
  EXPECT_GE(BigRational(f.leaves_sum), f.bound);
  for (std::size_t j = 0; j < f.dense_per_layer.size(); ++j) {
    EXPECT_GE(BigRational(f.dense_per_layer[j]), f.dense_floor_per_layer[j]);
  }
}

TEST(HeavySet, PropertyUniformRandomHalfSets) {
  const TreeShape t(2, 16);
  Rng rng(505);
  for (int trial = 0; trial < 25; ++trial) {
    check_heavy_set(testing::random_leafset_of_size(rng, t, t.leaf_count() / 2), 2);
  }
}

TEST(HeavySet, PropertyClusteredSets) {
  const TreeShape t(2, 16);
  Rng rng(606);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<char> present(static_cast<std::size_t>(t.leaf_count()), 0);
    const std::uint64_t block = std::uint64_t{1} << (2 + uniform_below(rng, 12));
    const std::uint64_t blocks = t.leaf_count() / block;
    std::vector<std::uint64_t> order(static_cast<std::size_t>(blocks));
    for (std::uint64_t i = 0; i < blocks; ++i) order[static_cast<std::size_t>(i)] = i;
    fisher_yates(rng, order);
    for (std::uint64_t b = 0; b < blocks / 2; ++b) {
      for (std::uint64_t j = 0; j < block; ++j) present[static_cast<std::size_t>(order[b] * block + j)] = 1;
    }
    check_heavy_set(LeafSet(t, present), 2);
  }
}

}  // namespace
}  // namespace gapamp
