#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gedprog/builtins.hpp"
#include "gedprog/exact_ged.hpp"
#include "gedprog/matching.hpp"
#include "oracles.hpp"

using namespace gedprog;

namespace {

WeightMatrix random_matrix(std::mt19937_64& rng, int n) {
  // Multiples of 1/8 keep sums exact.
  std::uniform_int_distribution<int> d(-40, 80);
  WeightMatrix w(n, n);
  for (double& x : w.data()) x = d(rng) / 8.0;
  return w;
}

bool is_permutation(const NodeMapping& pi, int n) {
  std::vector<int> seen(n, 0);
  if (pi.size() != n) return false;
  for (int i = 0; i < n; ++i) {
    if (pi[i] < 0 || pi[i] >= n || seen[pi[i]]) return false;
    seen[pi[i]] = 1;
  }
  return true;
}

}  // namespace

TEST(Hungarian, Examples) {
  WeightMatrix id = WeightMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(hungarian_match(id), NodeMapping::identity(3));
  WeightMatrix w = WeightMatrix::from_rows({{1, 2, 3}, {2, 4, 6}, {3, 6, 9}});
  const auto pi = hungarian_match(w);
  EXPECT_EQ(assignment_weight(w, pi), 14.0);
  EXPECT_EQ(oracle::brute_max_assignment(w), 14.0);
  EXPECT_EQ(hungarian_match(WeightMatrix(4, 4)), NodeMapping::identity(4));
}

TEST(Hungarian, RejectsBadInput) {
  EXPECT_THROW(hungarian_match(WeightMatrix(2, 3)), std::invalid_argument);
  WeightMatrix w(2, 2);
  w(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(hungarian_match(w), std::invalid_argument);
  EXPECT_THROW(greedy_match(w), std::invalid_argument);
}

TEST(Hungarian, OptimalAgainstBruteForce) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 7);
    const WeightMatrix w = random_matrix(rng, n);
    const auto pi = hungarian_match(w);
    ASSERT_TRUE(is_permutation(pi, n));
    EXPECT_EQ(assignment_weight(w, pi), oracle::brute_max_assignment(w));
  }
}

TEST(Hungarian, ScaleInvariance) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    WeightMatrix w = random_matrix(rng, n);
    for (double& x : w.data()) x *= 4.0;
    EXPECT_EQ(assignment_weight(w, hungarian_match(w)),
              oracle::brute_max_assignment(w));
  }
}

TEST(Greedy, Examples) {
  EXPECT_EQ(greedy_match(WeightMatrix::from_rows({{1, 0}, {0, 1}})),
            NodeMapping::identity(2));
  WeightMatrix w = WeightMatrix::from_rows({{5, 4}, {4, 1}});
  const auto pi = greedy_match(w);
  EXPECT_EQ(pi, NodeMapping::identity(2));
  EXPECT_EQ(assignment_weight(w, pi), 6.0);
  EXPECT_EQ(oracle::brute_max_assignment(w), 8.0);
  EXPECT_EQ(greedy_match(WeightMatrix(3, 3, 2.0)), NodeMapping::identity(3));
}

TEST(Greedy, NeverBeatsHungarianOnNonNegative) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> d(0, 16);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 7);
    WeightMatrix w(n, n);
    for (double& x : w.data()) x = d(rng) / 4.0;
    const double g = assignment_weight(w, greedy_match(w));
    EXPECT_GE(assignment_weight(w, hungarian_match(w)), g);
    EXPECT_GE(g, 0.0);
  }
}

TEST(NeighborBiased, EdgelessIdentity) {
  Graph g = Graph::unlabeled(3, {});
  WeightMatrix id = WeightMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(neighbor_biased_match(id, g, g), NodeMapping::identity(3));
}

TEST(NeighborBiased, PathOntoPathIsExact) {
  Graph p = Graph::unlabeled(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto pi = neighbor_biased_match(WeightMatrix(4, 4, 1.0), p, p);
  EXPECT_EQ(ged_under_mapping(p, p, pi).value, 0);
  EXPECT_EQ(exact_ged(p, p).distance.value, 0);
}

TEST(NeighborBiased, BiasFollowsMatchedNeighbors) {
  // After 0->0, node 1 (adjacent to 0) should go to 2 (adjacent to 0 in g2)
  // despite the slightly larger plain weight of 1->1.
  Graph g1 = Graph::unlabeled(3, {{0, 1}});
  Graph g2 = Graph::unlabeled(3, {{0, 2}});
  WeightMatrix w = WeightMatrix::from_rows({{3, 0, 0}, {0, 0.5, 0}, {0, 0, 0}});
  const auto pi = neighbor_biased_match(w, g1, g2, 1.0);
  EXPECT_EQ(pi[0], 0);
  EXPECT_EQ(pi[1], 2);
  EXPECT_EQ(ged_under_mapping(g1, g2, pi).value, 0);
}

TEST(Matchers, AlwaysPermutations) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    Graph g1 = oracle::random_graph(rng, n, 0.4, 2);
    Graph g2 = oracle::random_graph(rng, n, 0.4, 2);
    WeightMatrix w = random_matrix(rng, n);
    EXPECT_TRUE(is_permutation(hungarian_match(w), n));
    EXPECT_TRUE(is_permutation(greedy_match(w), n));
    EXPECT_TRUE(is_permutation(neighbor_biased_match(w, g1, g2, 1.0), n));
  }
}

TEST(UpperBound, UniqueLabelsRecoverIdentity) {
  Graph g({0, 1, 2, 3}, {{0, 1}, {1, 2}, {1, 3}});
  for (auto kind : {MatcherKind::hungarian, MatcherKind::greedy,
                    MatcherKind::neighbor_biased}) {
    const auto ub = ged_upper_bound(g, g, initial_weight_matrix(g, g), {kind, 1.0});
    EXPECT_EQ(ub.value.value, 0) << to_string(kind);
  }
}

TEST(UpperBound, DimensionMismatchThrows) {
  Graph g = Graph::unlabeled(3, {});
  EXPECT_THROW(ged_upper_bound(g, g, WeightMatrix(2, 2), {}), std::invalid_argument);
}

TEST(UpperBound, ZeroWeightsUseTieBreakMapping) {
  Graph g1 = Graph::unlabeled(3, {{0, 1}}), g2 = Graph::unlabeled(3, {{1, 2}});
  const auto ub = ged_upper_bound(g1, g2, WeightMatrix(3, 3), {MatcherKind::hungarian});
  EXPECT_EQ(ub.value, ged_under_mapping(g1, g2, ub.mapping));
  EXPECT_GE(ub.value.value, oracle::brute_ged(g1, g2));
}

TEST(UpperBound, NeverBelowExact) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g1 = oracle::random_graph(rng, 1 + static_cast<int>(rng() % 6), 0.4, 2);
    Graph g2 = oracle::random_graph(rng, 1 + static_cast<int>(rng() % 6), 0.4, 2);
    const auto exact = oracle::brute_ged(g1, g2);
    auto [a, b] = pad_to_equal_size(g1, g2);
    const WeightMatrix w0 = initial_weight_matrix(a, b);
    for (auto kind : {MatcherKind::hungarian, MatcherKind::greedy,
                      MatcherKind::neighbor_biased})
      for (const auto& w : {w0, builtin_degree_neighbor(a, b, w0), random_matrix(rng, a.size())})
        EXPECT_GE(ged_upper_bound(a, b, w, {kind, 1.0}).value.value, exact);
  }
}

TEST(MatcherKind, ParsesNames) {
  EXPECT_EQ(parse_matcher_kind("hungarian"), MatcherKind::hungarian);
  EXPECT_EQ(parse_matcher_kind("greedy"), MatcherKind::greedy);
  EXPECT_EQ(parse_matcher_kind("neighbor_biased"), MatcherKind::neighbor_biased);
  EXPECT_FALSE(parse_matcher_kind("auction"));
}
