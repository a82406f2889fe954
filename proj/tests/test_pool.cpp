#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "gedprog/pool.hpp"

using namespace gedprog;

namespace {

PriorityProgram prog(ProgramId id, std::size_t length) {
  auto p = PriorityProgram::external(id, std::string(length, '#'), {"true"});
  return p;
}

void check_invariants(const Pool& pool) {
  std::size_t total = 0;
  std::set<ProgramId> seen;
  for (const auto& island : pool.islands()) {
    total += island.members.size();
    std::size_t clustered = 0;
    for (const auto& [score, ids] : island.clusters) {
      clustered += ids.size();
      for (ProgramId id : ids) EXPECT_EQ(pool.entry(id).score, score);
    }
    EXPECT_EQ(clustered, island.members.size());
    for (ProgramId id : island.members) EXPECT_TRUE(seen.insert(id).second);
  }
  EXPECT_EQ(total, pool.size());
}

}  // namespace

TEST(Pool, RegisterPlacesIntoClusters) {
  Pool pool({5, 0.99, 100, 1});
  const int island = pool.register_program(prog(1, 10), 7);
  EXPECT_GE(island, 0);
  EXPECT_LT(island, 5);
  EXPECT_EQ(pool.islands()[island].clusters.at(7), (std::vector<ProgramId>{1}));
  EXPECT_THROW(pool.register_program(prog(1, 10), 7), std::invalid_argument);
  check_invariants(pool);
}

TEST(Pool, EqualScoresShareACluster) {
  Pool pool({1, 0.99, 100, 1});
  pool.register_program(prog(1, 10), 3);
  pool.register_program(prog(2, 12), 3);
  EXPECT_EQ(pool.islands()[0].clusters.size(), 1u);
  EXPECT_EQ(pool.islands()[0].clusters.at(3).size(), 2u);
}

TEST(Pool, IslandAssignmentIsUniform) {
  Pool pool({5, 0.99, 0, 42});
  std::vector<int> counts(5, 0);
  const int n = 10000;
  for (int i = 1; i <= n; ++i) ++counts[pool.register_program(prog(i, 5), 0)];
  // Chi-squared with 4 degrees of freedom; 18.47 is the 0.999 quantile.
  double chi2 = 0;
  for (int c : counts) chi2 += std::pow(c - n / 5.0, 2) / (n / 5.0);
  EXPECT_LT(chi2, 18.47);
  check_invariants(pool);
}

TEST(Pool, SampleSingleProgramRepeats) {
  Pool pool({5, 0.99, 100, 3});
  pool.register_program(prog(1, 10), 4);
  const auto ctx = pool.sample_context(2);
  ASSERT_EQ(ctx.size(), 2u);
  EXPECT_EQ(ctx[0].program.id, 1u);
  EXPECT_EQ(ctx[1].program.id, 1u);
  EXPECT_THROW(Pool().sample_context(2), std::logic_error);
}

TEST(Pool, ShortestInClusterWins) {
  Pool pool({1, 0.99, 100, 3});
  pool.register_program(prog(1, 120), 5);
  pool.register_program(prog(3, 80), 5);
  pool.register_program(prog(2, 80), 5);
  for (int i = 0; i < 10; ++i)
    for (const auto& sp : pool.sample_context(2)) EXPECT_EQ(sp.program.id, 2u);
}

TEST(Pool, ContextIsOrderedWorstFirst) {
  Pool pool({1, 5.0, 100, 3});
  for (int i = 1; i <= 6; ++i) pool.register_program(prog(i, 10), i);
  for (int r = 0; r < 50; ++r) {
    const auto ctx = pool.sample_context(2);
    EXPECT_LE(ctx[0].score, ctx[1].score);
  }
}

TEST(Pool, SoftmaxProbabilities) {
  Pool pool({1, 0.99, 100, 3});
  pool.register_program(prog(1, 10), 0);
  pool.register_program(prog(2, 10), 10);
  pool.register_program(prog(3, 10), 4);
  const auto p = pool.cluster_probabilities(0);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  const double z = std::exp(0 / 0.99) + std::exp(4 / 0.99) + std::exp(10 / 0.99);
  EXPECT_NEAR(p[0], 1 / z, 1e-12);
  EXPECT_NEAR(p[1], std::exp(4 / 0.99) / z, 1e-12);
  EXPECT_NEAR(p[2], std::exp(10 / 0.99) / z, 1e-12);
}

TEST(Pool, LowTemperatureFavorsBestCluster) {
  Pool pool({1, 0.01, 100, 3});
  pool.register_program(prog(1, 10), 0);
  pool.register_program(prog(2, 10), 10);
  EXPECT_GT(pool.cluster_probabilities(0)[1], 1 - 1e-12);
  for (int r = 0; r < 20; ++r)
    for (const auto& sp : pool.sample_context(2)) EXPECT_EQ(sp.program.id, 2u);
}

TEST(Pool, SamplingIsReproducible) {
  auto fill = [] {
    Pool pool({5, 0.99, 100, 77});
    for (int i = 1; i <= 30; ++i) pool.register_program(prog(i, 10 + i % 4), i % 6);
    return pool;
  };
  Pool a = fill(), b = fill();
  for (int r = 0; r < 20; ++r) {
    const auto x = a.sample_context(2), y = b.sample_context(2);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      EXPECT_EQ(x[i].program.id, y[i].program.id);
  }
}

TEST(Pool, CullKeepsBestAndRefillsIslands) {
  Pool pool({5, 0.99, 100, 9});
  for (int i = 1; i <= 40; ++i) pool.register_program(prog(i, 10), i);
  std::vector<std::int64_t> bests;
  for (const auto& isl : pool.islands()) bests.push_back(isl.best_score().value_or(-1));
  const ProgramId global_best = 40;
  pool.cull_islands();
  check_invariants(pool);
  EXPECT_TRUE(pool.entries().count(global_best));
  int survivors = 0;
  for (int i = 0; i < 5; ++i) {
    EXPECT_FALSE(pool.islands()[i].empty());
    if (pool.islands()[i].members.size() > 1) ++survivors;
  }
  EXPECT_EQ(survivors, 3);
  // Reseeded islands hold copies whose origin points at a surviving program.
  for (const auto& [id, e] : pool.entries())
    if (e.origin != id) EXPECT_TRUE(pool.entries().count(e.origin));
}

TEST(Pool, CullTieBreaksByIndex) {
  Pool pool({4, 0.99, 100, 2});
  for (int i = 1; i <= 40; ++i) pool.register_program(prog(i, 10), 5);
  std::vector<std::vector<ProgramId>> before;
  for (const auto& isl : pool.islands()) before.push_back(isl.members);
  pool.cull_islands();
  // Islands 0 and 1 were culled and now hold a single copy each.
  EXPECT_EQ(pool.islands()[0].members.size(), 1u);
  EXPECT_EQ(pool.islands()[1].members.size(), 1u);
  EXPECT_EQ(pool.islands()[2].members, before[2]);
  EXPECT_EQ(pool.islands()[3].members, before[3]);
}

TEST(Pool, CullDueEveryPeriod) {
  Pool pool({2, 0.99, 3, 1});
  std::vector<bool> due;
  for (int i = 1; i <= 7; ++i) {
    pool.register_program(prog(i, 10), 0);
    due.push_back(pool.cull_due());
  }
  EXPECT_EQ(due, (std::vector<bool>{false, false, true, false, false, true, false}));
}

TEST(Pool, StateRoundTrip) {
  Pool pool({5, 0.99, 100, 12});
  for (int i = 1; i <= 25; ++i) pool.register_program(prog(i, 10 + i), i % 4);
  pool.cull_islands();
  Pool copy = Pool::restore(pool.config(), pool.state());
  check_invariants(copy);
  EXPECT_EQ(copy.size(), pool.size());
  for (int r = 0; r < 10; ++r) {
    const auto x = pool.sample_context(2), y = copy.sample_context(2);
    for (std::size_t i = 0; i < x.size(); ++i)
      EXPECT_EQ(x[i].program.id, y[i].program.id);
  }
  EXPECT_EQ(pool.register_program(prog(500, 1), 1), copy.register_program(prog(500, 1), 1));
}
