#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "gedprog/inference.hpp"
#include "gedprog/kernels.hpp"
#include "gedprog/metrics.hpp"
#include "gedprog/toy_corpus.hpp"
#include "oracles.hpp"

using namespace gedprog;

#ifndef GEDPROG_TEST_DATA_DIR
#error "GEDPROG_TEST_DATA_DIR must be defined"
#endif

namespace {

std::vector<GraphPair> random_pairs(std::uint64_t seed, int count, int max_n) {
  std::mt19937_64 rng(seed);
  std::vector<GraphPair> out;
  for (int i = 0; i < count; ++i) {
    const int n1 = 1 + static_cast<int>(rng() % max_n);
    const int n2 = 1 + static_cast<int>(rng() % max_n);
    out.push_back({oracle::random_graph(rng, n1, 0.4, 1 + i % 3),
                   oracle::random_graph(rng, n2, 0.4, 1 + i % 3), std::nullopt});
  }
  return out;
}

EnsembleManifest builtin_ensemble(MatcherKind kind) {
  EnsembleManifest m;
  m.matcher = {kind, 1.0};
  m.programs = {{PriorityProgram::builtin(1, "zero_priority"), 0},
                {PriorityProgram::builtin(2, "label_passthrough"), 0},
                {PriorityProgram::builtin(3, "degree_neighbor"), 0}};
  return m;
}

}  // namespace

TEST(Metrics, Rmse) {
  const std::vector<std::int64_t> a{3, 5}, b{3, 7}, c{4};
  EXPECT_NEAR(rmse(a, b), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(rmse(a, a), 0.0);
  EXPECT_EQ(rmse(c, std::vector<std::int64_t>{1}), 3.0);
  EXPECT_THROW(rmse(a, c), std::invalid_argument);
  EXPECT_THROW(rmse({}, {}), std::invalid_argument);
}

TEST(Metrics, Emr) {
  const std::vector<std::int64_t> a{3, 5}, b{3, 7}, c{4, 6};
  EXPECT_EQ(emr(a, b), 0.5);
  EXPECT_EQ(emr(a, a), 1.0);
  EXPECT_EQ(emr(a, c), 0.0);
  EXPECT_THROW(emr(a, std::vector<std::int64_t>{1}), std::invalid_argument);
}

TEST(Infer, MinimumOverEnsembleWithConsistentMappings) {
  const auto pairs = random_pairs(3, 60, 6);
  ProgramRunner runner;
  for (auto kind : {MatcherKind::hungarian, MatcherKind::greedy,
                    MatcherKind::neighbor_biased}) {
    const auto m = builtin_ensemble(kind);
    const auto report = infer(m, pairs, m.matcher, runner);
    EXPECT_EQ(report.error_pairs, 0);
    EXPECT_FALSE(report.rmse);
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      const auto& p = report.pairs[t];
      ASSERT_TRUE(p.prediction);
      EXPECT_GE(*p.prediction, oracle::brute_ged(pairs[t].g1, pairs[t].g2));
      auto [a, b] = pad_to_equal_size(pairs[t].g1, pairs[t].g2);
      EXPECT_EQ(ged_under_mapping(a, b, *p.mapping).value, *p.prediction);
      const WeightMatrix w0 = initial_weight_matrix(a, b);
      for (const auto& member : m.programs) {
        auto w = std::get<ExecOk>(runner.evaluate(member.program, a, b, w0)).weights;
        EXPECT_LE(*p.prediction, ged_upper_bound(a, b, w, m.matcher).value.value);
      }
    }
  }
}

TEST(Infer, ZeroProgramOnIdenticalGraphs) {
  Graph g({0, 1, 2}, {{0, 1}, {1, 2}});
  std::vector<GraphPair> pairs{{g, g, 0}};
  EnsembleManifest m;
  m.matcher = {MatcherKind::hungarian};
  m.programs = {{PriorityProgram::builtin(1, "zero_priority"), 0}};
  ProgramRunner runner;
  const auto report = infer(m, pairs, m.matcher, runner);
  // Zero weights give the identity under the tie-break, which is exact here.
  EXPECT_EQ(*report.pairs[0].prediction, 0);
  EXPECT_EQ(report.rmse, 0.0);
  EXPECT_EQ(report.emr, 1.0);
}

TEST(Infer, FailingMembersAreSkipped) {
  Graph g1({0, 1}, {{0, 1}}), g2({1, 0}, {});
  std::vector<GraphPair> pairs{{g1, g2, 2}};
  EnsembleManifest m;
  m.matcher = {MatcherKind::hungarian};
  m.programs = {{PriorityProgram::external(1, "exit 1\n", {"/bin/sh", "{source}"}), 0},
                {PriorityProgram::builtin(2, "label_passthrough"), 0}};
  ProgramRunner runner;
  auto report = infer(m, pairs, m.matcher, runner);
  ASSERT_TRUE(report.pairs[0].prediction);
  EXPECT_EQ(report.pairs[0].program, 2u);
  ASSERT_EQ(report.pairs[0].failures.size(), 1u);
  EXPECT_EQ(report.pairs[0].failures[0].rfind("p1: ", 0), 0u);

  m.programs.pop_back();
  report = infer(m, pairs, m.matcher, runner);
  EXPECT_FALSE(report.pairs[0].prediction);
  EXPECT_EQ(report.error_pairs, 1);
  const auto doc = report_to_json(report);
  EXPECT_EQ(doc["pairs"][0]["status"], "error");
}

TEST(Infer, ReportJsonShape) {
  const auto pairs = random_pairs(8, 5, 5);
  std::vector<GraphPair> with_truth = pairs;
  for (auto& p : with_truth) p.true_ged = oracle::brute_ged(p.g1, p.g2);
  ProgramRunner runner;
  const auto m = builtin_ensemble(MatcherKind::hungarian);
  const auto doc = report_to_json(infer(m, with_truth, m.matcher, runner));
  ASSERT_EQ(doc["pairs"].size(), 5u);
  EXPECT_TRUE(doc.contains("rmse"));
  EXPECT_TRUE(doc.contains("emr"));
  EXPECT_TRUE(doc["pairs"][0]["prediction"].is_number_integer());
  EXPECT_TRUE(doc["pairs"][0]["mapping"].is_array());
  EXPECT_TRUE(doc["timing"].contains("mean_pair_ms"));
}

TEST(Kernels, SerialAndParallelAgree) {
  const auto pairs = random_pairs(4, 80, 7);
  const TrainCorpus corpus(pairs);
  ProgramRunner runner;
  for (auto name : {"zero_priority", "label_passthrough", "degree_neighbor"}) {
    const auto p = PriorityProgram::builtin(1, name);
    const auto s = bound_row_serial(p, corpus, {}, runner);
    const auto q = bound_row_parallel(p, corpus, {}, runner);
    ASSERT_TRUE(s.bounds);
    EXPECT_EQ(s.bounds, q.bounds);
  }
  const auto es = exact_ged_batch_serial(pairs, 10);
  const auto ep = exact_ged_batch_parallel(pairs, 10);
  ASSERT_EQ(es.size(), ep.size());
  for (std::size_t t = 0; t < es.size(); ++t) {
    EXPECT_EQ(es[t].distance, ep[t].distance);
    EXPECT_EQ(es[t].mapping, ep[t].mapping);
  }
  const auto m = builtin_ensemble(MatcherKind::neighbor_biased);
  const auto rs = infer_pairs_serial(m.programs, pairs, m.matcher, runner);
  const auto rp = infer_pairs_parallel(m.programs, pairs, m.matcher, runner);
  for (std::size_t t = 0; t < rs.size(); ++t) {
    EXPECT_EQ(rs[t].prediction, rp[t].prediction);
    EXPECT_EQ(rs[t].mapping, rp[t].mapping);
  }
}

TEST(Kernels, FirstFailingPairIsReported) {
  // The program fails only on pairs with more than 3 nodes.
  std::vector<GraphPair> pairs;
  for (int n : {2, 3, 5, 2, 6}) pairs.push_back({Graph::unlabeled(n, {}), Graph::unlabeled(n, {}), {}});
  const TrainCorpus corpus(pairs);
  ProgramRunner runner;
  const auto p = PriorityProgram::external(
      1,
      "import sys\n"
      "def priority(a, b, w):\n"
      "  if len(a) > 3:\n    sys.exit(2)\n"
      "  return w\n",
      default_external_command());
  for (auto policy : {ExecPolicy::serial, ExecPolicy::parallel}) {
    const auto row = bound_row(p, corpus, {}, runner, policy);
    EXPECT_FALSE(row.bounds);
    EXPECT_EQ(row.failed_pair, 2);
    EXPECT_FALSE(row.failure.empty());
  }
}

TEST(ToyCorpus, SeededAndExact) {
  ToyCorpusConfig c;
  c.pairs = 15;
  c.max_nodes = 6;
  const auto a = make_toy_corpus(c), b = make_toy_corpus(c);
  ASSERT_EQ(a.size(), 15u);
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].g1, b[t].g1);
    EXPECT_EQ(a[t].g2, b[t].g2);
    EXPECT_LE(a[t].g1.size(), 6);
    EXPECT_LE(a[t].g2.size(), 6);
    EXPECT_EQ(*a[t].true_ged, oracle::brute_ged(a[t].g1, a[t].g2));
  }
  EXPECT_THROW(parse_toy_family("huge"), std::invalid_argument);
}

TEST(BundledCorpora, TruthsMatchOracle) {
  const std::filesystem::path dir = GEDPROG_TEST_DATA_DIR;
  for (auto name : {"labeled", "dense", "sparse"}) {
    const auto records = read_pairs_file(dir / "corpora" / (std::string(name) + ".jsonl"));
    ASSERT_EQ(records.size(), 50u) << name;
    for (const auto& r : records) {
      ASSERT_TRUE(r.pair.true_ged);
      EXPECT_LE(std::max(r.pair.g1.size(), r.pair.g2.size()), 8);
      EXPECT_EQ(*r.pair.true_ged, oracle::brute_ged(r.pair.g1, r.pair.g2));
    }
  }
}
