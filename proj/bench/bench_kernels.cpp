// Serial reference vs OpenMP kernels on the bundled corpora.

#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

#include <array>
#include <filesystem>

#include "gedprog/inference.hpp"
#include "gedprog/io.hpp"
#include "gedprog/kernels.hpp"
#include "gedprog/selection.hpp"

using namespace gedprog;

namespace {

const std::vector<GraphPair>& corpus_pairs(int which) {
  static const auto sets = [] {
    std::array<std::vector<GraphPair>, 3> out;
    const char* names[] = {"labeled", "dense", "sparse"};
    for (int i = 0; i < 3; ++i)
      for (auto& r : read_pairs_file(std::filesystem::path(GEDPROG_BENCH_DATA_DIR) /
                                     "corpora" / (std::string(names[i]) + ".jsonl")))
        out[i].push_back(std::move(r.pair));
    return out;
  }();
  return sets[which];
}

ProgramRunner& runner() {
  static ProgramRunner r;
  return r;
}

void BM_BoundRow(benchmark::State& state, ExecPolicy policy) {
  const TrainCorpus corpus(corpus_pairs(static_cast<int>(state.range(0))));
  const auto p = PriorityProgram::builtin(1, "degree_neighbor");
  for (auto _ : state) benchmark::DoNotOptimize(bound_row(p, corpus, {}, runner(), policy));
  state.SetItemsProcessed(state.iterations() * corpus.size());
}

void BM_ExactGed(benchmark::State& state, ExecPolicy policy) {
  const auto& pairs = corpus_pairs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_ged_batch(pairs, 10, policy));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs.size()));
}

void BM_Infer(benchmark::State& state, bool parallel) {
  const auto& pairs = corpus_pairs(static_cast<int>(state.range(0)));
  const std::vector<EnsembleMember> programs = {
      {PriorityProgram::builtin(1, "zero_priority"), 0},
      {PriorityProgram::builtin(2, "label_passthrough"), 0},
      {PriorityProgram::builtin(3, "degree_neighbor"), 0}};
  const MatcherConfig m;
  for (auto _ : state) {
    if (parallel)
      benchmark::DoNotOptimize(infer_pairs_parallel(programs, pairs, m, runner()));
    else
      benchmark::DoNotOptimize(infer_pairs_serial(programs, pairs, m, runner()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs.size()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_BoundRow, serial, ExecPolicy::serial)->DenseRange(0, 2);
BENCHMARK_CAPTURE(BM_BoundRow, parallel, ExecPolicy::parallel)->DenseRange(0, 2);
BENCHMARK_CAPTURE(BM_ExactGed, serial, ExecPolicy::serial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ExactGed, parallel, ExecPolicy::parallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Infer, serial, false)->DenseRange(0, 2);
BENCHMARK_CAPTURE(BM_Infer, parallel, true)->DenseRange(0, 2);

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
