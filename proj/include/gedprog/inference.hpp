#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gedprog/corpus.hpp"
#include "gedprog/io.hpp"
#include "gedprog/kernels.hpp"

namespace gedprog {

struct PairPrediction {
  std::optional<std::int64_t> prediction;  ///< unset if every program failed
  std::optional<NodeMapping> mapping;      ///< over the padded node sets
  ProgramId program = 0;                   ///< ensemble member achieving it
  std::optional<std::int64_t> truth;
  std::vector<std::string> failures;  ///< "p<id>: <outcome>" per failed member
  double seconds = 0.0;
};

struct EvalReport {
  std::vector<PairPrediction> pairs;
  std::optional<double> rmse;
  std::optional<double> emr;
  int error_pairs = 0;
  double total_seconds = 0.0;
  std::string ensemble_ref;
};

/// Minimum upper bound over the ensemble for one pair. Members that fail on
/// the pair are skipped; ties go to the earlier member.
PairPrediction infer_pair(std::span<const EnsembleMember> ensemble,
                          const GraphPair& pair, const MatcherConfig& matcher,
                          const ProgramRunner& runner);

std::vector<PairPrediction> infer_pairs_serial(
    std::span<const EnsembleMember> ensemble, std::span<const GraphPair> pairs,
    const MatcherConfig& matcher, const ProgramRunner& runner);

std::vector<PairPrediction> infer_pairs_parallel(
    std::span<const EnsembleMember> ensemble, std::span<const GraphPair> pairs,
    const MatcherConfig& matcher, const ProgramRunner& runner);

/// Runs the ensemble over all pairs and computes RMSE/EMR when every pair
/// has a truth and a prediction.
EvalReport infer(const EnsembleManifest& manifest,
                 std::span<const GraphPair> pairs, const MatcherConfig& matcher,
                 const ProgramRunner& runner,
                 ExecPolicy policy = ExecPolicy::parallel);

/// Fills rmse/emr from the per-pair fields.
void compute_metrics(EvalReport& report);

nlohmann::json report_to_json(const EvalReport& report);

}  // namespace gedprog
