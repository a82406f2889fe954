#include "gedprog/inference.hpp"

#include <chrono>
#include <exception>

#include "gedprog/metrics.hpp"

namespace gedprog {

using nlohmann::json;

PairPrediction infer_pair(std::span<const EnsembleMember> ensemble,
                          const GraphPair& pair, const MatcherConfig& matcher,
                          const ProgramRunner& runner) {
  const auto start = std::chrono::steady_clock::now();
  PairPrediction out;
  out.truth = pair.true_ged;
  auto [g1, g2] = pad_to_equal_size(pair.g1, pair.g2);
  const WeightMatrix w0 = initial_weight_matrix(g1, g2);
  for (const auto& member : ensemble) {
    ExecOutcome res = runner.evaluate(member.program, g1, g2, w0);
    auto* ok = std::get_if<ExecOk>(&res);
    if (!ok) {
      out.failures.push_back("p" + std::to_string(member.program.id) + ": " +
                             describe(res));
      continue;
    }
    UpperBound ub = ged_upper_bound(g1, g2, ok->weights, matcher);
    if (!out.prediction || ub.value.value < *out.prediction) {
      out.prediction = ub.value.value;
      out.mapping = std::move(ub.mapping);
      out.program = member.program.id;
    }
  }
  out.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

std::vector<PairPrediction> infer_pairs_serial(
    std::span<const EnsembleMember> ensemble, std::span<const GraphPair> pairs,
    const MatcherConfig& matcher, const ProgramRunner& runner) {
  std::vector<PairPrediction> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs)
    out.push_back(infer_pair(ensemble, p, matcher, runner));
  return out;
}

std::vector<PairPrediction> infer_pairs_parallel(
    std::span<const EnsembleMember> ensemble, std::span<const GraphPair> pairs,
    const MatcherConfig& matcher, const ProgramRunner& runner) {
  const auto n = static_cast<std::int64_t>(pairs.size());
  std::vector<PairPrediction> out(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < n; ++t) {
    try {
      out[t] = infer_pair(ensemble, pairs[t], matcher, runner);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void compute_metrics(EvalReport& report) {
  report.rmse.reset();
  report.emr.reset();
  std::vector<std::int64_t> preds, truths;
  for (const auto& p : report.pairs) {
    if (!p.truth) return;
    if (!p.prediction) continue;
    preds.push_back(*p.prediction);
    truths.push_back(*p.truth);
  }
  if (preds.empty()) return;
  report.rmse = rmse(preds, truths);
  report.emr = emr(preds, truths);
}

EvalReport infer(const EnsembleManifest& manifest,
                 std::span<const GraphPair> pairs, const MatcherConfig& matcher,
                 const ProgramRunner& runner, ExecPolicy policy) {
  const auto start = std::chrono::steady_clock::now();
  EvalReport report;
  report.pairs =
      policy == ExecPolicy::parallel
          ? infer_pairs_parallel(manifest.programs, pairs, matcher, runner)
          : infer_pairs_serial(manifest.programs, pairs, matcher, runner);
  for (const auto& p : report.pairs) report.error_pairs += !p.prediction;
  compute_metrics(report);
  report.total_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  return report;
}

json report_to_json(const EvalReport& report) {
  json pairs = json::array();
  double max_seconds = 0.0;
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    const auto& p = report.pairs[i];
    json entry = {{"index", i}};
    if (p.prediction) {
      entry["status"] = "ok";
      entry["prediction"] = *p.prediction;
      entry["mapping"] = std::vector<int>(p.mapping->forward().begin(),
                                          p.mapping->forward().end());
      entry["program"] = p.program;
    } else {
      entry["status"] = "error";
    }
    if (p.truth) entry["true_ged"] = *p.truth;
    if (!p.failures.empty()) entry["failures"] = p.failures;
    pairs.push_back(std::move(entry));
    max_seconds = std::max(max_seconds, p.seconds);
  }
  json doc = {{"pairs", std::move(pairs)},
              {"error_pairs", report.error_pairs},
              {"timing",
               {{"total_seconds", report.total_seconds},
                {"mean_pair_ms", report.pairs.empty()
                                     ? 0.0
                                     : 1000.0 * report.total_seconds /
                                           static_cast<double>(report.pairs.size())},
                {"max_pair_ms", 1000.0 * max_seconds}}}};
  if (report.rmse) doc["rmse"] = *report.rmse;
  if (report.emr) doc["emr"] = *report.emr;
  if (!report.ensemble_ref.empty()) doc["ensemble"] = report.ensemble_ref;
  return doc;
}

}  // namespace gedprog
