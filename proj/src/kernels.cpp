#include "gedprog/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <exception>

namespace gedprog {
namespace {

// Result of one (program, pair) evaluation: a bound, or a failure description.
struct PairBound {
  std::int64_t bound = -1;
  std::string failure;
};

PairBound evaluate_pair(const PriorityProgram& program,
                        const TrainCorpus::Entry& pair,
                        const MatcherConfig& matcher,
                        const ProgramRunner& runner) {
  ExecOutcome out = runner.evaluate(program, pair.g1, pair.g2, pair.w0);
  if (auto* ok = std::get_if<ExecOk>(&out))
    return {ged_upper_bound(pair.g1, pair.g2, ok->weights, matcher).value.value,
            {}};
  return {-1, describe(out)};
}

// Rethrows the exception recorded at the lowest index, if any.
void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

BoundRow bound_row_serial(const PriorityProgram& program,
                          const TrainCorpus& corpus,
                          const MatcherConfig& matcher,
                          const ProgramRunner& runner) {
  BoundRow row;
  std::vector<std::int64_t> bounds;
  bounds.reserve(corpus.size());
  for (int t = 0; t < corpus.size(); ++t) {
    PairBound pb = evaluate_pair(program, corpus[t], matcher, runner);
    if (pb.bound < 0) {
      row.failed_pair = t;
      row.failure = std::move(pb.failure);
      return row;
    }
    bounds.push_back(pb.bound);
  }
  row.bounds = std::move(bounds);
  return row;
}

BoundRow bound_row_parallel(const PriorityProgram& program,
                            const TrainCorpus& corpus,
                            const MatcherConfig& matcher,
                            const ProgramRunner& runner) {
  const int n = corpus.size();
  std::vector<PairBound> results(n);
  std::vector<std::exception_ptr> errors(n);
  // Pairs above the lowest known failure are skipped; pairs below it still
  // run, so the reported failure matches the serial kernel.
  std::atomic<int> first_failure{n};

#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < n; ++t) {
    if (t > first_failure.load(std::memory_order_relaxed)) continue;
    try {
      results[t] = evaluate_pair(program, corpus[t], matcher, runner);
      if (results[t].bound < 0) {
        int cur = first_failure.load();
        while (t < cur && !first_failure.compare_exchange_weak(cur, t)) {
        }
      }
    } catch (...) {
      errors[t] = std::current_exception();
      int cur = first_failure.load();
      while (t < cur && !first_failure.compare_exchange_weak(cur, t)) {
      }
    }
  }

  const int fail = first_failure.load();
  for (int t = 0; t <= std::min(fail, n - 1); ++t)
    if (errors[t]) std::rethrow_exception(errors[t]);

  BoundRow row;
  if (fail < n) {
    row.failed_pair = fail;
    row.failure = std::move(results[fail].failure);
    return row;
  }
  std::vector<std::int64_t> bounds(n);
  for (int t = 0; t < n; ++t) bounds[t] = results[t].bound;
  row.bounds = std::move(bounds);
  return row;
}

BoundRow bound_row(const PriorityProgram& program, const TrainCorpus& corpus,
                   const MatcherConfig& matcher, const ProgramRunner& runner,
                   ExecPolicy policy) {
  return policy == ExecPolicy::parallel
             ? bound_row_parallel(program, corpus, matcher, runner)
             : bound_row_serial(program, corpus, matcher, runner);
}

std::vector<ExactGed> exact_ged_batch_serial(std::span<const GraphPair> pairs,
                                             int node_limit) {
  std::vector<ExactGed> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(exact_ged(p.g1, p.g2, node_limit));
  return out;
}

std::vector<ExactGed> exact_ged_batch_parallel(std::span<const GraphPair> pairs,
                                               int node_limit) {
  const auto n = static_cast<std::int64_t>(pairs.size());
  std::vector<ExactGed> out(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < n; ++t) {
    try {
      out[t] = exact_ged(pairs[t].g1, pairs[t].g2, node_limit);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  rethrow_first(errors);
  return out;
}

std::vector<ExactGed> exact_ged_batch(std::span<const GraphPair> pairs,
                                      int node_limit, ExecPolicy policy) {
  return policy == ExecPolicy::parallel
             ? exact_ged_batch_parallel(pairs, node_limit)
             : exact_ged_batch_serial(pairs, node_limit);
}

}  // namespace gedprog
