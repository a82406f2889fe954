#pragma once

// Data-parallel kernels over graph pairs. Every kernel has a serial reference
// and an OpenMP version; both produce identical results.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gedprog/corpus.hpp"
#include "gedprog/exact_ged.hpp"
#include "gedprog/matching.hpp"
#include "gedprog/program.hpp"

namespace gedprog {

enum class ExecPolicy { serial, parallel };

/// Outcome of running one program over the whole training corpus. `bounds`
/// is set only if the program produced a valid matrix on every pair;
/// otherwise `failed_pair` is the lowest failing pair index.
struct BoundRow {
  std::optional<std::vector<std::int64_t>> bounds;
  int failed_pair = -1;
  std::string failure;
};

BoundRow bound_row_serial(const PriorityProgram& program,
                          const TrainCorpus& corpus,
                          const MatcherConfig& matcher,
                          const ProgramRunner& runner);

BoundRow bound_row_parallel(const PriorityProgram& program,
                            const TrainCorpus& corpus,
                            const MatcherConfig& matcher,
                            const ProgramRunner& runner);

BoundRow bound_row(const PriorityProgram& program, const TrainCorpus& corpus,
                   const MatcherConfig& matcher, const ProgramRunner& runner,
                   ExecPolicy policy);

std::vector<ExactGed> exact_ged_batch_serial(std::span<const GraphPair> pairs,
                                             int node_limit);

std::vector<ExactGed> exact_ged_batch_parallel(std::span<const GraphPair> pairs,
                                               int node_limit);

std::vector<ExactGed> exact_ged_batch(std::span<const GraphPair> pairs,
                                      int node_limit, ExecPolicy policy);

}  // namespace gedprog
