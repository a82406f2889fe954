#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gedprog/corpus.hpp"
#include "gedprog/generator.hpp"
#include "gedprog/io.hpp"
#include "gedprog/kernels.hpp"
#include "gedprog/pool.hpp"
#include "gedprog/selection.hpp"

namespace gedprog {

struct EvolutionConfig {
  int islands = 5;
  int context_size = 2;  ///< k programs shown per generator call
  int budget = kDefaultBudget;
  int patience = 50;
  std::int64_t threshold = 0;  ///< J must drop by more than this to count
  int max_iterations = 1000;
  int cull_period = 100;
  double temperature = 0.99;
  std::uint64_t seed = 0;
  MatcherConfig matcher;
  ExecPolicy policy = ExecPolicy::parallel;
  /// Consecutive transport failures before the run is aborted.
  int max_transport_failures = 5;
  int checkpoint_every = 0;  ///< iterations; 0 disables periodic checkpoints
  std::filesystem::path checkpoint_path;
};

struct IterationLog {
  int iteration = 0;
  int candidates = 0;
  int accepted = 0;
  std::vector<std::string> rejections;
  bool transport_failed = false;
  bool culled = false;
  std::int64_t j_value = 0;
  int ensemble_size = 0;
};

enum class StopReason { patience, max_iterations };

struct EvolutionResult {
  EnsembleManifest ensemble;
  /// J of the greedy ensemble after seeding (index 0) and after each
  /// iteration.
  std::vector<std::int64_t> j_trace;
  std::vector<IterationLog> log;
  StopReason stop = StopReason::max_iterations;
  int iterations = 0;
};

/// Serializable run state.
struct EvolutionState {
  int iteration = 0;
  int stall = 0;
  int transport_failures = 0;
  Pool::State pool;
  BoundTable table;
  std::map<ProgramId, ScoredProgram> archive;  ///< every admitted original
  std::vector<ProgramId> ensemble;
  std::vector<std::int64_t> j_trace;
  std::vector<IterationLog> log;
  std::string backend_state;
};

nlohmann::json state_to_json(const EvolutionState& s);
EvolutionState state_from_json(const nlohmann::json& doc);

/// Islands-model search for a program ensemble minimizing J on `corpus`.
class Evolution {
 public:
  Evolution(EvolutionConfig config, const TrainCorpus& corpus,
            GeneratorBackend& backend, const ProgramRunner& runner,
            PromptTemplates templates = {});

  /// Seeds the pool with the zero program and loops until patience or
  /// max_iterations. Throws BackendError (after writing a checkpoint when a
  /// path is configured) if the backend keeps failing.
  EvolutionResult run();

  /// Continues from a checkpoint written by a run with the same config.
  EvolutionResult resume(const std::filesystem::path& checkpoint);

  /// Runs a single generator call. Returns false once the run has stopped.
  bool step();

  EvolutionState snapshot() const;
  void write_checkpoint(const std::filesystem::path& path) const;

  std::int64_t j_value() const { return ensemble_.j_value; }
  const Pool& pool() const { return pool_; }
  const BoundTable& table() const { return table_; }

 private:
  void seed();
  void restore(const EvolutionState& s);
  /// Filters, scores and registers one candidate; returns the rejection
  /// reason if it failed the filter.
  std::optional<std::string> admit(PriorityProgram candidate, bool& culled);
  void refresh_ensemble();
  EvolutionResult finish(StopReason stop) const;

  EvolutionConfig config_;
  const TrainCorpus& corpus_;
  GeneratorBackend& backend_;
  const ProgramRunner& runner_;
  PromptTemplates templates_;

  Pool pool_;
  BoundTable table_;
  std::map<ProgramId, ScoredProgram> archive_;
  Ensemble ensemble_;
  std::vector<std::int64_t> trace_;
  std::vector<IterationLog> log_;
  int iteration_ = 0;
  int stall_ = 0;
  int transport_failures_ = 0;
  std::optional<StopReason> stopped_;
};

/// Ensemble manifest from selected ids and the archive.
EnsembleManifest make_manifest(const Ensemble& ensemble,
                               const std::map<ProgramId, ScoredProgram>& archive,
                               const MatcherConfig& matcher, int budget);

nlohmann::json result_to_json(const EvolutionResult& r);

}  // namespace gedprog
