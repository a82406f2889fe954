#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gedprog/program.hpp"

namespace gedprog {

struct PoolConfig {
  int islands = 5;
  double temperature = 0.99;  ///< softmax temperature over cluster scores
  int cull_period = 100;      ///< registrations between culls
  std::uint64_t seed = 0;
};

struct ScoredProgram {
  PriorityProgram program;
  std::int64_t score = 0;
};

struct PoolEntry {
  PriorityProgram program;
  std::int64_t score = 0;
  int island = 0;
  /// Id whose bound-table row this program uses; differs from program.id for
  /// copies made when reseeding culled islands.
  ProgramId origin = 0;
};

/// Members of one island grouped into clusters of equal score.
struct Island {
  std::vector<ProgramId> members;
  std::map<std::int64_t, std::vector<ProgramId>> clusters;

  bool empty() const { return members.empty(); }
  std::optional<std::int64_t> best_score() const {
    if (clusters.empty()) return std::nullopt;
    return clusters.rbegin()->first;
  }
};

/// Islands-model program population. Not thread-safe: one owner mutates it.
class Pool {
 public:
  explicit Pool(PoolConfig config = {});

  ProgramId allocate_id() { return next_id_++; }

  /// Adds `p` to a uniformly random island and its score cluster. Returns the
  /// island index. Throws std::invalid_argument on a duplicate id.
  int register_program(PriorityProgram p, std::int64_t score);

  /// Picks a random non-empty island, draws k clusters (with replacement)
  /// from a softmax over cluster scores, and takes the shortest program of
  /// each (ties to the lower id). Result is ordered by ascending score.
  /// Throws std::logic_error on an empty pool.
  std::vector<ScoredProgram> sample_context(int k);

  /// Softmax probabilities of an island's clusters, in ascending score order.
  std::vector<double> cluster_probabilities(int island) const;

  /// Empties the floor(s/2) islands with the lowest best score (ties: lower
  /// index first) and reseeds every empty island with a copy of a surviving
  /// island's best program, cycling over survivors by descending best score.
  void cull_islands();

  /// True when the registration count has just reached a multiple of the
  /// cull period.
  bool cull_due() const;

  const std::vector<Island>& islands() const { return islands_; }
  const PoolEntry& entry(ProgramId id) const;
  const std::map<ProgramId, PoolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::int64_t registrations() const { return registrations_; }
  const PoolConfig& config() const { return config_; }

  /// Best program of an island: highest score, then shortest, then lowest id.
  ProgramId best_program(int island) const;

  /// Serializable snapshot; restore() rebuilds islands from it.
  struct State {
    std::map<ProgramId, PoolEntry> entries;
    ProgramId next_id = 1;
    std::int64_t registrations = 0;
    std::string rng_state;
  };
  State state() const;
  static Pool restore(PoolConfig config, const State& state);

 private:
  void place(const PoolEntry& e);
  void remove_island_members(int island);

  PoolConfig config_;
  std::vector<Island> islands_;
  std::map<ProgramId, PoolEntry> entries_;
  ProgramId next_id_ = 1;
  std::int64_t registrations_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace gedprog
