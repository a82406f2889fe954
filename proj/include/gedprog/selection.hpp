#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "gedprog/program.hpp"

namespace gedprog {

inline constexpr int kDefaultBudget = 15;

/// Cached upper bounds ub[p][t] of every admitted program p on every training
/// pair t, plus the per-pair worst-case sentinel n_t^2 + n_t used as the
/// empty-ensemble value.
class BoundTable {
 public:
  BoundTable() = default;
  explicit BoundTable(std::vector<std::int64_t> pair_sentinels);

  /// Sentinels from padded pair sizes.
  static BoundTable for_pair_sizes(std::span<const int> sizes);

  int pair_count() const { return static_cast<int>(sentinels_.size()); }
  std::span<const std::int64_t> sentinels() const { return sentinels_; }

  /// Throws std::invalid_argument on duplicate ids, wrong row length or
  /// negative bounds.
  void add_row(ProgramId id, std::vector<std::int64_t> bounds);
  void mark_invalid(ProgramId id) { invalid_.insert(id); }

  bool contains(ProgramId id) const { return rows_.count(id) != 0; }
  bool is_invalid(ProgramId id) const { return invalid_.count(id) != 0; }

  /// Throws std::out_of_range for unknown ids.
  std::span<const std::int64_t> row(ProgramId id) const;

  /// Ids with a row, ascending.
  std::vector<ProgramId> program_ids() const;
  const std::set<ProgramId>& invalid_ids() const { return invalid_; }

 private:
  std::vector<std::int64_t> sentinels_;
  std::map<ProgramId, std::vector<std::int64_t>> rows_;
  std::set<ProgramId> invalid_;
};

/// Ordered selection of programs with the running per-pair minima.
struct Ensemble {
  std::vector<ProgramId> members;
  std::vector<std::int64_t> admission_gains;  ///< J reduction when admitted
  std::vector<std::int64_t> pair_minima;
  std::int64_t j_value = 0;

  static Ensemble empty(const BoundTable& table);

  /// Appends `id`, returning the J reduction it produced.
  std::int64_t add(ProgramId id, const BoundTable& table);

  bool contains(ProgramId id) const;
};

/// Sum over pairs of the minimum bound among `programs`; the sentinel sum for
/// an empty set.
std::int64_t objective_j(std::span<const ProgramId> programs,
                         const BoundTable& table);

/// J(A) - J(A + p) >= 0.
std::int64_t marginal_gain(const Ensemble& ensemble, ProgramId p,
                           const BoundTable& table);

/// Greedy budgeted selection: repeatedly admit the candidate with the largest
/// marginal gain, ties to the lower id, until `budget` programs are chosen or
/// the candidates run out. Uses lazy re-evaluation of stale gains.
Ensemble greedy_select(std::span<const ProgramId> candidates, int budget,
                       const BoundTable& table);

/// Reference implementation re-evaluating every gain each round.
Ensemble greedy_select_naive(std::span<const ProgramId> candidates, int budget,
                             const BoundTable& table);

}  // namespace gedprog
