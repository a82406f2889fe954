#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gedprog/graph.hpp"
#include "gedprog/selection.hpp"
#include "gedprog/weight_matrix.hpp"

namespace gedprog {

/// A graph pair as read from a pairs file (unpadded), with optional truth.
struct GraphPair {
  Graph g1;
  Graph g2;
  std::optional<std::int64_t> true_ged;
};

/// Training pairs padded to equal size, with W0 precomputed per pair.
class TrainCorpus {
 public:
  struct Entry {
    Graph g1;
    Graph g2;
    WeightMatrix w0;
  };

  TrainCorpus() = default;
  /// Throws std::invalid_argument on an empty pair list.
  explicit TrainCorpus(std::span<const GraphPair> pairs);

  int size() const { return static_cast<int>(entries_.size()); }
  const Entry& operator[](int t) const { return entries_[t]; }
  std::span<const Entry> entries() const { return entries_; }

  /// Padded node counts per pair.
  std::vector<int> pair_sizes() const;

  /// Empty bound table with per-pair sentinels for this corpus.
  BoundTable make_bound_table() const;

 private:
  std::vector<Entry> entries_;
};

}  // namespace gedprog
