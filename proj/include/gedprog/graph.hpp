#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gedprog/weight_matrix.hpp"

namespace gedprog {

/// Interned node label. Non-negative values belong to the user alphabet;
/// kEpsilon marks dummy nodes introduced by padding.
using Label = std::int32_t;
inline constexpr Label kEpsilon = -1;

struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Labeled undirected simple graph on dense node ids 0..n-1.
///
/// Immutable after construction. Edges are normalized to u < v and sorted.
/// Construction rejects self-loops, duplicate edges, out-of-range endpoints,
/// and epsilon-labeled nodes that carry edges.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<Label> labels, std::vector<Edge> edges);

  /// Graph whose nodes all carry label 0.
  static Graph unlabeled(int n, std::vector<Edge> edges);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

  Label label(int v) const { return labels_[v]; }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool adjacent(int u, int v) const {
    return adj_[static_cast<std::size_t>(u) * labels_.size() + v] != 0;
  }
  int degree(int v) const { return static_cast<int>(neighbors_[v].size()); }
  std::span<const int> neighbors(int v) const { return neighbors_[v]; }

  /// Row-major n*n 0/1 adjacency matrix.
  std::span<const std::uint8_t> adjacency() const noexcept { return adj_; }

  /// Copy of this graph with `extra` isolated epsilon nodes appended.
  Graph padded(int extra) const;

  bool operator==(const Graph& other) const {
    return labels_ == other.labels_ && edges_ == other.edges_;
  }

 private:
  std::vector<Label> labels_;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<int>> neighbors_;
};

/// Bijection between the node sets of two equal-size graphs: forward[i] is
/// the image of node i.
class NodeMapping {
 public:
  NodeMapping() = default;
  /// Throws std::invalid_argument unless `forward` is a permutation of 0..n-1.
  explicit NodeMapping(std::vector<int> forward);

  static NodeMapping identity(int n);

  int size() const noexcept { return static_cast<int>(forward_.size()); }
  int operator[](int i) const { return forward_[i]; }
  std::span<const int> forward() const noexcept { return forward_; }

  bool operator==(const NodeMapping&) const = default;

 private:
  std::vector<int> forward_;
};

/// Non-negative integral edit count.
struct GedValue {
  std::int64_t value = 0;
  auto operator<=>(const GedValue&) const = default;
};

/// Pads the smaller graph with isolated epsilon nodes so both have
/// max(|V1|, |V2|) nodes. The larger graph is returned unchanged.
std::pair<Graph, Graph> pad_to_equal_size(const Graph& g1, const Graph& g2);

/// Edit cost induced by `pi`: node label mismatches plus edge mismatches over
/// unordered pairs. Graphs must already be padded to the mapping's size.
GedValue ged_under_mapping(const Graph& g1, const Graph& g2,
                           const NodeMapping& pi);

/// W0[i,j] = 1 when labels agree (epsilon only agrees with epsilon), else 0.
WeightMatrix initial_weight_matrix(const Graph& g1, const Graph& g2);

}  // namespace gedprog
