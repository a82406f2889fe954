#include "gedprog/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gedprog {

WeightMatrix WeightMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const int cols = static_cast<int>(rows.front().size());
  WeightMatrix w(static_cast<int>(rows.size()), cols);
  for (int i = 0; i < w.rows(); ++i) {
    if (static_cast<int>(rows[i].size()) != cols)
      throw std::invalid_argument("ragged weight matrix rows");
    std::copy(rows[i].begin(), rows[i].end(),
              w.data().begin() + static_cast<std::ptrdiff_t>(i) * cols);
  }
  return w;
}

Graph::Graph(std::vector<Label> labels, std::vector<Edge> edges)
    : labels_(std::move(labels)) {
  const int n = size();
  for (Label l : labels_)
    if (l < kEpsilon) throw std::invalid_argument("negative node label");

  for (Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::invalid_argument("edge endpoint out of range: (" +
                                  std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
    if (e.u == e.v)
      throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge");
  edges_ = std::move(edges);

  adj_.assign(static_cast<std::size_t>(n) * n, 0);
  neighbors_.assign(n, {});
  for (const Edge& e : edges_) {
    if (labels_[e.u] == kEpsilon || labels_[e.v] == kEpsilon)
      throw std::invalid_argument("epsilon-labeled node with incident edge");
    adj_[static_cast<std::size_t>(e.u) * n + e.v] = 1;
    adj_[static_cast<std::size_t>(e.v) * n + e.u] = 1;
    neighbors_[e.u].push_back(e.v);
    neighbors_[e.v].push_back(e.u);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

Graph Graph::unlabeled(int n, std::vector<Edge> edges) {
  return Graph(std::vector<Label>(n, 0), std::move(edges));
}

Graph Graph::padded(int extra) const {
  if (extra <= 0) return *this;
  std::vector<Label> labels = labels_;
  labels.insert(labels.end(), extra, kEpsilon);
  return Graph(std::move(labels), edges_);
}

NodeMapping::NodeMapping(std::vector<int> forward)
    : forward_(std::move(forward)) {
  const int n = size();
  std::vector<char> seen(n, 0);
  for (int x : forward_) {
    if (x < 0 || x >= n || seen[x])
      throw std::invalid_argument("node mapping is not a permutation");
    seen[x] = 1;
  }
}

NodeMapping NodeMapping::identity(int n) {
  std::vector<int> f(n);
  std::iota(f.begin(), f.end(), 0);
  return NodeMapping(std::move(f));
}

std::pair<Graph, Graph> pad_to_equal_size(const Graph& g1, const Graph& g2) {
  const int n = std::max(g1.size(), g2.size());
  return {g1.padded(n - g1.size()), g2.padded(n - g2.size())};
}

GedValue ged_under_mapping(const Graph& g1, const Graph& g2,
                           const NodeMapping& pi) {
  const int n = g1.size();
  if (g2.size() != n || pi.size() != n)
    throw std::invalid_argument(
        "ged_under_mapping: graphs and mapping must have equal size");
  std::int64_t cost = 0;
  for (int v = 0; v < n; ++v) cost += g1.label(v) != g2.label(pi[v]);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      cost += g1.adjacent(u, v) != g2.adjacent(pi[u], pi[v]);
  return {cost};
}

WeightMatrix initial_weight_matrix(const Graph& g1, const Graph& g2) {
  WeightMatrix w(g1.size(), g2.size());
  for (int i = 0; i < g1.size(); ++i)
    for (int j = 0; j < g2.size(); ++j)
      w(i, j) = g1.label(i) == g2.label(j) ? 1.0 : 0.0;
  return w;
}

}  // namespace gedprog
