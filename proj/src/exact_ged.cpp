#include "gedprog/exact_ged.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gedprog {
namespace {

std::pair<Graph, Graph> padded_within_limit(const Graph& g1, const Graph& g2,
                                            int node_limit) {
  const int n = std::max(g1.size(), g2.size());
  if (n > node_limit)
    throw std::length_error("exact GED refused: " + std::to_string(n) +
                            " nodes exceeds limit " +
                            std::to_string(node_limit));
  return pad_to_equal_size(g1, g2);
}

/// Labels of both graphs remapped onto 0..L-1.
struct DenseLabels {
  std::vector<int> first;
  std::vector<int> second;
  int alphabet = 0;
};

DenseLabels densify_labels(const Graph& g1, const Graph& g2) {
  std::map<Label, int> index;
  for (Label l : g1.labels()) index.emplace(l, 0);
  for (Label l : g2.labels()) index.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : index) id = next++;
  DenseLabels out;
  out.alphabet = next;
  for (Label l : g1.labels()) out.first.push_back(index[l]);
  for (Label l : g2.labels()) out.second.push_back(index[l]);
  return out;
}

/// Cost lower bound valid for every mapping: label multiset deficit plus the
/// edge-count difference.
std::int64_t global_lower_bound(const Graph& g1, const Graph& g2,
                                const DenseLabels& dl) {
  std::vector<int> c1(dl.alphabet, 0), c2(dl.alphabet, 0);
  for (int l : dl.first) ++c1[l];
  for (int l : dl.second) ++c2[l];
  std::int64_t common = 0;
  for (int l = 0; l < dl.alphabet; ++l) common += std::min(c1[l], c2[l]);
  return (g1.size() - common) + std::abs(g1.edge_count() - g2.edge_count());
}

class BranchAndBound {
 public:
  BranchAndBound(const Graph& g1, const Graph& g2)
      : g1_(g1), g2_(g2), n_(g1.size()), labels_(densify_labels(g1, g2)) {
    const auto un = static_cast<std::size_t>(n_);
    deg1_from_.assign(un * (un + 1), 0);
    for (int a = 0; a < n_; ++a)
      for (int d = 0; d <= n_; ++d) {
        int c = 0;
        for (int x : g1_.neighbors(a)) c += x >= d;
        deg1_from_[a * (un + 1) + d] = c;
      }
    internal1_.assign(un + 1, 0);
    for (int d = 0; d <= n_; ++d)
      for (const Edge& e : g1_.edges()) internal1_[d] += e.u >= d && e.v >= d;

    map1_.assign(un, -1);
    used2_.assign(un, 0);
    c1_.assign(labels_.alphabet, 0);
    c2_.assign(labels_.alphabet, 0);
    for (int l : labels_.first) ++c1_[l];
    for (int l : labels_.second) ++c2_[l];
    internal2_ = g2_.edge_count();
    deg2_unused_.resize(un);
    for (int j = 0; j < n_; ++j) deg2_unused_[j] = g2_.degree(j);

    best_cost_ = ged_under_mapping(g1_, g2_, NodeMapping::identity(n_)).value + 1;
  }

  ExactGed solve() {
    search(0, 0);
    return {{best_cost_}, NodeMapping(best_map_)};
  }

 private:
  std::int64_t lower_bound(int depth) const {
    std::int64_t common = 0;
    for (int l = 0; l < labels_.alphabet; ++l)
      common += std::min(c1_[l], c2_[l]);
    std::int64_t lb = (n_ - depth) - common;
    lb += std::abs(internal1_[depth] - internal2_);
    const auto stride = static_cast<std::size_t>(n_) + 1;
    for (int a = 0; a < depth; ++a)
      lb += std::abs(deg1_from_[a * stride + depth] - deg2_unused_[map1_[a]]);
    return lb;
  }

  void search(int depth, std::int64_t cost) {
    if (depth == n_) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_map_ = map1_;
      }
      return;
    }
    for (int j = 0; j < n_; ++j) {
      if (used2_[j]) continue;
      std::int64_t delta = labels_.first[depth] != labels_.second[j];
      for (int a = 0; a < depth; ++a)
        delta += g1_.adjacent(a, depth) != g2_.adjacent(map1_[a], j);

      assign(depth, j);
      if (cost + delta + lower_bound(depth + 1) < best_cost_)
        search(depth + 1, cost + delta);
      unassign(depth, j);
    }
  }

  void assign(int i, int j) {
    map1_[i] = j;
    used2_[j] = 1;
    --c1_[labels_.first[i]];
    --c2_[labels_.second[j]];
    internal2_ -= deg2_unused_[j];
    for (int x : g2_.neighbors(j)) --deg2_unused_[x];
  }

  void unassign(int i, int j) {
    for (int x : g2_.neighbors(j)) ++deg2_unused_[x];
    internal2_ += deg2_unused_[j];
    ++c2_[labels_.second[j]];
    ++c1_[labels_.first[i]];
    used2_[j] = 0;
    map1_[i] = -1;
  }

  const Graph& g1_;
  const Graph& g2_;
  int n_;
  DenseLabels labels_;

  std::vector<int> deg1_from_;  // [a][d]: neighbors of a with index >= d
  std::vector<int> internal1_;  // [d]: g1 edges with both ends >= d

  std::vector<int> map1_;
  std::vector<char> used2_;
  std::vector<int> c1_, c2_;
  int internal2_ = 0;
  std::vector<int> deg2_unused_;

  std::int64_t best_cost_;
  std::vector<int> best_map_;
};

}  // namespace

ExactGed exact_ged_enumerate(const Graph& g1, const Graph& g2,
                             int node_limit) {
  auto [p1, p2] = padded_within_limit(g1, g2, node_limit);
  const int n = p1.size();
  const std::int64_t floor = global_lower_bound(p1, p2, densify_labels(p1, p2));

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<int> best_perm = perm;
  do {
    std::int64_t cost = 0;
    for (int v = 0; v < n; ++v) cost += p1.label(v) != p2.label(perm[v]);
    for (int u = 0; u < n && cost < best; ++u)
      for (int v = u + 1; v < n; ++v)
        cost += p1.adjacent(u, v) != p2.adjacent(perm[u], perm[v]);
    if (cost < best) {
      best = cost;
      best_perm = perm;
      if (best == floor) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {{best}, NodeMapping(std::move(best_perm))};
}

ExactGed exact_ged_branch_and_bound(const Graph& g1, const Graph& g2,
                                    int node_limit) {
  auto [p1, p2] = padded_within_limit(g1, g2, node_limit);
  return BranchAndBound(p1, p2).solve();
}

ExactGed exact_ged(const Graph& g1, const Graph& g2, int node_limit) {
  if (std::max(g1.size(), g2.size()) <= std::min(node_limit, kEnumerationCutoff))
    return exact_ged_enumerate(g1, g2, node_limit);
  return exact_ged_branch_and_bound(g1, g2, node_limit);
}

}  // namespace gedprog
