#pragma once

// Reference computations written straight from the definitions, sharing no
// code with the library. Slow on purpose.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "gedprog/graph.hpp"
#include "gedprog/weight_matrix.hpp"

namespace oracle {

struct PlainGraph {
  std::vector<int> labels;  // -1 marks a dummy
  std::vector<std::vector<int>> adj;
};

inline PlainGraph plain(const gedprog::Graph& g) {
  PlainGraph p;
  const int n = g.size();
  p.labels.assign(g.labels().begin(), g.labels().end());
  p.adj.assign(n, std::vector<int>(n, 0));
  for (auto e : g.edges()) p.adj[e.u][e.v] = p.adj[e.v][e.u] = 1;
  return p;
}

inline PlainGraph pad(PlainGraph g, int n) {
  const int old = static_cast<int>(g.labels.size());
  g.labels.resize(n, -1);
  g.adj.resize(n);
  for (auto& row : g.adj) row.resize(n, 0);
  for (int i = old; i < n; ++i) g.adj[i].assign(n, 0);
  return g;
}

// Label term plus half of the ordered-pair edge mismatches.
inline std::int64_t cost(const PlainGraph& a, const PlainGraph& b,
                         const std::vector<int>& pi) {
  const int n = static_cast<int>(pi.size());
  std::int64_t labels = 0, ordered = 0;
  for (int v = 0; v < n; ++v) labels += a.labels[v] != b.labels[pi[v]];
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      ordered += a.adj[u][v] != b.adj[pi[u]][pi[v]];
  return labels + ordered / 2;
}

inline std::int64_t ordered_edge_mismatches(const PlainGraph& a,
                                            const PlainGraph& b,
                                            const std::vector<int>& pi) {
  const int n = static_cast<int>(pi.size());
  std::int64_t ordered = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      ordered += a.adj[u][v] != b.adj[pi[u]][pi[v]];
  return ordered;
}

inline std::int64_t brute_ged(const gedprog::Graph& g1, const gedprog::Graph& g2) {
  const int n = std::max(g1.size(), g2.size());
  const PlainGraph a = pad(plain(g1), n), b = pad(plain(g2), n);
  std::vector<int> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  do best = std::min(best, cost(a, b, pi));
  while (std::next_permutation(pi.begin(), pi.end()));
  return best;
}

inline double brute_max_assignment(const gedprog::WeightMatrix& w) {
  const int n = w.rows();
  std::vector<int> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (int i = 0; i < n; ++i) s += w(i, pi[i]);
    best = std::max(best, s);
  } while (std::next_permutation(pi.begin(), pi.end()));
  return best;
}

using Rows = std::vector<std::vector<std::int64_t>>;

// J of a subset given by indices into `rows`; sentinel sum when empty.
inline std::int64_t j_of(const Rows& rows, const std::vector<int>& subset,
                         const std::vector<std::int64_t>& sentinels) {
  std::int64_t total = 0;
  for (std::size_t t = 0; t < sentinels.size(); ++t) {
    std::int64_t m = sentinels[t];
    for (int p : subset) m = std::min(m, rows[p][t]);
    total += m;
  }
  return total;
}

// Smallest J over all subsets of size exactly min(b, |rows|).
inline std::int64_t best_j(const Rows& rows, int b,
                           const std::vector<std::int64_t>& sentinels) {
  const int m = static_cast<int>(rows.size());
  const int k = std::min(b, m);
  std::vector<int> mask(m, 0);
  std::fill(mask.end() - k, mask.end(), 1);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  do {
    std::vector<int> subset;
    for (int i = 0; i < m; ++i)
      if (mask[i]) subset.push_back(i);
    best = std::min(best, j_of(rows, subset, sentinels));
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

inline gedprog::Graph random_graph(std::mt19937_64& rng, int n, double p,
                                   int alphabet) {
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> lab(0, std::max(0, alphabet - 1));
  std::vector<gedprog::Label> labels(n);
  for (auto& l : labels) l = lab(rng);
  std::vector<gedprog::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (edge(rng)) edges.push_back({u, v});
  return gedprog::Graph(std::move(labels), std::move(edges));
}

}  // namespace oracle
