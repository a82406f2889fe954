#include "gedprog/toy_corpus.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "gedprog/exact_ged.hpp"
#include "gedprog/kernels.hpp"

namespace gedprog {

namespace {

using Adj = std::vector<std::vector<char>>;

Adj to_adj(const Graph& g) {
  Adj a(g.size(), std::vector<char>(g.size(), 0));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = 1;
  return a;
}

Graph from_adj(const std::vector<Label>& labels, const Adj& a) {
  std::vector<Edge> edges;
  const int n = static_cast<int>(labels.size());
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (a[u][v]) edges.push_back({u, v});
  return Graph(labels, std::move(edges));
}

int pick(std::mt19937_64& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

// Connected backbone with bounded degree, then a few ring closures.
Graph molecule_like(int n, std::span<const Label> alphabet,
                    std::mt19937_64& rng) {
  std::vector<double> weights(alphabet.size(), 1.0);
  weights[0] = 6.0;
  for (std::size_t k = 1; k < std::min<std::size_t>(3, weights.size()); ++k)
    weights[k] = 2.0;
  std::discrete_distribution<int> label_dist(weights.begin(), weights.end());
  std::vector<Label> labels(n);
  for (auto& l : labels) l = alphabet[label_dist(rng)];
  Adj a(n, std::vector<char>(n, 0));
  std::vector<int> deg(n, 0);
  for (int v = 1; v < n; ++v) {
    int u = pick(rng, v);
    for (int tries = 0; deg[u] >= 4 && tries < 8; ++tries) u = pick(rng, v);
    a[u][v] = a[v][u] = 1;
    ++deg[u];
    ++deg[v];
  }
  std::bernoulli_distribution ring(0.15);
  for (int u = 0; u < n; ++u)
    for (int v = u + 2; v < n; ++v)
      if (!a[u][v] && deg[u] < 4 && deg[v] < 4 && ring(rng)) {
        a[u][v] = a[v][u] = 1;
        ++deg[u];
        ++deg[v];
      }
  return from_adj(labels, a);
}

}  // namespace

std::string_view to_string(ToyFamily f) {
  switch (f) {
    case ToyFamily::labeled: return "labeled";
    case ToyFamily::dense: return "dense";
    case ToyFamily::sparse: return "sparse";
  }
  return "?";
}

ToyFamily parse_toy_family(std::string_view name) {
  for (auto f : {ToyFamily::labeled, ToyFamily::dense, ToyFamily::sparse})
    if (name == to_string(f)) return f;
  throw std::invalid_argument("unknown corpus family: " + std::string(name));
}

Graph random_graph(int n, double p, std::span<const Label> labels,
                   std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  std::vector<Label> ls(n);
  for (auto& l : ls) l = labels[pick(rng, static_cast<int>(labels.size()))];
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (edge(rng)) edges.push_back({u, v});
  return Graph(std::move(ls), std::move(edges));
}

Graph perturb_graph(const Graph& g, int edits, std::span<const Label> labels,
                    int max_nodes, std::mt19937_64& rng) {
  std::vector<Label> ls(g.labels().begin(), g.labels().end());
  Adj a = to_adj(g);
  const bool relabel = labels.size() > 1;
  for (int e = 0; e < edits; ++e) {
    const int n = static_cast<int>(ls.size());
    switch (pick(rng, 5)) {
      case 0:
        if (relabel && n > 0) {
          ls[pick(rng, n)] = labels[pick(rng, static_cast<int>(labels.size()))];
          break;
        }
        [[fallthrough]];
      case 1:
        if (n >= 2) {
          int u = pick(rng, n), v = pick(rng, n);
          if (u != v) a[u][v] = a[v][u] = !a[u][v];
        }
        break;
      case 2:
        if (n >= 2) {
          int u = pick(rng, n), v = pick(rng, n);
          if (u != v) a[u][v] = a[v][u] = 1;
        }
        break;
      case 3:
        if (n > 2) {
          const int v = pick(rng, n);
          ls.erase(ls.begin() + v);
          a.erase(a.begin() + v);
          for (auto& row : a) row.erase(row.begin() + v);
        }
        break;
      default:
        if (n < max_nodes) {
          ls.push_back(labels[pick(rng, static_cast<int>(labels.size()))]);
          for (auto& row : a) row.push_back(0);
          a.emplace_back(n + 1, 0);
          if (n > 0) {
            const int u = pick(rng, n);
            a[u][n] = a[n][u] = 1;
          }
        }
        break;
    }
  }
  const int n = static_cast<int>(ls.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Label> pl(n);
  Adj pa(n, std::vector<char>(n, 0));
  for (int u = 0; u < n; ++u) {
    pl[perm[u]] = ls[u];
    for (int v = 0; v < n; ++v) pa[perm[u]][perm[v]] = a[u][v];
  }
  return from_adj(pl, pa);
}

std::vector<GraphPair> make_toy_corpus(const ToyCorpusConfig& c) {
  if (c.pairs < 1 || c.min_nodes < 1 || c.max_nodes < c.min_nodes ||
      c.alphabet.empty())
    throw std::invalid_argument("bad toy corpus config");
  std::mt19937_64 rng(c.seed);
  std::vector<Label> unlabeled{c.alphabet.front()};
  std::span<const Label> labels =
      c.family == ToyFamily::labeled ? std::span<const Label>(c.alphabet)
                                     : std::span<const Label>(unlabeled);
  std::vector<GraphPair> pairs;
  for (int t = 0; t < c.pairs; ++t) {
    const int n = c.min_nodes + pick(rng, c.max_nodes - c.min_nodes + 1);
    Graph g1 = c.family == ToyFamily::labeled ? molecule_like(n, labels, rng)
               : c.family == ToyFamily::dense ? random_graph(n, 0.6, labels, rng)
                                              : random_graph(n, 0.2, labels, rng);
    const int edits = 1 + pick(rng, c.max_edits);
    Graph g2 = perturb_graph(g1, edits, labels, c.max_nodes, rng);
    pairs.push_back({std::move(g1), std::move(g2), std::nullopt});
  }
  const int limit = std::max(c.max_nodes, kDefaultExactNodeLimit);
  auto truths = exact_ged_batch(pairs, limit, ExecPolicy::parallel);
  for (std::size_t t = 0; t < pairs.size(); ++t)
    pairs[t].true_ged = truths[t].distance.value;
  return pairs;
}

}  // namespace gedprog
