#include "gedprog/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gedprog {
namespace {

void require_square_finite(const WeightMatrix& w, const char* who) {
  if (!w.square())
    throw std::invalid_argument(std::string(who) + ": weight matrix not square");
  if (!w.all_finite())
    throw std::invalid_argument(std::string(who) +
                                ": weight matrix has non-finite entries");
}

}  // namespace

std::string_view to_string(MatcherKind kind) {
  switch (kind) {
    case MatcherKind::hungarian: return "hungarian";
    case MatcherKind::greedy: return "greedy";
    case MatcherKind::neighbor_biased: return "neighbor_biased";
  }
  return "unknown";
}

std::optional<MatcherKind> parse_matcher_kind(std::string_view name) {
  if (name == "hungarian") return MatcherKind::hungarian;
  if (name == "greedy") return MatcherKind::greedy;
  if (name == "neighbor_biased" || name == "neighbor-biased")
    return MatcherKind::neighbor_biased;
  return std::nullopt;
}

// Shortest augmenting path formulation on the cost matrix (max - w), with
// row/column potentials. Indices are 1-based internally; column 0 is the
// virtual source.
NodeMapping hungarian_match(const WeightMatrix& w) {
  require_square_finite(w, "hungarian_match");
  const int n = w.rows();
  if (n == 0) return NodeMapping::identity(0);

  const double top = *std::max_element(w.data().begin(), w.data().end());
  auto cost = [&](int i, int j) { return top - w(i, j); };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> owner(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> forward(n, -1);
  for (int j = 1; j <= n; ++j) forward[owner[j] - 1] = j - 1;
  return NodeMapping(std::move(forward));
}

NodeMapping greedy_match(const WeightMatrix& w) {
  require_square_finite(w, "greedy_match");
  const int n = w.rows();
  std::vector<int> order(static_cast<std::size_t>(n) * n);
  std::iota(order.begin(), order.end(), 0);
  // Flat index i*n+j already encodes the (row, col) tie-break.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return w.data()[a] > w.data()[b];
  });

  std::vector<int> forward(n, -1);
  std::vector<char> col_taken(n, 0);
  int assigned = 0;
  for (int flat : order) {
    const int i = flat / n, j = flat % n;
    if (forward[i] != -1 || col_taken[j]) continue;
    forward[i] = j;
    col_taken[j] = 1;
    if (++assigned == n) break;
  }
  return NodeMapping(std::move(forward));
}

NodeMapping neighbor_biased_match(const WeightMatrix& w, const Graph& g1,
                                  const Graph& g2, double beta) {
  require_square_finite(w, "neighbor_biased_match");
  const int n = w.rows();
  if (g1.size() != n || g2.size() != n)
    throw std::invalid_argument(
        "neighbor_biased_match: graph sizes do not match weight matrix");

  // bonus[i*n+j]: matched pairs (i', j') with i' ~ i and j' ~ j.
  std::vector<int> bonus(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> forward(n, -1);
  std::vector<char> col_taken(n, 0);

  for (int step = 0; step < n; ++step) {
    int best_i = -1, best_j = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (forward[i] != -1) continue;
      for (int j = 0; j < n; ++j) {
        if (col_taken[j]) continue;
        const double eff = w(i, j) + beta * bonus[i * n + j];
        if (eff > best) {
          best = eff;
          best_i = i;
          best_j = j;
        }
      }
    }
    forward[best_i] = best_j;
    col_taken[best_j] = 1;
    for (int a : g1.neighbors(best_i)) {
      if (forward[a] != -1) continue;
      for (int b : g2.neighbors(best_j))
        if (!col_taken[b]) ++bonus[a * n + b];
    }
  }
  return NodeMapping(std::move(forward));
}

NodeMapping match(const WeightMatrix& w, const Graph& g1, const Graph& g2,
                  const MatcherConfig& config) {
  switch (config.kind) {
    case MatcherKind::hungarian: return hungarian_match(w);
    case MatcherKind::greedy: return greedy_match(w);
    case MatcherKind::neighbor_biased:
      return neighbor_biased_match(w, g1, g2, config.beta);
  }
  throw std::invalid_argument("unknown matcher kind");
}

double assignment_weight(const WeightMatrix& w, const NodeMapping& pi) {
  double total = 0.0;
  for (int i = 0; i < pi.size(); ++i) total += w(i, pi[i]);
  return total;
}

UpperBound ged_upper_bound(const Graph& g1, const Graph& g2,
                           const WeightMatrix& w, const MatcherConfig& config) {
  if (g1.size() != g2.size() || w.rows() != g1.size() ||
      w.cols() != g2.size())
    throw std::invalid_argument(
        "ged_upper_bound: padded graphs and weight matrix dimensions differ");
  NodeMapping pi = match(w, g1, g2, config);
  const GedValue cost = ged_under_mapping(g1, g2, pi);
  return {cost, std::move(pi)};
}

}  // namespace gedprog
