#include "gedprog/builtins.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <fmt/format.h>

namespace gedprog {
namespace {

// Shortest round-trip decimal, always spelled as a Python float literal.
std::string py_float(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

constexpr std::string_view kZeroSource =
    R"(def priority(graph1, graph2, weights):
  """Trivial baseline: every node pair is equally preferred."""
  n = max(len(graph1), len(graph2))
  return [[0.0] * n for _ in range(n)]
)";

constexpr std::string_view kPassthroughSource =
    R"(def priority(graph1, graph2, weights):
  """Label agreement only: returns the initial weight matrix."""
  return [[float(x) for x in row] for row in weights]
)";

// Placeholders {lw} {dw} {nw} {ne} {se} {do} are filled from the params.
constexpr std::string_view kDegreeNeighborTemplate =
    R"(def priority(graph1, graph2, weights):
  """Blends label agreement, normalized degree similarity and neighbor similarity."""
  n1 = len(graph1)
  n2 = len(graph2)
  n = max(n1, n2)
  refined = [[0.0] * n for _ in range(n)]
  for i in range(n1):
    for j in range(n2):
      node_similarity = weights[i][j]
      degree_i = sum(graph1[i])
      degree_j = sum(graph2[j])
      max_degree = max(1, degree_i, degree_j)
      degree_similarity = 1 - (abs(degree_i - degree_j) / max_degree)
      neighbors_i = [k for k in range(n1) if graph1[i][k]]
      neighbors_j = [l for l in range(n2) if graph2[j][l]]
      neighbor_similarity = 0.0
      pairs = 0
      for ni in neighbors_i:
        for nj in neighbors_j:
          neighbor_similarity += weights[ni][nj]
          pairs += 1
      if pairs > 0:
        neighbor_similarity /= pairs
      else:
        neighbor_similarity = 1.0 if (degree_i == 0 and degree_j == 0) else 0.0
      scale = min(degree_i, degree_j) / max(1, max(degree_i, degree_j))
      factor = (neighbor_similarity ** {ne}) * (scale ** {se})
      refined[i][j] = (({lw} * node_similarity * (1 + {dw} * degree_similarity) + {nw} * factor)
                       / ({do} + degree_similarity))
  return refined
)";

}  // namespace

bool is_builtin_name(std::string_view name) {
  return name == kZeroPriority || name == kLabelPassthrough ||
         name == kDegreeNeighbor;
}

WeightMatrix builtin_zero(const Graph&, const Graph&, const WeightMatrix& w0) {
  return WeightMatrix(w0.rows(), w0.cols(), 0.0);
}

WeightMatrix builtin_label_passthrough(const Graph&, const Graph&,
                                       const WeightMatrix& w0) {
  return w0;
}

WeightMatrix builtin_degree_neighbor(const Graph& g1, const Graph& g2,
                                     const WeightMatrix& w0,
                                     const DegreeNeighborParams& p) {
  WeightMatrix out(w0.rows(), w0.cols(), 0.0);
  const int n1 = std::min(g1.size(), w0.rows());
  const int n2 = std::min(g2.size(), w0.cols());
  for (int i = 0; i < n1; ++i) {
    const int di = g1.degree(i);
    for (int j = 0; j < n2; ++j) {
      const int dj = g2.degree(j);
      const double node_similarity = w0(i, j);
      const double max_degree = std::max({1, di, dj});
      const double degree_similarity = 1 - (std::abs(di - dj) / max_degree);

      double neighbor_similarity = 0.0;
      int pairs = 0;
      for (int a : g1.neighbors(i))
        for (int b : g2.neighbors(j)) {
          neighbor_similarity += w0(a, b);
          ++pairs;
        }
      if (pairs > 0)
        neighbor_similarity /= pairs;
      else
        neighbor_similarity = (di == 0 && dj == 0) ? 1.0 : 0.0;

      const double scale =
          static_cast<double>(std::min(di, dj)) / std::max({1, di, dj});
      const double factor = std::pow(neighbor_similarity, p.neighbor_exponent) *
                            std::pow(scale, p.scale_exponent);
      out(i, j) = (p.label_weight * node_similarity *
                       (1 + p.degree_weight * degree_similarity) +
                   p.neighbor_weight * factor) /
                  (p.denom_offset + degree_similarity);
    }
  }
  return out;
}

std::string builtin_python_source(std::string_view name,
                                  const DegreeNeighborParams& p) {
  if (name == kZeroPriority) return std::string(kZeroSource);
  if (name == kLabelPassthrough) return std::string(kPassthroughSource);
  if (name == kDegreeNeighbor)
    return fmt::format(fmt::runtime(kDegreeNeighborTemplate),
                       fmt::arg("lw", py_float(p.label_weight)),
                       fmt::arg("dw", py_float(p.degree_weight)),
                       fmt::arg("nw", py_float(p.neighbor_weight)),
                       fmt::arg("ne", py_float(p.neighbor_exponent)),
                       fmt::arg("se", py_float(p.scale_exponent)),
                       fmt::arg("do", py_float(p.denom_offset)));
  throw std::invalid_argument("unknown builtin program: " + std::string(name));
}

}  // namespace gedprog
