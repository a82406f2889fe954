#pragma once

#include <string>
#include <string_view>

#include "gedprog/graph.hpp"
#include "gedprog/weight_matrix.hpp"

namespace gedprog {

inline constexpr std::string_view kZeroPriority = "zero_priority";
inline constexpr std::string_view kLabelPassthrough = "label_passthrough";
inline constexpr std::string_view kDegreeNeighbor = "degree_neighbor";

/// Coefficients of the degree-and-neighbor similarity family. For a node pair
/// with degrees di, dj:
///
///   degsim = 1 - |di - dj| / max(1, di, dj)
///   nbr    = mean of w0 over neighbor pairs (1 if both isolated, else 0 when
///            either side has no neighbors)
///   factor = nbr^neighbor_exponent * (min(di,dj) / max(1,di,dj))^scale_exponent
///   W      = (label_weight * w0 * (1 + degree_weight * degsim)
///             + neighbor_weight * factor) / (denom_offset + degsim)
///
/// The defaults reproduce the reference degree-neighbor heuristic.
struct DegreeNeighborParams {
  double label_weight = 2.0;
  double degree_weight = 1.0;
  double neighbor_weight = 1.0;
  double neighbor_exponent = 1.0;
  double scale_exponent = 1.0;
  double denom_offset = 3.0;

  bool operator==(const DegreeNeighborParams&) const = default;
};

WeightMatrix builtin_zero(const Graph& g1, const Graph& g2,
                          const WeightMatrix& w0);

WeightMatrix builtin_label_passthrough(const Graph& g1, const Graph& g2,
                                       const WeightMatrix& w0);

WeightMatrix builtin_degree_neighbor(const Graph& g1, const Graph& g2,
                                     const WeightMatrix& w0,
                                     const DegreeNeighborParams& params = {});

/// Python source equivalent to the named builtin, written against the
/// external program interface `priority(graph1, graph2, weights)`. This is the
/// text shown as prompt context and its length is the program length.
std::string builtin_python_source(std::string_view name,
                                  const DegreeNeighborParams& params = {});

bool is_builtin_name(std::string_view name);

}  // namespace gedprog
