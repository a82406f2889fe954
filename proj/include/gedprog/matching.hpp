#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gedprog/graph.hpp"
#include "gedprog/weight_matrix.hpp"

namespace gedprog {

enum class MatcherKind { hungarian, greedy, neighbor_biased };

std::string_view to_string(MatcherKind kind);
std::optional<MatcherKind> parse_matcher_kind(std::string_view name);

/// Matcher selection plus the neighbor-biased mapper's bias coefficient.
struct MatcherConfig {
  MatcherKind kind = MatcherKind::neighbor_biased;
  double beta = 1.0;
};

/// Maximum-weight perfect matching (Kuhn-Munkres, O(n^3)).
NodeMapping hungarian_match(const WeightMatrix& w);

/// Repeatedly takes the largest remaining entry whose row and column are both
/// free. Ties go to the lexicographically smallest (row, col).
NodeMapping greedy_match(const WeightMatrix& w);

/// Best-first matching where an unmatched pair (i, j) is scored as
///   w[i,j] + beta * #{matched (i', j') : i' ~ i in g1 and j' ~ j in g2}.
/// The first pick is therefore the plain max-weight pair.
NodeMapping neighbor_biased_match(const WeightMatrix& w, const Graph& g1,
                                  const Graph& g2, double beta = 1.0);

NodeMapping match(const WeightMatrix& w, const Graph& g1, const Graph& g2,
                  const MatcherConfig& config);

/// Sum of w[i, pi(i)].
double assignment_weight(const WeightMatrix& w, const NodeMapping& pi);

struct UpperBound {
  GedValue value;
  NodeMapping mapping;
};

/// Cost of the mapping the configured matcher derives from `w`. Any mapping's
/// cost upper-bounds the exact distance.
UpperBound ged_upper_bound(const Graph& g1, const Graph& g2,
                           const WeightMatrix& w, const MatcherConfig& config);

}  // namespace gedprog
