#pragma once

#include "gedprog/graph.hpp"

namespace gedprog {

inline constexpr int kDefaultExactNodeLimit = 10;

/// Largest padded size at which exact_ged enumerates all n! mappings instead
/// of running branch and bound.
inline constexpr int kEnumerationCutoff = 8;

struct ExactGed {
  GedValue distance;
  NodeMapping mapping;  ///< lexicographically smallest optimal mapping
};

/// Exact graph edit distance. Pads internally; the returned mapping is over
/// the padded node sets. Throws std::length_error when the padded size
/// exceeds `node_limit`.
ExactGed exact_ged(const Graph& g1, const Graph& g2,
                   int node_limit = kDefaultExactNodeLimit);

/// Full enumeration over all permutations. Same contract as exact_ged.
ExactGed exact_ged_enumerate(const Graph& g1, const Graph& g2,
                             int node_limit = kDefaultExactNodeLimit);

/// Depth-first branch and bound. Same contract as exact_ged.
ExactGed exact_ged_branch_and_bound(const Graph& g1, const Graph& g2,
                                    int node_limit = kDefaultExactNodeLimit);

}  // namespace gedprog
