#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gedprog/corpus.hpp"
#include "gedprog/graph.hpp"

namespace gedprog {

enum class ToyFamily { labeled, dense, sparse };

std::string_view to_string(ToyFamily f);
/// Throws std::invalid_argument for unknown names.
ToyFamily parse_toy_family(std::string_view name);

struct ToyCorpusConfig {
  ToyFamily family = ToyFamily::labeled;
  int pairs = 50;
  int min_nodes = 4;
  int max_nodes = 8;
  int max_edits = 4;
  std::uint64_t seed = 1;
  /// Label ids for the labeled family, most common first. Unlabeled
  /// families use alphabet[0] for every node.
  std::vector<Label> alphabet = {0, 1, 2};
};

/// Random graph with n nodes, each edge present with probability p, labels
/// drawn uniformly from `labels`.
Graph random_graph(int n, double p, std::span<const Label> labels,
                   std::mt19937_64& rng);

/// Applies `edits` random edit operations (relabel, edge insert/delete, node
/// insert/delete) and shuffles node order.
Graph perturb_graph(const Graph& g, int edits, std::span<const Label> labels,
                    int max_nodes, std::mt19937_64& rng);

/// Seeded pairs (g1, edited and shuffled copy of g1) with exact truths.
std::vector<GraphPair> make_toy_corpus(const ToyCorpusConfig& config);

}  // namespace gedprog
