#include "gedprog/corpus.hpp"

#include <stdexcept>

namespace gedprog {

TrainCorpus::TrainCorpus(std::span<const GraphPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("training corpus is empty");
  entries_.reserve(pairs.size());
  for (const GraphPair& p : pairs) {
    auto [g1, g2] = pad_to_equal_size(p.g1, p.g2);
    WeightMatrix w0 = initial_weight_matrix(g1, g2);
    entries_.push_back({std::move(g1), std::move(g2), std::move(w0)});
  }
}

std::vector<int> TrainCorpus::pair_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(entries_.size());
  for (const auto& e : entries_) sizes.push_back(e.g1.size());
  return sizes;
}

BoundTable TrainCorpus::make_bound_table() const {
  const auto sizes = pair_sizes();
  return BoundTable::for_pair_sizes(sizes);
}

}  // namespace gedprog
