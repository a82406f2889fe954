#include "gedprog/selection.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace gedprog {

BoundTable::BoundTable(std::vector<std::int64_t> pair_sentinels)
    : sentinels_(std::move(pair_sentinels)) {}

BoundTable BoundTable::for_pair_sizes(std::span<const int> sizes) {
  std::vector<std::int64_t> s;
  s.reserve(sizes.size());
  for (int n : sizes) s.push_back(static_cast<std::int64_t>(n) * n + n);
  return BoundTable(std::move(s));
}

void BoundTable::add_row(ProgramId id, std::vector<std::int64_t> bounds) {
  if (rows_.count(id))
    throw std::invalid_argument("bound table: duplicate program id " +
                                std::to_string(id));
  if (bounds.size() != sentinels_.size())
    throw std::invalid_argument("bound table: row length mismatch");
  for (auto b : bounds)
    if (b < 0) throw std::invalid_argument("bound table: negative bound");
  rows_.emplace(id, std::move(bounds));
}

std::span<const std::int64_t> BoundTable::row(ProgramId id) const {
  auto it = rows_.find(id);
  if (it == rows_.end())
    throw std::out_of_range("bound table: unknown program id " +
                            std::to_string(id));
  return it->second;
}

std::vector<ProgramId> BoundTable::program_ids() const {
  std::vector<ProgramId> ids;
  ids.reserve(rows_.size());
  for (const auto& [id, row] : rows_) ids.push_back(id);
  return ids;
}

Ensemble Ensemble::empty(const BoundTable& table) {
  Ensemble e;
  e.pair_minima.assign(table.sentinels().begin(), table.sentinels().end());
  for (auto s : e.pair_minima) e.j_value += s;
  return e;
}

std::int64_t Ensemble::add(ProgramId id, const BoundTable& table) {
  const auto row = table.row(id);
  std::int64_t gain = 0;
  for (std::size_t t = 0; t < row.size(); ++t) {
    if (row[t] < pair_minima[t]) {
      gain += pair_minima[t] - row[t];
      pair_minima[t] = row[t];
    }
  }
  j_value -= gain;
  members.push_back(id);
  admission_gains.push_back(gain);
  return gain;
}

bool Ensemble::contains(ProgramId id) const {
  return std::find(members.begin(), members.end(), id) != members.end();
}

std::int64_t objective_j(std::span<const ProgramId> programs,
                         const BoundTable& table) {
  std::vector<std::int64_t> minima(table.sentinels().begin(),
                                   table.sentinels().end());
  for (ProgramId id : programs) {
    const auto row = table.row(id);
    for (std::size_t t = 0; t < row.size(); ++t)
      minima[t] = std::min(minima[t], row[t]);
  }
  std::int64_t j = 0;
  for (auto m : minima) j += m;
  return j;
}

std::int64_t marginal_gain(const Ensemble& ensemble, ProgramId p,
                           const BoundTable& table) {
  const auto row = table.row(p);
  std::int64_t gain = 0;
  for (std::size_t t = 0; t < row.size(); ++t)
    if (row[t] < ensemble.pair_minima[t])
      gain += ensemble.pair_minima[t] - row[t];
  return gain;
}

namespace {

std::vector<ProgramId> sorted_unique(std::span<const ProgramId> candidates,
                                     const BoundTable& table) {
  std::vector<ProgramId> ids(candidates.begin(), candidates.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (ProgramId id : ids) table.row(id);  // unknown ids throw
  return ids;
}

}  // namespace

Ensemble greedy_select_naive(std::span<const ProgramId> candidates, int budget,
                             const BoundTable& table) {
  if (budget < 1) throw std::invalid_argument("greedy_select: budget < 1");
  std::vector<ProgramId> remaining = sorted_unique(candidates, table);
  Ensemble e = Ensemble::empty(table);
  while (static_cast<int>(e.members.size()) < budget && !remaining.empty()) {
    std::size_t best = 0;
    std::int64_t best_gain = -1;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      const auto g = marginal_gain(e, remaining[k], table);
      if (g > best_gain) {  // ascending ids: first max wins ties
        best_gain = g;
        best = k;
      }
    }
    e.add(remaining[best], table);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return e;
}

Ensemble greedy_select(std::span<const ProgramId> candidates, int budget,
                       const BoundTable& table) {
  if (budget < 1) throw std::invalid_argument("greedy_select: budget < 1");
  const std::vector<ProgramId> ids = sorted_unique(candidates, table);
  Ensemble e = Ensemble::empty(table);

  // Entries carry a gain that upper-bounds the current one (submodularity).
  // Higher gain first; among equal gains the lower id first.
  struct Entry {
    std::int64_t gain;
    ProgramId id;
    std::size_t round;  // ensemble size when `gain` was computed
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.id > b.id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (ProgramId id : ids) heap.push({marginal_gain(e, id, table), id, 0});

  while (static_cast<int>(e.members.size()) < budget && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.round == e.members.size()) {
      e.add(top.id, table);
      continue;
    }
    top.gain = marginal_gain(e, top.id, table);
    top.round = e.members.size();
    if (heap.empty() || !worse(top, heap.top())) {
      e.add(top.id, table);
    } else {
      heap.push(top);
    }
  }
  return e;
}

}  // namespace gedprog
