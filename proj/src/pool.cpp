#include "gedprog/pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gedprog {

Pool::Pool(PoolConfig config)
    : config_(config), islands_(std::max(1, config.islands)), rng_(config.seed) {}

void Pool::place(const PoolEntry& e) {
  Island& island = islands_[e.island];
  island.members.push_back(e.program.id);
  island.clusters[e.score].push_back(e.program.id);
}

int Pool::register_program(PriorityProgram p, std::int64_t score) {
  if (entries_.count(p.id))
    throw std::invalid_argument("pool: duplicate program id " +
                                std::to_string(p.id));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(islands_.size()) - 1);
  const int island = pick(rng_);
  next_id_ = std::max(next_id_, p.id + 1);
  PoolEntry e{std::move(p), score, island, 0};
  e.origin = e.program.id;
  place(e);
  entries_.emplace(e.program.id, std::move(e));
  ++registrations_;
  return island;
}

const PoolEntry& Pool::entry(ProgramId id) const {
  auto it = entries_.find(id);
  if (it == entries_.end())
    throw std::out_of_range("pool: unknown program id " + std::to_string(id));
  return it->second;
}

std::vector<double> Pool::cluster_probabilities(int island) const {
  const auto& clusters = islands_.at(island).clusters;
  std::vector<double> probs;
  if (clusters.empty()) return probs;
  const double top = static_cast<double>(clusters.rbegin()->first);
  probs.reserve(clusters.size());
  for (const auto& [score, ids] : clusters)
    probs.push_back(std::exp((static_cast<double>(score) - top) /
                             config_.temperature));
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= total;
  return probs;
}

ProgramId Pool::best_program(int island) const {
  const Island& isl = islands_.at(island);
  if (isl.empty()) throw std::logic_error("pool: best_program of empty island");
  const auto& top = isl.clusters.rbegin()->second;
  return *std::min_element(top.begin(), top.end(), [&](ProgramId a, ProgramId b) {
    const auto la = entries_.at(a).program.length;
    const auto lb = entries_.at(b).program.length;
    return la != lb ? la < lb : a < b;
  });
}

std::vector<ScoredProgram> Pool::sample_context(int k) {
  std::vector<int> non_empty;
  for (int i = 0; i < static_cast<int>(islands_.size()); ++i)
    if (!islands_[i].empty()) non_empty.push_back(i);
  if (non_empty.empty()) throw std::logic_error("pool: sample from empty pool");

  std::uniform_int_distribution<std::size_t> pick_island(0, non_empty.size() - 1);
  const int island = non_empty[pick_island(rng_)];
  const auto probs = cluster_probabilities(island);
  std::vector<const std::vector<ProgramId>*> clusters;
  for (const auto& [score, ids] : islands_[island].clusters)
    clusters.push_back(&ids);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ScoredProgram> out;
  out.reserve(k);
  for (int slot = 0; slot < k; ++slot) {
    const double u = unit(rng_);
    std::size_t c = 0;
    double acc = probs[0];
    while (c + 1 < probs.size() && u >= acc) acc += probs[++c];

    const auto& ids = *clusters[c];
    const ProgramId chosen =
        *std::min_element(ids.begin(), ids.end(), [&](ProgramId a, ProgramId b) {
          const auto la = entries_.at(a).program.length;
          const auto lb = entries_.at(b).program.length;
          return la != lb ? la < lb : a < b;
        });
    const PoolEntry& e = entries_.at(chosen);
    out.push_back({e.program, e.score});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredProgram& a, const ScoredProgram& b) {
                     return a.score < b.score;
                   });
  return out;
}

void Pool::remove_island_members(int island) {
  for (ProgramId id : islands_[island].members) entries_.erase(id);
  islands_[island] = Island{};
}

void Pool::cull_islands() {
  const int s = static_cast<int>(islands_.size());
  std::vector<int> order(s);
  std::iota(order.begin(), order.end(), 0);
  auto best_or_min = [&](int i) {
    return islands_[i].best_score().value_or(
        std::numeric_limits<std::int64_t>::min());
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return best_or_min(a) < best_or_min(b); });

  const int culled = s / 2;
  for (int r = 0; r < culled; ++r) remove_island_members(order[r]);

  // Survivors by descending best score, ties to lower index.
  std::vector<int> donors;
  for (int r = s - 1; r >= culled; --r)
    if (!islands_[order[r]].empty()) donors.push_back(order[r]);
  std::stable_sort(donors.begin(), donors.end(), [&](int a, int b) {
    if (best_or_min(a) != best_or_min(b)) return best_or_min(a) > best_or_min(b);
    return a < b;
  });
  if (donors.empty()) return;

  std::size_t next_donor = 0;
  for (int i = 0; i < s; ++i) {
    if (!islands_[i].empty()) continue;
    const PoolEntry& src = entries_.at(best_program(donors[next_donor]));
    next_donor = (next_donor + 1) % donors.size();
    PoolEntry copy = src;
    copy.program.id = allocate_id();
    copy.island = i;
    place(copy);
    entries_.emplace(copy.program.id, std::move(copy));
  }
}

bool Pool::cull_due() const {
  return config_.cull_period > 0 && registrations_ > 0 &&
         registrations_ % config_.cull_period == 0;
}

Pool::State Pool::state() const {
  std::ostringstream rng;
  rng << rng_;
  return {entries_, next_id_, registrations_, rng.str()};
}

Pool Pool::restore(PoolConfig config, const State& state) {
  Pool pool(config);
  pool.entries_ = state.entries;
  pool.next_id_ = state.next_id;
  pool.registrations_ = state.registrations;
  std::istringstream rng(state.rng_state);
  rng >> pool.rng_;
  for (const auto& [id, e] : pool.entries_) {
    if (e.island < 0 || e.island >= static_cast<int>(pool.islands_.size()))
      throw std::invalid_argument("pool state: island index out of range");
    pool.place(e);
  }
  return pool;
}

}  // namespace gedprog
