#include "pushopt/hybrid.hpp"

#include <algorithm>

namespace pushopt {

Pool build_pool_top(std::vector<PoolEntry> candidates, std::size_t n) {
  if (candidates.empty() || n == 0) throw EmptyPool("pool selection is empty");
  std::stable_sort(candidates.begin(), candidates.end(), [](const PoolEntry& a, const PoolEntry& b) {
    if (a.fitness != b.fitness) return a.fitness < b.fitness;
    return a.source < b.source;
  });
  if (candidates.size() > n) candidates.resize(n);
  Pool pool{std::move(candidates)};
  for (std::size_t i = 0; i < pool.entries.size(); ++i) pool.entries[i].rank = i + 1;
  return pool;
}

Pool build_pool_explicit(const std::vector<PoolEntry>& candidates, const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw EmptyPool("pool selection is empty");
  Pool pool;
  for (std::size_t i : indices) {
    if (i >= candidates.size()) throw std::out_of_range("pool index out of range");
    pool.entries.push_back(candidates[i]);
    pool.entries.back().rank = pool.entries.size();
  }
  return pool;
}

PoolSelector::PoolSelector(std::size_t pool_size, std::size_t swarm_size, std::uint64_t seed,
                           AssignmentMode mode)
    : pool_size_(pool_size), mode_(mode) {
  if (pool_size == 0) throw EmptyPool("pool is empty");
  streams_.reserve(swarm_size);
  for (std::size_t p = 0; p < swarm_size; ++p) {
    streams_.emplace_back(derive_seed(seed, Stream::ProgramSelection, {p}));
  }
  if (mode_ == AssignmentMode::Persistent) {
    for (auto& s : streams_) fixed_.push_back(s.index(pool_size_));
  }
}

std::size_t PoolSelector::next(std::size_t member) {
  if (mode_ == AssignmentMode::Persistent) return fixed_.at(member);
  return streams_.at(member).index(pool_size_);
}

RunResult run_hybrid(const Pool& pool, const Problem& problem, const RunConfig& config, AssignmentMode mode,
                     const MoveObserver& observer) {
  if (pool.empty()) throw EmptyPool("pool is empty");
  PoolSelector selector(pool.size(), config.swarm_size, config.seed, mode);
  // the first program seeds member state; each move then runs a drawn program
  Swarm swarm = init_swarm(pool.entries.front().program, problem, config);
  const ProgramChooser choose = [&](std::size_t member, std::size_t) {
    return &pool.entries[selector.next(member)].program;
  };
  for (std::size_t m = 1; m <= config.moves; ++m) step_swarm(swarm, problem, m, choose, observer);
  return finish(swarm);
}

}  // namespace pushopt
