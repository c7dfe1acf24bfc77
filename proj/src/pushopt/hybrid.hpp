#pragma once

#include <string>
#include <vector>

#include "pushopt/harness.hpp"

namespace pushopt {

struct PoolEntry {
  Program program;
  double fitness = 0.0;
  /// Provenance, e.g. the run directory or checkpoint file it came from.
  std::string source;
  std::string training_function;
  std::size_t rank = 0;
};

struct Pool {
  std::vector<PoolEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

class EmptyPool : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sorts candidates by (fitness, source) and keeps the first `n`; ranks are 1-based.
Pool build_pool_top(std::vector<PoolEntry> candidates, std::size_t n);
/// Keeps the candidates at `indices` in the given order.
Pool build_pool_explicit(const std::vector<PoolEntry>& candidates, const std::vector<std::size_t>& indices);

enum class AssignmentMode {
  /// A fresh uniform draw for every (member, move).
  PerMove,
  /// One draw per member, kept for the whole run.
  Persistent,
};

/// Heterogeneous swarm: identical to run_optimisation except the program each
/// member runs is drawn from the pool. Draws come from per-member streams split
/// off ProgramSelection, so the pool size never perturbs the other streams.
RunResult run_hybrid(const Pool& pool, const Problem& problem, const RunConfig& config,
                     AssignmentMode mode = AssignmentMode::PerMove, const MoveObserver& observer = {});

/// Returns the pool index member `member` runs at move `move` (1-based) under `mode`.
class PoolSelector {
 public:
  PoolSelector(std::size_t pool_size, std::size_t swarm_size, std::uint64_t seed, AssignmentMode mode);
  std::size_t next(std::size_t member);

 private:
  std::size_t pool_size_;
  AssignmentMode mode_;
  std::vector<Rng> streams_;
  std::vector<std::size_t> fixed_;
};

}  // namespace pushopt
