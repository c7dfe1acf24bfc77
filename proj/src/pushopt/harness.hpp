#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "pushopt/problems.hpp"
#include "pushopt/push/program.hpp"
#include "pushopt/push/state.hpp"

namespace pushopt {

/// Value fed back on the float stack after an out-of-bounds move. The largest
/// finite double, so float arithmetic on it follows the usual no-op rules.
inline constexpr double kOutOfBoundsValue = std::numeric_limits<double>::max();

/// What the harness places on the input stack at seeding.
enum class InputMode {
  /// Two floats: the lowest lower bound and the highest upper bound.
  ScalarBounds,
  /// All per-axis lower bounds followed by all per-axis upper bounds.
  PerAxisBounds,
};

struct RunConfig {
  std::size_t swarm_size = 1;
  std::size_t moves = 1000;
  std::size_t execution_limit = kDefaultExecutionLimit;
  bool record_trajectory = false;
  std::uint64_t seed = 0;
  InputMode input_mode = InputMode::ScalarBounds;
  RandomRanges ranges;
  /// When set, every member tallies executed instructions here (serial use only).
  std::vector<std::uint64_t>* exec_counts = nullptr;

  std::size_t nominal_budget() const { return swarm_size * moves; }
};

struct SwarmMember {
  std::size_t index = 0;
  Program program;
  State state;
  Vector point;
  double value = 0.0;
  Vector best;
  double bestval = 0.0;
};

struct TrajectoryRecord {
  std::size_t move = 0;  // 0 marks the initial evaluation
  std::size_t member = 0;
  Vector point;
  double value = 0.0;  // kOutOfBoundsValue when out of bounds
  bool in_bounds = true;
  double pbest = 0.0;  // swarm best after this record
};

struct RunResult {
  double pbest = std::numeric_limits<double>::infinity();
  Vector pbest_point;
  std::size_t evaluations = 0;
  std::size_t moves_executed = 0;
  /// pbest after initialisation (index 0) and after each move.
  std::vector<double> pbest_history;
  /// Initial evaluations (move 0) followed by one record per member-move.
  std::vector<TrajectoryRecord> trajectory;
};

/// Observes every member-move after the harness has pushed its feedback.
struct MoveEvent {
  std::size_t move;
  const SwarmMember& member;
  bool in_bounds;
  bool improved;
  std::size_t steps;
};
using MoveObserver = std::function<void(const MoveEvent&)>;

struct Swarm {
  std::vector<SwarmMember> members;
  double pbest = std::numeric_limits<double>::infinity();
  std::size_t pbest_index = 0;
  std::size_t evaluations = 0;
  std::size_t moves_executed = 0;
  RunConfig config;
  RunResult result;
};

/// Seeds every member: fresh program copy, cleared stacks, random initial
/// point (one evaluation each), then point/value/true/bounds on the stacks.
Swarm init_swarm(const Program& program, const Problem& problem, const RunConfig& config);

/// Chooses the program member `member` runs at move `move`. Null keeps the member's current program.
using ProgramChooser = std::function<const Program*(std::size_t member, std::size_t move)>;

/// One outer iteration: every member proposes one point against a snapshot of
/// the swarm taken before anyone moves.
void step_swarm(Swarm& swarm, const Problem& problem, std::size_t move, const ProgramChooser& choose = {},
                const MoveObserver& observer = {});

/// Finalises and returns the result of a swarm that has been stepped.
RunResult finish(Swarm& swarm);

RunResult run_optimisation(const Program& program, const Problem& problem, const RunConfig& config,
                           const MoveObserver& observer = {});

/// Generates problem instances for repeated runs.
struct ProblemFamily {
  std::shared_ptr<const BenchmarkFunction> function;
  /// When true each repeat draws a fresh random instance transform.
  bool random_transform = true;

  Problem instance(std::uint64_t seed, std::size_t repeat) const;
};

ProblemFamily make_family(FunctionId id, std::size_t dim, std::uint64_t function_seed, bool random_transform);

struct FitnessReport {
  double mean = 0.0;
  std::vector<double> per_repeat;
};

/// Mean pbest over `repeats` runs; repeat r uses seed derive(config.seed, Repeat, r)
/// for its transform and initial points.
FitnessReport fitness(const Program& program, const ProblemFamily& family, std::size_t repeats,
                      const RunConfig& config);

/// Seed used for repeat `r` of a fitness evaluation under master seed `seed`.
std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat);

}  // namespace pushopt
