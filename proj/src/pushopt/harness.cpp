#include "pushopt/harness.hpp"

#include <algorithm>

namespace pushopt {

namespace {

std::vector<InputValue> bound_inputs(const Bounds& bounds, InputMode mode) {
  std::vector<InputValue> inputs;
  if (mode == InputMode::ScalarBounds) {
    inputs.emplace_back(*std::min_element(bounds.lo.begin(), bounds.lo.end()));
    inputs.emplace_back(*std::max_element(bounds.hi.begin(), bounds.hi.end()));
  } else {
    for (double lo : bounds.lo) inputs.emplace_back(lo);
    for (double hi : bounds.hi) inputs.emplace_back(hi);
  }
  return inputs;
}

void record(Swarm& swarm, std::size_t move, const SwarmMember& m, bool in_bounds) {
  if (!swarm.config.record_trajectory) return;
  swarm.result.trajectory.push_back(
      {move, m.index, m.point, in_bounds ? m.value : kOutOfBoundsValue, in_bounds, swarm.pbest});
}

}  // namespace

Swarm init_swarm(const Program& program, const Problem& problem, const RunConfig& config) {
  if (config.swarm_size == 0) throw std::invalid_argument("swarm size must be positive");
  Swarm swarm;
  swarm.config = config;
  const Bounds& bounds = problem.bounds();
  const auto inputs = bound_inputs(bounds, config.input_mode);
  Rng point_rng(derive_seed(config.seed, Stream::InitialPoints));

  swarm.members.reserve(config.swarm_size);
  for (std::size_t p = 0; p < config.swarm_size; ++p) {
    SwarmMember m;
    m.index = p;
    m.program = program;
    m.state = State(problem.dim(), derive_seed(config.seed, Stream::MemberInterpreter, {p}));
    m.state.ranges = config.ranges;
    m.state.exec_counts = config.exec_counts;
    m.point.resize(problem.dim());
    for (std::size_t i = 0; i < m.point.size(); ++i) m.point[i] = point_rng.uniform(bounds.lo[i], bounds.hi[i]);
    m.value = problem.evaluate(m.point);
    ++swarm.evaluations;

    m.state.vectors.push(m.point);
    m.state.floats.push(m.value);
    m.state.booleans.push(true);
    m.state.inputs = inputs;
    m.best = m.point;
    m.bestval = m.value;
    if (m.bestval < swarm.pbest) {
      swarm.pbest = m.bestval;
      swarm.pbest_index = p;
    }
    swarm.members.push_back(std::move(m));
    record(swarm, 0, swarm.members.back(), true);
  }
  swarm.result.pbest_history.push_back(swarm.pbest);
  return swarm;
}

void step_swarm(Swarm& swarm, const Problem& problem, std::size_t move, const ProgramChooser& choose,
                const MoveObserver& observer) {
  std::vector<Vector> current;
  std::vector<Vector> best;
  current.reserve(swarm.members.size());
  best.reserve(swarm.members.size());
  for (const auto& m : swarm.members) {
    current.push_back(m.point);
    best.push_back(m.best);
  }
  const std::size_t pbest_index = swarm.pbest_index;
  const Bounds& bounds = problem.bounds();

  for (auto& m : swarm.members) {
    if (choose) {
      if (const Program* chosen = choose(m.index, move)) m.program = *chosen;
    }
    State& st = m.state;
    st.integers.push(static_cast<std::int64_t>(move));
    st.integers.push(static_cast<std::int64_t>(m.index));
    st.integers.push(static_cast<std::int64_t>(pbest_index));
    const double previous = m.value;

    const std::size_t steps =
        run_move(st, m.program, SwarmView{current, best, m.index}, swarm.config.execution_limit);

    bool in_bounds = false;
    if (st.vectors.empty()) {
      st.vectors.push(m.point);
    } else {
      m.point = st.vectors.top();
      in_bounds = bounds.contains(m.point);
    }

    bool improved = false;
    if (in_bounds) {
      m.value = problem.evaluate(m.point);
      ++swarm.evaluations;
      if (m.value < m.bestval) {
        m.bestval = m.value;
        m.best = m.point;
      }
      improved = m.value < previous;
      st.booleans.push(improved);
      if (!improved) st.vectors.push(m.best);
      st.floats.push(m.value);
    } else {
      st.booleans.push(false);
      st.floats.push(kOutOfBoundsValue);
    }

    if (m.bestval < swarm.pbest) {
      swarm.pbest = m.bestval;
      swarm.pbest_index = m.index;
    }
    record(swarm, move, m, in_bounds);
    if (observer) observer(MoveEvent{move, m, in_bounds, improved, steps});
  }
  ++swarm.moves_executed;
  swarm.result.pbest_history.push_back(swarm.pbest);
}

RunResult finish(Swarm& swarm) {
  RunResult r = std::move(swarm.result);
  r.pbest = swarm.pbest;
  r.pbest_point = swarm.members.at(swarm.pbest_index).best;
  r.evaluations = swarm.evaluations;
  r.moves_executed = swarm.moves_executed;
  swarm.result = {};
  return r;
}

RunResult run_optimisation(const Program& program, const Problem& problem, const RunConfig& config,
                           const MoveObserver& observer) {
  Swarm swarm = init_swarm(program, problem, config);
  for (std::size_t m = 1; m <= config.moves; ++m) step_swarm(swarm, problem, m, {}, observer);
  return finish(swarm);
}

Problem ProblemFamily::instance(std::uint64_t seed, std::size_t repeat) const {
  if (!random_transform) return Problem(function, Transform::identity(function->dim()));
  Rng rng(derive_seed(seed, Stream::Transform, {repeat}));
  return Problem(function, sample_transform(function->bounds(), function->optimum(), rng));
}

ProblemFamily make_family(FunctionId id, std::size_t dim, std::uint64_t function_seed, bool random_transform) {
  return {std::make_shared<const BenchmarkFunction>(BenchmarkFunction::make(id, dim, function_seed)),
          random_transform};
}

std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat) {
  return derive_seed(seed, Stream::Repeat, {repeat});
}

FitnessReport fitness(const Program& program, const ProblemFamily& family, std::size_t repeats,
                      const RunConfig& config) {
  if (repeats == 0) throw std::invalid_argument("repeats must be at least 1");
  FitnessReport report;
  report.per_repeat.reserve(repeats);
  RunConfig cfg = config;
  cfg.record_trajectory = false;
  double sum = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    cfg.seed = repeat_seed(config.seed, r);
    const Problem problem = family.instance(config.seed, r);
    const double pbest = run_optimisation(program, problem, cfg).pbest;
    report.per_repeat.push_back(pbest);
    sum += pbest;
  }
  report.mean = sum / static_cast<double>(repeats);
  return report;
}

}  // namespace pushopt
