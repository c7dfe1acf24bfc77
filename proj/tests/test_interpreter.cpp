#include <doctest.h>

#include <cfloat>
#include <cmath>

#include "pushopt/push/program.hpp"
#include "pushopt/push/state.hpp"
#include "support.hpp"

using namespace pushopt;

namespace {

State run(const char* text, std::size_t dim = 2, std::size_t limit = kDefaultExecutionLimit,
          const SwarmView& swarm = {}) {
  State s(dim, 11);
  run_move(s, parse_program(text), swarm, limit);
  return s;
}

std::vector<std::int64_t> ints(const State& s) { return s.integers.values(); }
std::vector<double> floats(const State& s) { return s.floats.values(); }

Instruction op(const char* name) { return *find_instruction(name); }

}  // namespace

TEST_CASE("integer arithmetic takes (second, top)") {
  CHECK(ints(run("(3 2 integer.-)")) == std::vector<std::int64_t>{1});
  CHECK(ints(run("(7 2 integer./)")) == std::vector<std::int64_t>{3});
  CHECK(ints(run("(-7 2 integer.%)")) == std::vector<std::int64_t>{-1});
  CHECK(ints(run("(2 10 integer.pow)")) == std::vector<std::int64_t>{1024});
  CHECK(run("(3 2 integer.<)").booleans.values() == std::vector<bool>{false});
}

TEST_CASE("protected operations leave their operands in place") {
  CHECK(ints(run("(5 0 integer./)")) == std::vector<std::int64_t>{5, 0});
  CHECK(ints(run("(5 0 integer.%)")) == std::vector<std::int64_t>{5, 0});
  CHECK(floats(run("(1.5 0.0 float./)")) == std::vector<double>{1.5, 0.0});
  CHECK(floats(run("(-1.0 float.ln)")) == std::vector<double>{-1.0});
  CHECK(floats(run("(0.0 float.log)")) == std::vector<double>{0.0});
  CHECK(floats(run("(1000.0 float.exp)")) == std::vector<double>{1000.0});
  CHECK(ints(run("(9223372036854775807 1 integer.+)")) == std::vector<std::int64_t>{INT64_MAX, 1});
  CHECK(floats(run("(100.0 float.log)")) == std::vector<double>{2.0});
}

TEST_CASE("conversions between stacks") {
  const State s = run("(true float.fromboolean 2.9 integer.fromfloat -3 float.frominteger)");
  CHECK(floats(s) == std::vector<double>{1.0, -3.0});
  CHECK(ints(s) == std::vector<std::int64_t>{2});
  CHECK(run("(0 boolean.frominteger)").booleans.values() == std::vector<bool>{false});
}

TEST_CASE("generic stack instructions") {
  CHECK(ints(run("(1 2 3 integer.rot)")) == std::vector<std::int64_t>{2, 3, 1});
  CHECK(ints(run("(1 2 integer.swap)")) == std::vector<std::int64_t>{2, 1});
  CHECK(ints(run("(1 2 integer.dup)")) == std::vector<std::int64_t>{1, 2, 2});
  // the index comes off the integer stack before the item
  CHECK(ints(run("(10 20 30 2 integer.yank)")) == std::vector<std::int64_t>{20, 30, 10});
  CHECK(ints(run("(10 20 30 9 integer.yankdup)")) == std::vector<std::int64_t>{10, 20, 30, 10});
  CHECK(ints(run("(10 20 30 1 integer.shove)")) == std::vector<std::int64_t>{10, 30, 20});
  CHECK(floats(run("(1.0 2.0 3.0 -4 float.yank)")) == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(floats(run("(1.0 2.0 3.0 1 float.shove)")) == std::vector<double>{1.0, 3.0, 2.0});
  CHECK(ints(run("(1.0 2.0 float.stackdepth)")) == std::vector<std::int64_t>{2});
  CHECK(run("(true false boolean.flush)").booleans.empty());
}

TEST_CASE("exec conditionals") {
  CHECK(ints(run("(true exec.if 1 2)")) == std::vector<std::int64_t>{1});
  CHECK(ints(run("(false exec.if 1 2)")) == std::vector<std::int64_t>{2});
  CHECK(ints(run("(1.0 2.0 exec.iflt 1 2)")) == std::vector<std::int64_t>{1});
  CHECK(ints(run("(2.0 1.0 exec.iflt 1 2)")) == std::vector<std::int64_t>{2});
  CHECK(ints(run("(exec.dup 5)")) == std::vector<std::int64_t>{5, 5});
  CHECK(ints(run("(exec.pop 5 6)")) == std::vector<std::int64_t>{6});
  CHECK(ints(run("(exec.swap 5 6)")) == std::vector<std::int64_t>{6, 5});
  CHECK(ints(run("(exec.flush 5 6)")).empty());
  CHECK(run("(exec.= 5 5)").booleans.values() == std::vector<bool>{true});
}

TEST_CASE("exec loops") {
  // do*times runs its body exactly n times
  CHECK(floats(run("(4 exec.do*times 1.5)")).size() == 4);
  CHECK(floats(run("(1 exec.do*times 1.5)")).size() == 1);
  CHECK(floats(run("(0 exec.do*times 1.5)")) == std::vector<double>{1.5});
  // do*count pushes the loop index before each iteration
  const State count = run("(4 exec.do*count 1.5)");
  CHECK(ints(count) == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(floats(count).size() == 4);
  const State range = run("(2 5 exec.do*range 1.5)");
  CHECK(ints(range) == std::vector<std::int64_t>{2, 3, 4, 5});
  CHECK(floats(range).size() == 4);
  CHECK(ints(run("(5 2 exec.do*range exec.noop)")) == std::vector<std::int64_t>{5, 4, 3, 2});
}

TEST_CASE("the execution limit stops a long loop at an exact point") {
  // step 1: literal; step 2: do*times; each later iteration costs body + literal + do*times,
  // so bodies run at steps 3, 6, ..., 99
  State s(2, 1);
  const std::size_t steps = run_move(s, parse_program("(1000 exec.do*times 1.5)"), {}, 100);
  CHECK(steps == 100);
  CHECK(s.floats.size() == 33);
  CHECK(s.exec.empty());
  State t(2, 1);
  CHECK(run_move(t, parse_program("(1000 exec.do*times 1.5)"), {}, 7) == 7);
  CHECK(t.floats.size() == 2);
}

TEST_CASE("literals count against the limit") {
  State s(1, 1);
  CHECK(run_move(s, parse_program("(1 2 3 4 5)"), {}, 3) == 3);
  CHECK(ints(s) == std::vector<std::int64_t>{1, 2, 3});
}

TEST_CASE("input instructions read the bounds") {
  State s(2, 1);
  s.inputs = {InputValue{-5.0}, InputValue{5.0}};
  run_move(s, parse_program("(input.inall input.inallrev input.stackdepth 7 input.index)"), {});
  CHECK(floats(s) == std::vector<double>{-5.0, 5.0, 5.0, -5.0, 5.0});
  CHECK(ints(s) == std::vector<std::int64_t>{2});
}

TEST_CASE("vector arithmetic") {
  State s(3, 1);
  s.vectors.push({1, 2, 3});
  s.vectors.push({4, 6, 8});
  run_move(s, parse_program("(vector.-)"), {});
  CHECK(s.vectors.top() == Vector{-3, -4, -5});

  State d(2, 1);
  d.vectors.push({1, 2});
  d.vectors.push({0, 2});
  run_move(d, parse_program("(vector./)"), {});
  CHECK(d.vectors.size() == 2);

  State p(2, 1);
  p.vectors.push({1, 2});
  p.vectors.push({3, 4});
  run_move(p, parse_program("(vector.dprod vector.mag)"), {});
  CHECK(floats(p) == std::vector<double>{11.0});
}

TEST_CASE("vector.between interpolates from the second vector towards the top") {
  auto between = [](double t) {
    State s(2, 1);
    s.vectors.push({0, 0});
    s.vectors.push({2, 4});
    s.floats.push(t);
    execute_item(s, op("vector.between"));
    return s.vectors.top();
  };
  CHECK(between(0.5) == Vector{1, 2});
  CHECK(between(0.0) == Vector{0, 0});
  CHECK(between(1.0) == Vector{2, 4});
  CHECK(between(1.5) == Vector{3, 6});
  CHECK(between(-1.0) == Vector{-2, -4});
}

TEST_CASE("vector.dim+ and dim* wrap the component index") {
  State s(3, 1);
  s.vectors.push({1, 1, 1});
  run_move(s, parse_program("(-1 2.5 vector.dim+ 4 3.0 vector.dim*)"), {});
  CHECK(s.vectors.top() == Vector{1, 3, 3.5});
}

TEST_CASE("vector.scale, apply and zip") {
  State s(2, 1);
  s.vectors.push({1, -2});
  run_move(s, parse_program("(2.0 vector.scale vector.apply float.neg)"), {});
  CHECK(s.vectors.top() == Vector{-2, 4});

  State z(2, 1);
  z.vectors.push({1, 2});
  z.vectors.push({10, 20});
  run_move(z, parse_program("(vector.zip float.+)"), {});
  CHECK(z.vectors.values() == std::vector<Vector>{{11, 22}});
  CHECK(z.floats.empty());
}

TEST_CASE("vector.wrand draws within plus or minus |f|") {
  State s(4, 5);
  for (int i = 0; i < 2000; ++i) {
    s.floats.push(i % 2 ? -0.25 : 0.25);
    execute_item(s, op("vector.wrand"));
    const Vector v = s.vectors.pop();
    REQUIRE(v.size() == 4);
    for (double x : v) REQUIRE(std::fabs(x) <= 0.25);
  }
}

TEST_CASE("vector.urand is a unit vector and vector.rand respects its range") {
  State s(5, 2);
  for (int i = 0; i < 100; ++i) {
    execute_item(s, op("vector.urand"));
    double n = 0;
    for (double x : s.vectors.pop()) n += x * x;
    CHECK(std::fabs(std::sqrt(n) - 1.0) < 1e-12);
    execute_item(s, op("vector.rand"));
    for (double x : s.vectors.pop()) CHECK(std::fabs(x) <= 1.0);
  }
}

TEST_CASE("vector.current and vector.best index the swarm modulo its size") {
  std::vector<Vector> current, best;
  for (int i = 0; i < 5; ++i) {
    current.push_back({double(i), 0});
    best.push_back({0, double(i)});
  }
  const SwarmView view{current, best, 3};
  State s(2, 1);
  s.integers.push(7);
  execute_item(s, op("vector.current"), view);
  CHECK(s.vectors.top() == Vector{2, 0});
  s.integers.push(-4);
  execute_item(s, op("vector.best"), view);
  CHECK(s.vectors.top() == Vector{0, 3});
  CHECK(s.integers.empty());
  execute_item(s, op("vector.current"), view);
  CHECK(s.vectors.top() == Vector{3, 0});
  const std::size_t before = s.vectors.size();
  execute_item(s, op("vector.current"));
  CHECK(s.vectors.size() == before);
}

TEST_CASE("instructions with missing operands are exact no-ops") {
  // every instruction on an empty state, then on states with one item per stack
  for (std::size_t id = 0; id < instruction_count(); ++id) {
    const Instruction instr{static_cast<std::uint16_t>(id)};
    const std::string name(instruction_name(instr));
    if (name.ends_with(".rand") || name == "vector.urand" || name.ends_with("stackdepth") ||
        name.starts_with("input.") || name.ends_with(".flush") || name == "exec.noop") {
      continue;
    }
    State s(2, 1);
    const State before = s;
    execute_item(s, instr);
    CHECK_MESSAGE(s.same_stacks(before), name);
  }
}

namespace {

/// Random state with short stacks holding a mix of ordinary and extreme values.
State random_state(Rng& rng, std::size_t dim) {
  static const double specials[] = {0.0, -0.0, 1.0, -1.0, 1e308, -1e308, DBL_MAX, 1e-308, 0.5, 3.0};
  static const std::int64_t int_specials[] = {0, 1, -1, 2, 7, INT64_MAX, INT64_MIN, 100, -3};
  State s(dim, rng.next());
  s.inputs = {InputValue{-5.0}, InputValue{5.0}};
  auto pick_double = [&] { return rng.bernoulli(0.3) ? specials[rng.index(10)] : rng.uniform(-10, 10); };
  for (std::size_t n = rng.index(4); n > 0; --n) s.booleans.push(rng.bernoulli(0.5));
  for (std::size_t n = rng.index(4); n > 0; --n) {
    s.integers.push(rng.bernoulli(0.3) ? int_specials[rng.index(9)] : rng.uniform_int(-10, 10));
  }
  for (std::size_t n = rng.index(4); n > 0; --n) s.floats.push(pick_double());
  for (std::size_t n = rng.index(4); n > 0; --n) {
    Vector v(dim);
    for (auto& x : v) x = pick_double();
    s.vectors.push(v);
  }
  for (std::size_t n = rng.index(4); n > 0; --n) {
    s.exec.push(Instruction{static_cast<std::uint16_t>(rng.index(instruction_count()))});
  }
  return s;
}

}  // namespace

TEST_CASE("fuzz: random applications keep vectors at length D and respect operand preconditions") {
  Rng rng(2024);
  std::vector<Vector> current = {{1, 2, 3}, {4, 5, 6}};
  const SwarmView view{current, current, 1};
  std::size_t checked_noops = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    State s = random_state(rng, 3);
    for (int k = 0; k < 5; ++k) {
      const Instruction instr{static_cast<std::uint16_t>(rng.index(instruction_count()))};
      const auto need = testing_support::required_operands(std::string(instruction_name(instr)));
      const bool short_of_operands = s.booleans.size() < need.b || s.integers.size() < need.i ||
                                     s.floats.size() < need.f || s.vectors.size() < need.v ||
                                     s.exec.size() < need.x;
      const State before = s;
      execute_item(s, instr, view);
      if (short_of_operands) {
        ++checked_noops;
        REQUIRE_MESSAGE(s.same_stacks(before), instruction_name(instr));
      }
      for (const auto& v : s.vectors.values()) REQUIRE(v.size() == 3);
      for (double f : s.floats.values()) REQUIRE(std::isfinite(f));
    }
  }
  CHECK(checked_noops > 1000);
}
