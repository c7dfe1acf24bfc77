#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include "pushopt/push/state.hpp"

namespace pushopt {
namespace {

class Machine {
 public:
  Machine(State& s, const SwarmView& swarm, std::size_t limit) : s(s), swarm(swarm), limit(limit) {}

  State& s;
  const SwarmView& swarm;
  std::size_t limit;

  bool budget_left() const { return s.steps_used < limit; }

  /// Executes exec items until the exec stack shrinks to `depth` or the budget runs out.
  void run_until(std::size_t depth) {
    while (s.exec.size() > depth && budget_left()) {
      Item item = s.exec.pop();
      ++s.steps_used;
      execute(item);
    }
  }

  void execute(const Item& item);
};

using Handler = void (*)(Machine&);

struct Entry {
  const char* name;
  Handler handler;
};

bool finite(double v) { return std::isfinite(v); }

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::size_t clamp_depth(std::int64_t index, std::size_t max_depth) {
  if (index < 0) return 0;
  return std::min(static_cast<std::size_t>(index), max_depth);
}

// ---------------------------------------------------------------------------
// Generic stack instructions, shared by the boolean/integer/float/vector/exec stacks.

template <class T>
Stack<T>& stack_of(State& s);
template <>
Stack<bool>& stack_of<bool>(State& s) { return s.booleans; }
template <>
Stack<std::int64_t>& stack_of<std::int64_t>(State& s) { return s.integers; }
template <>
Stack<double>& stack_of<double>(State& s) { return s.floats; }
template <>
Stack<Vector>& stack_of<Vector>(State& s) { return s.vectors; }
template <>
Stack<Item>& stack_of<Item>(State& s) { return s.exec; }

template <class T>
constexpr bool kIndexOnSameStack = std::is_same_v<T, std::int64_t>;

template <class T>
void op_dup(Machine& m) {
  auto& st = stack_of<T>(m.s);
  if (st.empty()) return;
  st.push(st.top());
}

template <class T>
void op_flush(Machine& m) { stack_of<T>(m.s).clear(); }

template <class T>
void op_pop(Machine& m) {
  auto& st = stack_of<T>(m.s);
  if (!st.empty()) st.pop();
}

template <class T>
void op_rot(Machine& m) {
  auto& st = stack_of<T>(m.s);
  if (st.size() < 3) return;
  st.push(st.remove_at_depth(2));
}

template <class T>
void op_swap(Machine& m) {
  auto& st = stack_of<T>(m.s);
  if (st.size() < 2) return;
  T a = st.pop();
  T b = st.pop();
  st.push(std::move(a));
  st.push(std::move(b));
}

template <class T>
void op_stackdepth(Machine& m) {
  auto depth = static_cast<std::int64_t>(stack_of<T>(m.s).size());
  m.s.integers.push(depth);
}

template <class T>
bool has_index_and_item(Machine& m) {
  if constexpr (kIndexOnSameStack<T>) {
    return m.s.integers.size() >= 2;
  } else {
    return !m.s.integers.empty() && !stack_of<T>(m.s).empty();
  }
}

template <class T>
void op_shove(Machine& m) {
  if (!has_index_and_item<T>(m)) return;
  std::int64_t index = m.s.integers.pop();
  auto& st = stack_of<T>(m.s);
  T item = st.pop();
  st.insert_at_depth(clamp_depth(index, st.size()), std::move(item));
}

template <class T>
void op_yank(Machine& m) {
  if (!has_index_and_item<T>(m)) return;
  std::int64_t index = m.s.integers.pop();
  auto& st = stack_of<T>(m.s);
  st.push(st.remove_at_depth(clamp_depth(index, st.size() - 1)));
}

template <class T>
void op_yankdup(Machine& m) {
  if (!has_index_and_item<T>(m)) return;
  std::int64_t index = m.s.integers.pop();
  auto& st = stack_of<T>(m.s);
  st.push(st.at_depth(clamp_depth(index, st.size() - 1)));
}

Vector random_vector(State& s, double lo, double hi) {
  Vector v(s.dim);
  for (auto& x : v) x = s.rng.uniform(lo, hi);
  return v;
}

void boolean_rand(Machine& m) { m.s.booleans.push(m.s.rng.bernoulli(0.5)); }
void integer_rand(Machine& m) {
  m.s.integers.push(m.s.rng.uniform_int(m.s.ranges.integer_rand_lo, m.s.ranges.integer_rand_hi));
}
void float_rand(Machine& m) {
  m.s.floats.push(m.s.rng.uniform(m.s.ranges.float_rand_lo, m.s.ranges.float_rand_hi));
}
void vector_rand(Machine& m) {
  m.s.vectors.push(random_vector(m.s, m.s.ranges.vector_rand_lo, m.s.ranges.vector_rand_hi));
}

// ---------------------------------------------------------------------------
// Boolean

template <class F>
void bool_binary(Machine& m, F f) {
  auto& b = m.s.booleans;
  if (b.size() < 2) return;
  bool top = b.pop();
  bool second = b.pop();
  b.push(f(second, top));
}

void boolean_eq(Machine& m) { bool_binary(m, [](bool a, bool b) { return a == b; }); }
void boolean_and(Machine& m) { bool_binary(m, [](bool a, bool b) { return a && b; }); }
void boolean_or(Machine& m) { bool_binary(m, [](bool a, bool b) { return a || b; }); }
void boolean_xor(Machine& m) { bool_binary(m, [](bool a, bool b) { return a != b; }); }
void boolean_not(Machine& m) {
  if (m.s.booleans.empty()) return;
  m.s.booleans.push(!m.s.booleans.pop());
}
void boolean_fromfloat(Machine& m) {
  if (m.s.floats.empty()) return;
  m.s.booleans.push(m.s.floats.pop() != 0.0);
}
void boolean_frominteger(Machine& m) {
  if (m.s.integers.empty()) return;
  m.s.booleans.push(m.s.integers.pop() != 0);
}

// ---------------------------------------------------------------------------
// Float. Binary operators take (second, top); non-finite results are no-ops.

template <class F>
void float_binary(Machine& m, F f) {
  auto& st = m.s.floats;
  if (st.size() < 2) return;
  const double b = st.at_depth(0);
  const double a = st.at_depth(1);
  auto r = f(a, b);
  if (!r || !finite(*r)) return;
  st.pop();
  st.pop();
  st.push(*r);
}

template <class F>
void float_compare(Machine& m, F f) {
  auto& st = m.s.floats;
  if (st.size() < 2) return;
  const double b = st.pop();
  const double a = st.pop();
  m.s.booleans.push(f(a, b));
}

template <class F>
void float_unary(Machine& m, F f) {
  auto& st = m.s.floats;
  if (st.empty()) return;
  auto r = f(st.top());
  if (!r || !finite(*r)) return;
  st.pop();
  st.push(*r);
}

using OptD = std::optional<double>;

void float_mod(Machine& m) {
  float_binary(m, [](double a, double b) -> OptD {
    if (b == 0.0) return std::nullopt;
    return std::fmod(a, b);
  });
}
void float_mul(Machine& m) { float_binary(m, [](double a, double b) -> OptD { return a * b; }); }
void float_add(Machine& m) { float_binary(m, [](double a, double b) -> OptD { return a + b; }); }
void float_sub(Machine& m) { float_binary(m, [](double a, double b) -> OptD { return a - b; }); }
void float_div(Machine& m) {
  float_binary(m, [](double a, double b) -> OptD {
    if (b == 0.0) return std::nullopt;
    return a / b;
  });
}
void float_max(Machine& m) { float_binary(m, [](double a, double b) -> OptD { return std::max(a, b); }); }
void float_min(Machine& m) { float_binary(m, [](double a, double b) -> OptD { return std::min(a, b); }); }
void float_pow(Machine& m) { float_binary(m, [](double a, double b) -> OptD { return std::pow(a, b); }); }
void float_lt(Machine& m) { float_compare(m, [](double a, double b) { return a < b; }); }
void float_eq(Machine& m) { float_compare(m, [](double a, double b) { return a == b; }); }
void float_gt(Machine& m) { float_compare(m, [](double a, double b) { return a > b; }); }
void float_abs(Machine& m) { float_unary(m, [](double a) -> OptD { return std::fabs(a); }); }
void float_cos(Machine& m) { float_unary(m, [](double a) -> OptD { return std::cos(a); }); }
void float_sin(Machine& m) { float_unary(m, [](double a) -> OptD { return std::sin(a); }); }
void float_tan(Machine& m) { float_unary(m, [](double a) -> OptD { return std::tan(a); }); }
void float_exp(Machine& m) { float_unary(m, [](double a) -> OptD { return std::exp(a); }); }
void float_neg(Machine& m) { float_unary(m, [](double a) -> OptD { return -a; }); }
void float_ln(Machine& m) {
  float_unary(m, [](double a) -> OptD {
    if (a <= 0.0) return std::nullopt;
    return std::log(a);
  });
}
void float_log(Machine& m) {
  float_unary(m, [](double a) -> OptD {
    if (a <= 0.0) return std::nullopt;
    return std::log10(a);
  });
}
void float_fromboolean(Machine& m) {
  if (m.s.booleans.empty()) return;
  m.s.floats.push(m.s.booleans.pop() ? 1.0 : 0.0);
}
void float_frominteger(Machine& m) {
  if (m.s.integers.empty()) return;
  m.s.floats.push(static_cast<double>(m.s.integers.pop()));
}

// ---------------------------------------------------------------------------
// Integer. Overflow is treated like any other invalid result: a no-op.

using OptI = std::optional<std::int64_t>;
constexpr std::int64_t kIntMin = std::numeric_limits<std::int64_t>::min();

OptI int_from_double(double v) {
  // 2^63 is exactly representable; anything at or beyond it overflows.
  if (!finite(v) || v >= 0x1.0p63 || v < -0x1.0p63) return std::nullopt;
  return static_cast<std::int64_t>(v);
}

template <class F>
void int_binary(Machine& m, F f) {
  auto& st = m.s.integers;
  if (st.size() < 2) return;
  const std::int64_t b = st.at_depth(0);
  const std::int64_t a = st.at_depth(1);
  OptI r = f(a, b);
  if (!r) return;
  st.pop();
  st.pop();
  st.push(*r);
}

template <class F>
void int_compare(Machine& m, F f) {
  auto& st = m.s.integers;
  if (st.size() < 2) return;
  const std::int64_t b = st.pop();
  const std::int64_t a = st.pop();
  m.s.booleans.push(f(a, b));
}

template <class F>
void int_unary(Machine& m, F f) {
  auto& st = m.s.integers;
  if (st.empty()) return;
  OptI r = f(st.top());
  if (!r) return;
  st.pop();
  st.push(*r);
}

void integer_mod(Machine& m) {
  int_binary(m, [](std::int64_t a, std::int64_t b) -> OptI {
    if (b == 0 || (a == kIntMin && b == -1)) return std::nullopt;
    return a % b;
  });
}
void integer_mul(Machine& m) {
  int_binary(m, [](std::int64_t a, std::int64_t b) -> OptI {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
    return r;
  });
}
void integer_add(Machine& m) {
  int_binary(m, [](std::int64_t a, std::int64_t b) -> OptI {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
    return r;
  });
}
void integer_sub(Machine& m) {
  int_binary(m, [](std::int64_t a, std::int64_t b) -> OptI {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) return std::nullopt;
    return r;
  });
}
void integer_div(Machine& m) {
  int_binary(m, [](std::int64_t a, std::int64_t b) -> OptI {
    if (b == 0 || (a == kIntMin && b == -1)) return std::nullopt;
    return a / b;
  });
}
void integer_max(Machine& m) {
  int_binary(m, [](std::int64_t a, std::int64_t b) -> OptI { return std::max(a, b); });
}
void integer_min(Machine& m) {
  int_binary(m, [](std::int64_t a, std::int64_t b) -> OptI { return std::min(a, b); });
}
void integer_pow(Machine& m) {
  int_binary(m, [](std::int64_t a, std::int64_t b) -> OptI {
    return int_from_double(std::pow(static_cast<double>(a), static_cast<double>(b)));
  });
}
void integer_lt(Machine& m) { int_compare(m, [](std::int64_t a, std::int64_t b) { return a < b; }); }
void integer_eq(Machine& m) { int_compare(m, [](std::int64_t a, std::int64_t b) { return a == b; }); }
void integer_gt(Machine& m) { int_compare(m, [](std::int64_t a, std::int64_t b) { return a > b; }); }
void integer_abs(Machine& m) {
  int_unary(m, [](std::int64_t a) -> OptI {
    if (a == kIntMin) return std::nullopt;
    return a < 0 ? -a : a;
  });
}
void integer_neg(Machine& m) {
  int_unary(m, [](std::int64_t a) -> OptI {
    if (a == kIntMin) return std::nullopt;
    return -a;
  });
}
void integer_ln(Machine& m) {
  int_unary(m, [](std::int64_t a) -> OptI {
    if (a <= 0) return std::nullopt;
    return int_from_double(std::log(static_cast<double>(a)));
  });
}
void integer_log(Machine& m) {
  int_unary(m, [](std::int64_t a) -> OptI {
    if (a <= 0) return std::nullopt;
    return int_from_double(std::log10(static_cast<double>(a)));
  });
}
void integer_fromboolean(Machine& m) {
  if (m.s.booleans.empty()) return;
  m.s.integers.push(m.s.booleans.pop() ? 1 : 0);
}
void integer_fromfloat(Machine& m) {
  if (m.s.floats.empty()) return;
  OptI r = int_from_double(m.s.floats.top());
  if (!r) return;
  m.s.floats.pop();
  m.s.integers.push(*r);
}

// ---------------------------------------------------------------------------
// Exec

Instruction lookup(const char* name);

void exec_eq(Machine& m) {
  auto& ex = m.s.exec;
  if (ex.size() < 2) return;
  Item b = ex.pop();
  Item a = ex.pop();
  m.s.booleans.push(a == b);
}

void exec_noop(Machine&) {}

void exec_do_range(Machine& m) {
  auto& ints = m.s.integers;
  if (ints.size() < 2 || m.s.exec.empty()) return;
  Item body = m.s.exec.pop();
  const std::int64_t dest = ints.pop();
  const std::int64_t current = ints.pop();
  ints.push(current);
  if (current != dest) {
    static const Instruction self = lookup("exec.do*range");
    const std::int64_t next = current < dest ? current + 1 : current - 1;
    m.s.exec.push(body);
    m.s.exec.push(self);
    m.s.exec.push(dest);
    m.s.exec.push(next);
  }
  m.s.exec.push(std::move(body));
}

void exec_do_count(Machine& m) {
  auto& ints = m.s.integers;
  if (ints.empty() || m.s.exec.empty() || ints.top() <= 0) return;
  static const Instruction range = lookup("exec.do*range");
  const std::int64_t n = ints.pop();
  Item body = m.s.exec.pop();
  m.s.exec.push(std::move(body));
  m.s.exec.push(range);
  m.s.exec.push(n - 1);
  m.s.exec.push(std::int64_t{0});
}

void exec_do_times(Machine& m) {
  auto& ints = m.s.integers;
  if (ints.empty() || m.s.exec.empty() || ints.top() <= 0) return;
  static const Instruction self = lookup("exec.do*times");
  const std::int64_t n = ints.pop();
  Item body = m.s.exec.pop();
  if (n > 1) {
    m.s.exec.push(body);
    m.s.exec.push(self);
    m.s.exec.push(n - 1);
  }
  m.s.exec.push(std::move(body));
}

// Keeps the first exec item when `keep_first`, otherwise the second.
void exec_choose(Machine& m, bool keep_first) {
  if (keep_first) {
    m.s.exec.remove_at_depth(1);
  } else {
    m.s.exec.pop();
  }
}

void exec_if(Machine& m) {
  if (m.s.booleans.empty() || m.s.exec.size() < 2) return;
  exec_choose(m, m.s.booleans.pop());
}

void exec_iflt(Machine& m) {
  if (m.s.floats.size() < 2 || m.s.exec.size() < 2) return;
  const double b = m.s.floats.pop();
  const double a = m.s.floats.pop();
  exec_choose(m, a < b);
}

// ---------------------------------------------------------------------------
// Input

void push_input(State& s, const InputValue& v) {
  std::visit(
      [&](auto x) {
        using X = decltype(x);
        if constexpr (std::is_same_v<X, bool>) {
          s.booleans.push(x);
        } else if constexpr (std::is_same_v<X, std::int64_t>) {
          s.integers.push(x);
        } else {
          s.floats.push(x);
        }
      },
      v);
}

void input_inall(Machine& m) {
  const auto inputs = m.s.inputs;
  for (const auto& v : inputs) push_input(m.s, v);
}

void input_inallrev(Machine& m) {
  const auto inputs = m.s.inputs;
  for (auto it = inputs.rbegin(); it != inputs.rend(); ++it) push_input(m.s, *it);
}

void input_index(Machine& m) {
  if (m.s.integers.empty() || m.s.inputs.empty()) return;
  const std::int64_t index = m.s.integers.pop();
  const InputValue v = m.s.inputs[clamp_depth(index, m.s.inputs.size() - 1)];
  push_input(m.s, v);
}

void input_stackdepth(Machine& m) { m.s.integers.push(static_cast<std::int64_t>(m.s.inputs.size())); }

// ---------------------------------------------------------------------------
// Vector

template <class F>
void vector_pairwise(Machine& m, F f) {
  auto& vs = m.s.vectors;
  if (vs.size() < 2) return;
  const Vector& b = vs.values()[vs.size() - 1];
  const Vector& a = vs.values()[vs.size() - 2];
  Vector c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto r = f(a[i], b[i]);
    if (!r || !finite(*r)) return;
    c[i] = *r;
  }
  vs.pop();
  vs.pop();
  vs.push(std::move(c));
}

void vector_add(Machine& m) { vector_pairwise(m, [](double a, double b) -> OptD { return a + b; }); }
void vector_sub(Machine& m) { vector_pairwise(m, [](double a, double b) -> OptD { return a - b; }); }
void vector_mul(Machine& m) { vector_pairwise(m, [](double a, double b) -> OptD { return a * b; }); }
void vector_div(Machine& m) {
  vector_pairwise(m, [](double a, double b) -> OptD {
    if (b == 0.0) return std::nullopt;
    return a / b;
  });
}

void vector_scale(Machine& m) {
  if (m.s.vectors.empty() || m.s.floats.empty()) return;
  const double f = m.s.floats.top();
  Vector v = m.s.vectors.top();
  for (auto& x : v) x *= f;
  if (!all_finite(v)) return;
  m.s.floats.pop();
  m.s.vectors.pop();
  m.s.vectors.push(std::move(v));
}

void vector_dprod(Machine& m) {
  auto& vs = m.s.vectors;
  if (vs.size() < 2) return;
  const Vector& b = vs.values()[vs.size() - 1];
  const Vector& a = vs.values()[vs.size() - 2];
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  if (!finite(sum)) return;
  vs.pop();
  vs.pop();
  m.s.floats.push(sum);
}

void vector_mag(Machine& m) {
  if (m.s.vectors.empty()) return;
  const Vector& v = m.s.vectors.top();
  double sum = 0.0;
  for (double x : v) sum += x * x;
  const double mag = std::sqrt(sum);
  if (!finite(mag)) return;
  m.s.vectors.pop();
  m.s.floats.push(mag);
}

std::size_t component_index(std::int64_t i, std::size_t dim) {
  const auto d = static_cast<std::int64_t>(dim);
  return static_cast<std::size_t>(((i % d) + d) % d);
}

template <class F>
void vector_dim(Machine& m, F f) {
  if (m.s.vectors.empty() || m.s.floats.empty() || m.s.integers.empty()) return;
  Vector v = m.s.vectors.top();
  const std::size_t i = component_index(m.s.integers.top(), v.size());
  const double r = f(v[i], m.s.floats.top());
  if (!finite(r)) return;
  v[i] = r;
  m.s.vectors.pop();
  m.s.floats.pop();
  m.s.integers.pop();
  m.s.vectors.push(std::move(v));
}

void vector_dim_add(Machine& m) { vector_dim(m, [](double x, double f) { return x + f; }); }
void vector_dim_mul(Machine& m) { vector_dim(m, [](double x, double f) { return x * f; }); }

// Runs `body` once with whatever its caller placed on the float stack; the
// new component is the float on top afterwards (or `fallback` if none).
double run_component_body(Machine& m, const Item& body, double fallback) {
  const std::size_t base = m.s.exec.size();
  m.s.exec.push(body);
  m.run_until(base);
  // a body cut off by the step limit may leave items above the base
  while (m.s.exec.size() > base) m.s.exec.pop();
  if (m.s.floats.empty()) return fallback;
  return m.s.floats.pop();
}

void vector_apply(Machine& m) {
  if (m.s.vectors.empty() || m.s.exec.empty()) return;
  Vector v = m.s.vectors.pop();
  const Item body = m.s.exec.pop();
  for (std::size_t i = 0; i < v.size() && m.budget_left(); ++i) {
    m.s.floats.push(v[i]);
    v[i] = run_component_body(m, body, v[i]);
  }
  m.s.vectors.push(std::move(v));
}

void vector_zip(Machine& m) {
  if (m.s.vectors.size() < 2 || m.s.exec.empty()) return;
  const Vector b = m.s.vectors.pop();
  Vector a = m.s.vectors.pop();
  const Item body = m.s.exec.pop();
  for (std::size_t i = 0; i < a.size() && m.budget_left(); ++i) {
    m.s.floats.push(a[i]);
    m.s.floats.push(b[i]);
    a[i] = run_component_body(m, body, a[i]);
  }
  m.s.vectors.push(std::move(a));
}

void vector_between(Machine& m) {
  auto& vs = m.s.vectors;
  if (vs.size() < 2 || m.s.floats.empty()) return;
  const Vector& b = vs.values()[vs.size() - 1];
  const Vector& a = vs.values()[vs.size() - 2];
  const double t = m.s.floats.top();
  Vector c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + t * (b[i] - a[i]);
  if (!all_finite(c)) return;
  m.s.floats.pop();
  vs.pop();
  vs.pop();
  vs.push(std::move(c));
}

void vector_urand(Machine& m) {
  Vector v(m.s.dim);
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (auto& x : v) {
      x = m.s.rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
  }
  for (auto& x : v) x /= norm;
  m.s.vectors.push(std::move(v));
}

void vector_wrand(Machine& m) {
  if (m.s.floats.empty()) return;
  const double f = std::fabs(m.s.floats.pop());
  Vector v(m.s.dim);
  for (auto& x : v) x = f * (2.0 * m.s.rng.uniform() - 1.0);
  m.s.vectors.push(std::move(v));
}

void vector_lookup(Machine& m, std::span<const Vector> points) {
  const std::size_t n = points.size();
  if (n == 0) return;
  std::size_t target = m.swarm.self;
  if (!m.s.integers.empty()) {
    const std::int64_t i = m.s.integers.pop();
    if (i >= 0) target = static_cast<std::size_t>(i) % n;
  }
  if (target >= n) return;
  m.s.vectors.push(points[target]);
}

void vector_current(Machine& m) { vector_lookup(m, m.swarm.current); }
void vector_best(Machine& m) { vector_lookup(m, m.swarm.best); }

// ---------------------------------------------------------------------------

#define PUSHOPT_GENERIC(prefix, T)                                   \
  {prefix ".dup", op_dup<T>}, {prefix ".flush", op_flush<T>},        \
      {prefix ".pop", op_pop<T>}, {prefix ".rot", op_rot<T>},        \
      {prefix ".shove", op_shove<T>},                                \
      {prefix ".stackdepth", op_stackdepth<T>},                      \
      {prefix ".swap", op_swap<T>}, {prefix ".yank", op_yank<T>},    \
      {prefix ".yankdup", op_yankdup<T>}

const auto kTable = std::to_array<Entry>({
    PUSHOPT_GENERIC("boolean", bool),
    {"boolean.rand", boolean_rand},
    {"boolean.=", boolean_eq},
    {"boolean.and", boolean_and},
    {"boolean.fromfloat", boolean_fromfloat},
    {"boolean.frominteger", boolean_frominteger},
    {"boolean.not", boolean_not},
    {"boolean.or", boolean_or},
    {"boolean.xor", boolean_xor},

    PUSHOPT_GENERIC("exec", Item),
    {"exec.=", exec_eq},
    {"exec.do*count", exec_do_count},
    {"exec.do*range", exec_do_range},
    {"exec.do*times", exec_do_times},
    {"exec.if", exec_if},
    {"exec.iflt", exec_iflt},
    {"exec.noop", exec_noop},

    PUSHOPT_GENERIC("float", double),
    {"float.rand", float_rand},
    {"float.%", float_mod},
    {"float.*", float_mul},
    {"float.+", float_add},
    {"float.-", float_sub},
    {"float./", float_div},
    {"float.<", float_lt},
    {"float.=", float_eq},
    {"float.>", float_gt},
    {"float.abs", float_abs},
    {"float.cos", float_cos},
    {"float.exp", float_exp},
    {"float.fromboolean", float_fromboolean},
    {"float.frominteger", float_frominteger},
    {"float.ln", float_ln},
    {"float.log", float_log},
    {"float.max", float_max},
    {"float.min", float_min},
    {"float.neg", float_neg},
    {"float.pow", float_pow},
    {"float.sin", float_sin},
    {"float.tan", float_tan},

    {"input.inall", input_inall},
    {"input.inallrev", input_inallrev},
    {"input.index", input_index},
    {"input.stackdepth", input_stackdepth},

    PUSHOPT_GENERIC("integer", std::int64_t),
    {"integer.rand", integer_rand},
    {"integer.%", integer_mod},
    {"integer.*", integer_mul},
    {"integer.+", integer_add},
    {"integer.-", integer_sub},
    {"integer./", integer_div},
    {"integer.<", integer_lt},
    {"integer.=", integer_eq},
    {"integer.>", integer_gt},
    {"integer.abs", integer_abs},
    {"integer.fromboolean", integer_fromboolean},
    {"integer.fromfloat", integer_fromfloat},
    {"integer.ln", integer_ln},
    {"integer.log", integer_log},
    {"integer.max", integer_max},
    {"integer.min", integer_min},
    {"integer.neg", integer_neg},
    {"integer.pow", integer_pow},

    PUSHOPT_GENERIC("vector", Vector),
    {"vector.rand", vector_rand},
    {"vector.*", vector_mul},
    {"vector./", vector_div},
    {"vector.+", vector_add},
    {"vector.-", vector_sub},
    {"vector.apply", vector_apply},
    {"vector.between", vector_between},
    {"vector.dim+", vector_dim_add},
    {"vector.dim*", vector_dim_mul},
    {"vector.dprod", vector_dprod},
    {"vector.mag", vector_mag},
    {"vector.scale", vector_scale},
    {"vector.urand", vector_urand},
    {"vector.wrand", vector_wrand},
    {"vector.zip", vector_zip},
    {"vector.current", vector_current},
    {"vector.best", vector_best},
});

#undef PUSHOPT_GENERIC

const std::unordered_map<std::string_view, Instruction>& name_index() {
  static const auto index = [] {
    std::unordered_map<std::string_view, Instruction> map;
    for (std::size_t i = 0; i < kTable.size(); ++i) {
      map.emplace(kTable[i].name, Instruction{static_cast<std::uint16_t>(i)});
    }
    return map;
  }();
  return index;
}

Instruction lookup(const char* name) { return name_index().at(name); }

void Machine::execute(const Item& item) {
  std::visit(
      [&](const auto& x) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Instruction>) {
          if (s.exec_counts != nullptr) {
            if (s.exec_counts->size() < kTable.size()) s.exec_counts->resize(kTable.size());
            ++(*s.exec_counts)[x.id];
          }
          kTable[x.id].handler(*this);
        } else if constexpr (std::is_same_v<X, bool>) {
          s.booleans.push(x);
        } else if constexpr (std::is_same_v<X, std::int64_t>) {
          s.integers.push(x);
        } else {
          s.floats.push(x);
        }
      },
      item);
}

}  // namespace

std::size_t instruction_count() { return kTable.size(); }

std::string_view instruction_name(Instruction instr) { return kTable.at(instr.id).name; }

std::optional<Instruction> find_instruction(std::string_view name) {
  const auto& index = name_index();
  auto it = index.find(name);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t run_move(State& state, const Program& program, const SwarmView& swarm, std::size_t limit) {
  state.exec.clear();
  const auto items = program.items();
  for (auto it = items.rbegin(); it != items.rend(); ++it) state.exec.push(*it);
  state.steps_used = 0;
  Machine m(state, swarm, limit);
  m.run_until(0);
  state.exec.clear();
  return state.steps_used;
}

void execute_item(State& state, const Item& item, const SwarmView& swarm, std::size_t limit) {
  state.steps_used = 1;
  Machine m(state, swarm, limit);
  m.execute(item);
}

}  // namespace pushopt
