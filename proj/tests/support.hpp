#pragma once

// Shared fixtures: the five best-in-problem programs and straightforward
// reference implementations of the benchmark functions, written independently
// of src/ so they can act as oracles.

#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "pushopt/problems.hpp"

namespace testing_support {

struct NamedProgram {
  pushopt::FunctionId function;
  const char* text;
};

inline const std::vector<NamedProgram>& best_programs() {
  static const std::vector<NamedProgram> programs = {
      {pushopt::FunctionId::F1,
       "(exec.dup float.- vector.- float.pop vector.zip vector.zip integer.swap float.cos float.- float.cos "
       "float.- float.yank vector.best vector.wrand float.abs float.dup float.frominteger vector.- vector.dim*)"},
      {pushopt::FunctionId::F9,
       "(input.stackdepth float.frominteger vector.yank vector.wrand boolean.dup integer.fromboolean "
       "vector.swap integer.rot float.frominteger float.sin vector.yank vector.shove vector.dim+ vector.yank "
       "0.0 float.> input.inall boolean.not 1 boolean.dup vector.pop boolean.stackdepth)"},
      {pushopt::FunctionId::F12,
       "(vector.stackdepth vector.swap float.fromboolean integer.fromboolean integer.rand vector.dim+ float.+ "
       "vector.swap integer.rand 0 vector.swap integer.max integer.= vector.stackdepth integer.dup vector.- "
       "integer.dup integer.rand vector.-  vector.dim+ vector.mag float.frominteger float.tan integer.rot "
       "vector.dim+)"},
      {pushopt::FunctionId::F13,
       "(integer.- float.sin vector.wrand integer.yankdup vector.dim* vector.- input.inall float.sin vector.-)"},
      {pushopt::FunctionId::F14,
       "(float.< float./ vector.best vector.yankdup float.ln float.max float.stackdepth 0.48999998 float.abs "
       "vector.between vector.wrand vector.scale integer.yank input.index vector.- float.rand float.neg "
       "0.97999996 float.- 0.97999996 vector.wrand vector.scale vector.-)"},
  };
  return programs;
}

/// Collapses runs of whitespace so texts compare against the printer's output.
inline std::string normalise_spaces(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

namespace ref {

constexpr double pi = std::numbers::pi;

inline double f1(const std::vector<double>& x, const std::vector<double>& o) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(x[i] - o[i], 2);
  return s;
}

inline double f9(const std::vector<double>& x, const std::vector<double>& o) {
  double s = 10.0 * static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - o[i];
    s += z * z - 10.0 * std::cos(2.0 * pi * z);
  }
  return s;
}

inline double f12(const std::vector<double>& x, const std::vector<double>& alpha,
                  const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  const std::size_t n = x.size();
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double big_a = 0, big_b = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double aij = static_cast<double>(a[i * n + j]);
      const double bij = static_cast<double>(b[i * n + j]);
      big_a += aij * std::sin(alpha[j]) + bij * std::cos(alpha[j]);
      big_b += aij * std::sin(x[j]) + bij * std::cos(x[j]);
    }
    s += (big_a - big_b) * (big_a - big_b);
  }
  return s;
}

inline double griewank1(double x) { return x * x / 4000.0 - std::cos(x / std::sqrt(1.0)) + 1.0; }
inline double rosenbrock2(double x, double y) {
  return 100.0 * std::pow(x * x - y, 2) + std::pow(x - 1.0, 2);
}

inline double f13(const std::vector<double>& x, const std::vector<double>& o) {
  const std::size_t n = x.size();
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] - o[i] + 1.0;
  double s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) s += griewank1(rosenbrock2(z[i], z[i + 1]));
  s += griewank1(rosenbrock2(z[n - 1], z[0]));
  return s;
}

inline double schaffer(double x, double y) {
  const double r = std::hypot(x, y);
  const double num = std::pow(std::sin(r), 2) - 0.5;
  const double den = std::pow(1.0 + 0.001 * r * r, 2);
  return 0.5 + num / den;
}

inline double f14(const std::vector<double>& x, const std::vector<double>& o) {
  const std::size_t n = x.size();
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] - o[i];
  double s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) s += schaffer(z[i], z[i + 1]);
  s += schaffer(z[n - 1], z[0]);
  return s;
}

/// Reference error of `f` at `x`, using only the function's published parameters.
inline double error(const pushopt::BenchmarkFunction& f, const std::vector<double>& x) {
  switch (f.id()) {
    case pushopt::FunctionId::F1: return f1(x, f.optimum());
    case pushopt::FunctionId::F9: return f9(x, f.optimum());
    case pushopt::FunctionId::F12: return f12(x, f.optimum(), f.f12_a(), f.f12_b());
    case pushopt::FunctionId::F13: return f13(x, f.optimum());
    case pushopt::FunctionId::F14: return f14(x, f.optimum());
    default: return std::nan("");
  }
}

}  // namespace ref

/// Minimum operand counts per stack for an instruction to have any effect,
/// derived from the instruction's documented signature rather than from src/.
struct Operands {
  std::size_t b = 0, i = 0, f = 0, v = 0, x = 0;
};

inline Operands required_operands(const std::string& name) {
  const auto dot = name.find('.');
  const std::string stack = name.substr(0, dot);
  const std::string op = name.substr(dot + 1);
  Operands o;
  auto same = [&](std::size_t n) {
    if (stack == "boolean") o.b = n;
    if (stack == "integer") o.i = n;
    if (stack == "float") o.f = n;
    if (stack == "vector") o.v = n;
    if (stack == "exec") o.x = n;
  };
  if (op == "dup" || op == "pop") {
    same(1);
    return o;
  }
  if (op == "swap") {
    same(2);
    return o;
  }
  if (op == "rot") {
    same(3);
    return o;
  }
  if (op == "shove" || op == "yank" || op == "yankdup") {
    if (stack == "integer") {
      o.i = 2;
    } else {
      same(1);
      o.i = 1;
    }
    return o;
  }
  if (op == "flush" || op == "stackdepth" || op == "rand" || op == "noop" || op == "urand") return o;
  if (stack == "input") {
    if (op == "index") o.i = 1;
    return o;
  }
  if (op == "fromboolean") {
    o.b = 1;
    return o;
  }
  if (op == "frominteger") {
    o.i = 1;
    return o;
  }
  if (op == "fromfloat") {
    o.f = 1;
    return o;
  }
  static const std::set<std::string> unary = {"not", "abs", "cos", "exp", "ln", "log", "neg", "sin", "tan"};
  if (stack == "exec") {
    if (op == "=") o.x = 2;
    if (op == "do*count" || op == "do*times") o.i = 1, o.x = 1;
    if (op == "do*range") o.i = 2, o.x = 1;
    if (op == "if") o.b = 1, o.x = 2;
    if (op == "iflt") o.f = 2, o.x = 2;
    return o;
  }
  if (stack == "vector") {
    if (op == "mag") o.v = 1;
    else if (op == "scale") o.v = 1, o.f = 1;
    else if (op == "dim+" || op == "dim*") o.v = 1, o.f = 1, o.i = 1;
    else if (op == "apply") o.v = 1, o.x = 1;
    else if (op == "zip") o.v = 2, o.x = 1;
    else if (op == "between") o.v = 2, o.f = 1;
    else if (op == "wrand") o.f = 1;
    else if (op == "current" || op == "best") {
    } else o.v = 2;
    return o;
  }
  same(unary.contains(op) ? 1 : 2);
  return o;
}

inline const std::vector<pushopt::FunctionId>& all_functions() {
  static const std::vector<pushopt::FunctionId> ids = {pushopt::FunctionId::F1, pushopt::FunctionId::F9,
                                                       pushopt::FunctionId::F12, pushopt::FunctionId::F13,
                                                       pushopt::FunctionId::F14};
  return ids;
}

inline double relative_error(double got, double want) {
  const double scale = std::max(1.0, std::fabs(want));
  return std::fabs(got - want) / scale;
}

}  // namespace testing_support
