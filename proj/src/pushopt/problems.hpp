#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pushopt/push/state.hpp"
#include "pushopt/rng.hpp"

namespace pushopt {

/// Benchmark functions taken from the CEC 2005 suite, plus user-registered ones.
enum class FunctionId { F1, F9, F12, F13, F14, External };

std::string_view function_name(FunctionId id);
/// Throws UnsupportedFunction for anything other than F1/F9/F12/F13/F14.
FunctionId parse_function_id(std::string_view name);

class UnsupportedFunction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Bounds {
  Vector lo;
  Vector hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(std::span<const double> x) const;
  static Bounds cube(std::size_t dim, double lo, double hi) {
    return {Vector(dim, lo), Vector(dim, hi)};
  }
};

using Objective = std::function<double(std::span<const double>)>;

/// An untransformed objective whose minimum error is 0 at `optimum()`.
class BenchmarkFunction {
 public:
  /// Deterministic in (id, dim, seed): shift vectors and F12 matrices come from `seed`.
  static BenchmarkFunction make(FunctionId id, std::size_t dim, std::uint64_t seed);
  /// Wraps an externally supplied objective (e.g. the CEC composition functions).
  static BenchmarkFunction external(std::string name, Bounds bounds, Objective objective,
                                    Vector optimum = {});

  FunctionId id() const { return id_; }
  const std::string& name() const { return name_; }
  std::size_t dim() const { return bounds_.dim(); }
  const Bounds& bounds() const { return bounds_; }
  /// Location of the global optimum in function coordinates (may be empty for external functions).
  const Vector& optimum() const { return shift_; }

  /// F12 parameters (empty for other functions).
  const std::vector<std::int64_t>& f12_a() const { return a_; }
  const std::vector<std::int64_t>& f12_b() const { return b_; }
  /// Optional row-major rotation for F14; identity when empty.
  const Vector& rotation() const { return rotation_; }
  void set_rotation(Vector rotation);
  void override_bounds(Bounds bounds);

  double error(std::span<const double> x) const;

 private:
  FunctionId id_ = FunctionId::External;
  std::string name_;
  Bounds bounds_;
  Vector shift_;
  std::vector<std::int64_t> a_, b_;
  Vector f12_target_;
  Vector rotation_;
  Objective external_;
};

/// Per-axis reparameterisation g(x)_i = flip_i * scale_i * (x_i - c_i) + c_i + translation_i,
/// where c is the bounds centre.
struct Transform {
  Vector translation;
  Vector scale;
  Vector flip;

  static Transform identity(std::size_t dim);
  bool is_identity() const;
  /// Maps a search point into function coordinates.
  Vector apply(std::span<const double> x, const Bounds& bounds) const;
  /// Maps a function-coordinate point back to search coordinates.
  Vector inverse(std::span<const double> y, const Bounds& bounds) const;
};

/// Any source of uniform [0,1) draws.
using UniformSource = std::function<double()>;

/// Random translation of up to half the half-range, scaling in [0.5, 2] and 50% flips,
/// with translation clamped so the optimum's pre-image stays inside `bounds`.
Transform sample_transform(const Bounds& bounds, const Vector& optimum, const UniformSource& uniform);
Transform sample_transform(const Bounds& bounds, const Vector& optimum, Rng& rng);

/// A benchmark function composed with an instance transform.
class Problem {
 public:
  Problem(std::shared_ptr<const BenchmarkFunction> function, Transform transform);
  explicit Problem(BenchmarkFunction function);

  const BenchmarkFunction& function() const { return *function_; }
  std::shared_ptr<const BenchmarkFunction> function_ptr() const { return function_; }
  const Transform& transform() const { return transform_; }
  std::size_t dim() const { return function_->dim(); }
  const Bounds& bounds() const { return function_->bounds(); }

  /// Throws std::invalid_argument when x has the wrong length.
  double evaluate(std::span<const double> x) const;
  /// Optimum in search coordinates (empty if unknown).
  Vector optimum_location() const;

 private:
  std::shared_ptr<const BenchmarkFunction> function_;
  Transform transform_;
  bool identity_ = false;
};

}  // namespace pushopt
