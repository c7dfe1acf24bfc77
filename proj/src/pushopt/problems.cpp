#include "pushopt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pushopt {

namespace {

constexpr double kPi = std::numbers::pi;

struct FunctionSpec {
  FunctionId id;
  const char* name;
  double lo;
  double hi;
};

constexpr FunctionSpec kSpecs[] = {
    {FunctionId::F1, "F1", -100.0, 100.0},
    {FunctionId::F9, "F9", -5.0, 5.0},
    {FunctionId::F12, "F12", -kPi, kPi},
    {FunctionId::F13, "F13", -3.0, 1.0},
    {FunctionId::F14, "F14", -100.0, 100.0},
};

const FunctionSpec& spec_of(FunctionId id) {
  for (const auto& s : kSpecs) {
    if (s.id == id) return s;
  }
  throw UnsupportedFunction("unsupported function id");
}

double sphere(std::span<const double> z) {
  double sum = 0.0;
  for (double v : z) sum += v * v;
  return sum;
}

double rastrigin(std::span<const double> z) {
  double sum = 0.0;
  for (double v : z) sum += v * v - 10.0 * std::cos(2.0 * kPi * v) + 10.0;
  return sum;
}

double griewank_rosenbrock(std::span<const double> z) {
  const std::size_t n = z.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = z[i];
    const double y = z[(i + 1) % n];
    const double rosen = 100.0 * (x * x - y) * (x * x - y) + (x - 1.0) * (x - 1.0);
    sum += rosen * rosen / 4000.0 - std::cos(rosen) + 1.0;
  }
  return sum;
}

double schaffer_f6(double x, double y) {
  const double r2 = x * x + y * y;
  const double s = std::sin(std::sqrt(r2));
  const double d = 1.0 + 0.001 * r2;
  return 0.5 + (s * s - 0.5) / (d * d);
}

double expanded_schaffer(std::span<const double> z) {
  const std::size_t n = z.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += schaffer_f6(z[i], z[(i + 1) % n]);
  return sum;
}

}  // namespace

std::string_view function_name(FunctionId id) {
  if (id == FunctionId::External) return "external";
  return spec_of(id).name;
}

FunctionId parse_function_id(std::string_view name) {
  for (const auto& s : kSpecs) {
    if (name == s.name) return s.id;
  }
  throw UnsupportedFunction("unsupported function id: " + std::string(name));
}

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  }
  return true;
}

BenchmarkFunction BenchmarkFunction::make(FunctionId id, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("dimension must be at least 1");
  const FunctionSpec& spec = spec_of(id);
  BenchmarkFunction f;
  f.id_ = id;
  f.name_ = spec.name;
  f.bounds_ = Bounds::cube(dim, spec.lo, spec.hi);

  Rng rng(derive_seed(seed, Stream::FunctionParams, {static_cast<std::uint64_t>(id), dim}));
  f.shift_.resize(dim);
  if (id == FunctionId::F12) {
    for (auto& a : f.shift_) a = rng.uniform(-kPi, kPi);
    f.a_.resize(dim * dim);
    f.b_.resize(dim * dim);
    for (auto& v : f.a_) v = rng.uniform_int(-100, 100);
    for (auto& v : f.b_) v = rng.uniform_int(-100, 100);
    f.f12_target_.assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        f.f12_target_[i] += static_cast<double>(f.a_[i * dim + j]) * std::sin(f.shift_[j]) +
                            static_cast<double>(f.b_[i * dim + j]) * std::cos(f.shift_[j]);
      }
    }
  } else {
    // keep the optimum inside the central 80% of each axis
    const double margin = 0.1 * (spec.hi - spec.lo);
    for (auto& o : f.shift_) o = rng.uniform(spec.lo + margin, spec.hi - margin);
  }
  return f;
}

BenchmarkFunction BenchmarkFunction::external(std::string name, Bounds bounds, Objective objective,
                                              Vector optimum) {
  if (bounds.dim() == 0 || bounds.hi.size() != bounds.dim()) {
    throw std::invalid_argument("external function needs matching non-empty bounds");
  }
  for (std::size_t i = 0; i < bounds.dim(); ++i) {
    if (!(bounds.lo[i] < bounds.hi[i]) || !std::isfinite(bounds.lo[i]) || !std::isfinite(bounds.hi[i])) {
      throw std::invalid_argument("bounds must be finite with lo < hi");
    }
  }
  if (!optimum.empty() && optimum.size() != bounds.dim()) {
    throw std::invalid_argument("optimum has the wrong dimension");
  }
  BenchmarkFunction f;
  f.id_ = FunctionId::External;
  f.name_ = std::move(name);
  f.bounds_ = std::move(bounds);
  f.shift_ = std::move(optimum);
  f.external_ = std::move(objective);
  return f;
}

void BenchmarkFunction::set_rotation(Vector rotation) {
  if (!rotation.empty() && rotation.size() != dim() * dim()) {
    throw std::invalid_argument("rotation must be a D x D matrix");
  }
  rotation_ = std::move(rotation);
}

void BenchmarkFunction::override_bounds(Bounds bounds) {
  if (bounds.dim() != dim() || bounds.hi.size() != dim()) {
    throw std::invalid_argument("bounds override has the wrong dimension");
  }
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!(bounds.lo[i] < bounds.hi[i])) throw std::invalid_argument("bounds must satisfy lo < hi");
  }
  bounds_ = std::move(bounds);
}

double BenchmarkFunction::error(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("point has the wrong dimension");
  const std::size_t n = dim();
  switch (id_) {
    case FunctionId::External:
      return external_(x);
    case FunctionId::F12: {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double b = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          b += static_cast<double>(a_[i * n + j]) * std::sin(x[j]) +
               static_cast<double>(b_[i * n + j]) * std::cos(x[j]);
        }
        const double d = f12_target_[i] - b;
        sum += d * d;
      }
      return sum;
    }
    default:
      break;
  }
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] - shift_[i];
  switch (id_) {
    case FunctionId::F1:
      return sphere(z);
    case FunctionId::F9:
      return rastrigin(z);
    case FunctionId::F13:
      for (auto& v : z) v += 1.0;
      return griewank_rosenbrock(z);
    case FunctionId::F14: {
      if (rotation_.empty()) return expanded_schaffer(z);
      Vector r(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) r[j] += z[i] * rotation_[i * n + j];
      }
      return expanded_schaffer(r);
    }
    default:
      throw UnsupportedFunction("unsupported function id");
  }
}

Transform Transform::identity(std::size_t dim) {
  return {Vector(dim, 0.0), Vector(dim, 1.0), Vector(dim, 1.0)};
}

bool Transform::is_identity() const {
  return std::all_of(translation.begin(), translation.end(), [](double t) { return t == 0.0; }) &&
         std::all_of(scale.begin(), scale.end(), [](double s) { return s == 1.0; }) &&
         std::all_of(flip.begin(), flip.end(), [](double f) { return f == 1.0; });
}

Vector Transform::apply(std::span<const double> x, const Bounds& bounds) const {
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = 0.5 * (bounds.lo[i] + bounds.hi[i]);
    y[i] = flip[i] * scale[i] * (x[i] - c) + c + translation[i];
  }
  return y;
}

Vector Transform::inverse(std::span<const double> y, const Bounds& bounds) const {
  Vector x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double c = 0.5 * (bounds.lo[i] + bounds.hi[i]);
    x[i] = c + (y[i] - c - translation[i]) / (flip[i] * scale[i]);
  }
  return x;
}

Transform sample_transform(const Bounds& bounds, const Vector& optimum, const UniformSource& uniform) {
  const std::size_t n = bounds.dim();
  Transform t;
  t.translation.resize(n);
  t.scale.resize(n);
  t.flip.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double half = 0.5 * (bounds.hi[i] - bounds.lo[i]);
    const double c = 0.5 * (bounds.hi[i] + bounds.lo[i]);
    double shift = (2.0 * uniform() - 1.0) * 0.5 * half;
    const double scale = 0.5 + 1.5 * uniform();
    const double flip = uniform() < 0.5 ? -1.0 : 1.0;
    if (!optimum.empty()) {
      // the optimum's pre-image is c + (o - c - t) / (flip * scale); keep it in bounds
      const double reach = scale * half * (1.0 - 1e-12);
      const double lo = std::max(-0.5 * half, optimum[i] - c - reach);
      const double hi = std::min(0.5 * half, optimum[i] - c + reach);
      shift = lo <= hi ? std::clamp(shift, lo, hi) : std::clamp(optimum[i] - c, -reach, reach);
    }
    t.translation[i] = shift;
    t.scale[i] = scale;
    t.flip[i] = flip;
  }
  return t;
}

Transform sample_transform(const Bounds& bounds, const Vector& optimum, Rng& rng) {
  return sample_transform(bounds, optimum, [&rng] { return rng.uniform(); });
}

Problem::Problem(std::shared_ptr<const BenchmarkFunction> function, Transform transform)
    : function_(std::move(function)), transform_(std::move(transform)) {
  if (transform_.translation.size() != function_->dim() || transform_.scale.size() != function_->dim() ||
      transform_.flip.size() != function_->dim()) {
    throw std::invalid_argument("transform has the wrong dimension");
  }
  identity_ = transform_.is_identity();
}

Problem::Problem(BenchmarkFunction function)
    : function_(std::make_shared<const BenchmarkFunction>(std::move(function))),
      transform_(Transform::identity(function_->dim())),
      identity_(true) {}

double Problem::evaluate(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("point has the wrong dimension");
  if (identity_) return function_->error(x);
  return function_->error(transform_.apply(x, bounds()));
}

Vector Problem::optimum_location() const {
  if (function_->optimum().empty()) return {};
  return transform_.inverse(function_->optimum(), bounds());
}

}  // namespace pushopt
