#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pushopt {

/// Named stream tags used to split independent RNG streams from one master seed.
enum class Stream : std::uint64_t {
  InitialPoints = 1,
  MemberInterpreter = 2,
  ProgramSelection = 3,
  Repeat = 4,
  Transform = 5,
  FunctionParams = 6,
  Population = 7,
  Fitness = 8,
  Variation = 9,
  Reevaluation = 10,
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a master seed and a path of (tag, index...) words.
/// Distinct paths give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                 std::initializer_list<std::uint64_t> path = {}) {
  std::uint64_t s = mix64(master ^ mix64(static_cast<std::uint64_t>(tag)));
  for (auto p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

/// Seeded random stream. All draws are computed from raw 64-bit words so that
/// results do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] (inclusive), unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace pushopt
