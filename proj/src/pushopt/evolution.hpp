#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pushopt/harness.hpp"
#include "pushopt/push/program.hpp"

namespace pushopt {

struct OperatorRates {
  double crossover = 0.4;
  double mutation = 0.4;
  double reproduction = 0.2;
};

/// Ranges for ephemeral random constants frozen into generated programs.
struct ErcRanges {
  double float_lo = -1.0;
  double float_hi = 1.0;
  std::int64_t integer_lo = -10;
  std::int64_t integer_hi = 10;
};

struct EvolutionConfig {
  std::size_t population_size = 200;
  std::size_t generations = 50;
  std::size_t tournament_size = 5;
  std::size_t size_limit = kDefaultSizeLimit;
  OperatorRates rates;
  ErcRanges erc;
  InstructionSet instruction_set = InstructionSet::standard();
  /// Swarm shape, execution limit and rand ranges used by fitness evaluation.
  RunConfig run;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  /// Worker threads for fitness evaluation; results do not depend on it.
  std::size_t jobs = 1;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double best_so_far = 0.0;
};

struct EvolvedResult {
  Program best_program;
  double best_fitness = 0.0;
  std::vector<GenerationStats> stats;
  std::vector<Program> population;
  std::vector<double> fitnesses;
};

/// Length uniform in [1, size_limit]; items uniform over the set's atoms.
Program random_program(const InstructionSet& set, std::size_t size_limit, Rng& rng,
                       const ErcRanges& erc = {});
Item random_atom(const InstructionSet& set, Rng& rng, const ErcRanges& erc = {});

enum class MutationKind { Replace, Insert, Delete };

/// Applies one point-replace, insert or delete at a uniform position. Inserts at
/// the size limit and deletes from length-1 programs leave the length unchanged.
Program mutate(const Program& parent, const InstructionSet& set, std::size_t size_limit, Rng& rng,
               const ErcRanges& erc = {});
Program mutate(const Program& parent, MutationKind kind, std::size_t position, const InstructionSet& set,
               std::size_t size_limit, Rng& rng, const ErcRanges& erc = {});

/// One-point crossover: child = a[0, cut) + b[cut, |b|) with cut uniform in [0, min(|a|,|b|)].
Program crossover(const Program& a, const Program& b, std::size_t size_limit, Rng& rng);
Program crossover_at(const Program& a, const Program& b, std::size_t cut, std::size_t size_limit);

/// Index of the lowest fitness among k uniform draws with replacement; ties go to the first drawn.
std::size_t tournament_select(std::span<const double> fitnesses, std::size_t k, Rng& rng);

/// Called after each generation (generation 0 is the initial population).
using GenerationCallback =
    std::function<void(const GenerationStats&, std::span<const Program>, std::span<const double>)>;

EvolvedResult evolve(const EvolutionConfig& config, const ProblemFamily& family,
                     const GenerationCallback& on_generation = {});

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace pushopt
