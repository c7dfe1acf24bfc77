#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pushopt/harness.hpp"
#include "pushopt/hybrid.hpp"

namespace pushopt {

struct UsageRow {
  std::size_t rank = 0;
  std::string instruction;
  std::uint64_t count = 0;
  double rate = 0.0;
};

enum class UsageMode {
  /// Occurrences in the program text.
  Static,
  /// Executions during a run of each program.
  Dynamic,
};

/// Instruction occurrence counts over `programs`, literals excluded, sorted by
/// count descending then name. `top_k == 0` keeps every row. Rates are
/// normalised over all counted instructions, so they sum to 1 before truncation.
std::vector<UsageRow> instruction_usage(const std::vector<Program>& programs, std::size_t top_k = 0);

/// Same table, counting executions while each program runs on `problem`.
std::vector<UsageRow> dynamic_instruction_usage(const std::vector<Program>& programs, const Problem& problem,
                                                const RunConfig& config, std::size_t top_k = 0);

std::vector<UsageRow> rank_usage(const std::vector<std::uint64_t>& counts, std::size_t top_k);

inline constexpr double kSimplifyTolerance = 1e-6;

struct SimplifyStep {
  std::size_t removed_index = 0;
  std::string removed_item;
  double before = 0.0;
  double after = 0.0;
};

struct SimplifyResult {
  Program program;
  double initial_fitness = 0.0;
  double final_fitness = 0.0;
  std::vector<SimplifyStep> steps;
};

/// Greedily removes items whose removal keeps the paired-seed fitness within
/// new <= old * (1 + tolerance), repeating until no removal is accepted.
/// Programs are never reduced below one item.
SimplifyResult simplify(const Program& program, const ProblemFamily& family, std::size_t repeats,
                        const RunConfig& config, double tolerance = kSimplifyTolerance);

/// A stand-alone program or a hybrid pool.
struct Optimiser {
  std::string name;
  std::variant<Program, Pool> body;
};

struct ProblemCase {
  std::string name;
  std::shared_ptr<const BenchmarkFunction> function;
};

struct ErrorTable {
  std::vector<std::string> optimisers;
  std::vector<std::string> problems;
  std::size_t runs = 0;
  /// [optimiser][problem]
  std::vector<std::vector<double>> mean;
  /// [optimiser][problem][run]
  std::vector<std::vector<std::vector<double>>> per_run;
  /// Midranks per problem column, 1 = lowest mean error.
  std::vector<std::vector<double>> ranks;
  std::vector<double> mean_rank;
};

/// Re-runs each optimiser `runs` times per problem with identity transforms.
/// Run r of every optimiser shares one seed, so comparisons are paired.
ErrorTable reevaluate(const std::vector<Optimiser>& optimisers, const std::vector<ProblemCase>& problems,
                      std::size_t runs, const RunConfig& config, std::size_t jobs = 1);

/// Average ranks with ties sharing the mean of their positions.
std::vector<double> midranks(const std::vector<double>& values);

}  // namespace pushopt
