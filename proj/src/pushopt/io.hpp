#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pushopt/analysis.hpp"
#include "pushopt/evolution.hpp"
#include "pushopt/hybrid.hpp"

namespace pushopt {

using Json = nlohmann::ordered_json;

/// Malformed or unknown configuration content.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tracks which keys of an object were read so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) throw ConfigError(context_ + ": expected an object");
  }

  bool has(const std::string& key) {
    if (!j_.contains(key)) return false;
    used_.insert(key);
    return true;
  }

  const Json& at(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(context_ + ": missing key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return convert<T>(key, j_.at(key));
  }

  template <class T>
  T require(const std::string& key) {
    if (!has(key)) throw ConfigError(context_ + ": missing key '" + key + "'");
    return convert<T>(key, j_.at(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.contains(key)) throw ConfigError(context_ + ": unknown key '" + key + "'");
    }
  }

 private:
  template <class T>
  T convert(const std::string& key, const Json& v) const {
    try {
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.template get<std::int64_t>() >= 0)) {
          throw ConfigError(context_ + ": '" + key + "' must be a non-negative integer");
        }
      }
      if constexpr (std::is_same_v<T, std::int64_t>) {
        if (!v.is_number_integer()) throw ConfigError(context_ + ": '" + key + "' must be an integer");
      }
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError(context_ + ": '" + key + "' must be a number");
      }
      return v.template get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(context_ + ": bad value for '" + key + "': " + e.what());
    }
  }

  const Json& j_;
  std::string context_;
  std::set<std::string> used_;
};

/// Where a problem's instance transform comes from.
enum class TransformKind { Identity, Random, Explicit };

/// Problem descriptor: {id, D, seed, transform, bounds}.
struct ProblemSpec {
  FunctionId id = FunctionId::F1;
  std::size_t dim = 2;
  /// Seeds the function parameters (shift vectors, F12 matrices).
  std::uint64_t seed = 0;
  TransformKind transform = TransformKind::Identity;
  Transform explicit_transform;
  std::optional<Bounds> bounds;

  std::shared_ptr<const BenchmarkFunction> function() const;
  ProblemFamily family() const;
  /// The instance used for repeat `repeat` of a run seeded with `seed`.
  Problem instance(std::uint64_t seed, std::size_t repeat) const;
};

ProblemSpec problem_spec_from_json(const Json& j);
Json to_json(const ProblemSpec& spec);

/// Swarm/harness options shared by every command.
Json run_config_to_json(const RunConfig& config);
/// Reads the keys of `j` that belong to a RunConfig and erases them from `j`.
RunConfig run_config_from_json(Json& j, RunConfig base = {});

/// Evolve configuration: the training problem plus every evolution parameter.
/// Omitted keys keep their defaults; unknown keys throw ConfigError.
struct EvolveSpec {
  ProblemSpec problem;
  EvolutionConfig evolution;
};

EvolveSpec evolve_spec_from_json(const Json& j);
Json to_json(const EvolveSpec& spec);

Json checkpoint_to_json(const GenerationStats& stats, std::span<const Program> population,
                        std::span<const double> fitnesses);

struct Checkpoint {
  GenerationStats stats;
  std::vector<Program> programs;
  std::vector<double> fitnesses;
};
Checkpoint checkpoint_from_json(const Json& j);

Json to_json(const PoolEntry& entry);
PoolEntry pool_entry_from_json(const Json& j, const std::filesystem::path& base_dir = {});

/// Reads a pool manifest: {"programs": [{file | program, fitness, source, training_function}]}.
std::vector<PoolEntry> load_pool_manifest(const std::filesystem::path& path);
/// Every best.json below `dir`, in path order.
std::vector<PoolEntry> scan_run_directory(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Shortest round-trip text; "inf" for the out-of-bounds sentinel and infinities.
std::string csv_number(double value);

std::string trajectory_csv_header(std::size_t dim);
/// Appends one row per record to `out`.
void append_trajectory_csv(std::string& out, std::string_view run_id, std::size_t repeat,
                           const std::vector<TrajectoryRecord>& records);

struct RepeatRow {
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  double pbest = 0.0;
  std::size_t evaluations = 0;
};
/// repeat,seed,pbest,evaluations rows followed by a row "mean,,<mean>,".
std::string results_csv(const std::vector<RepeatRow>& rows);

struct UsageSet {
  std::string label;
  std::vector<UsageRow> rows;
};
std::string usage_csv(const std::vector<UsageSet>& sets);

/// optimiser,<problem...>,mean_rank
std::string error_table_csv(const ErrorTable& table);
/// optimiser,problem,run,error
std::string raw_errors_csv(const ErrorTable& table);

}  // namespace pushopt
