#include "pushopt/pushopt.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "pushopt/commands.hpp"

struct pushopt_program {
  pushopt::Program program;
};

struct pushopt_problem {
  pushopt::Problem problem;
};

struct pushopt_pool {
  pushopt::Pool pool;
};

struct pushopt_result {
  pushopt::RunResult result;
};

namespace {

thread_local std::string g_last_error;

pushopt_status fail(pushopt_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

/// Runs `fn`, translating exceptions into status codes.
template <class Fn>
pushopt_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return PUSHOPT_OK;
  } catch (const pushopt::ParseError& e) {
    return fail(PUSHOPT_ERR_PARSE, e.what());
  } catch (const pushopt::EmptyPool& e) {
    return fail(PUSHOPT_ERR_EMPTY_POOL, e.what());
  } catch (const pushopt::UnsupportedFunction& e) {
    return fail(PUSHOPT_ERR_UNSUPPORTED_FUNCTION, e.what());
  } catch (const pushopt::ConfigError& e) {
    return fail(PUSHOPT_ERR_CONFIG, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PUSHOPT_ERR_CONFIG, e.what());
  } catch (const pushopt::IoError& e) {
    return fail(PUSHOPT_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(PUSHOPT_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PUSHOPT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(PUSHOPT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PUSHOPT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PUSHOPT_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

pushopt::RunConfig to_config(const pushopt_run_options* options) {
  pushopt_run_options o;
  pushopt_run_options_default(&o);
  if (options) o = *options;
  require(o.swarm_size > 0 && o.moves > 0 && o.execution_limit > 0, "run options must be positive");
  pushopt::RunConfig c;
  c.swarm_size = o.swarm_size;
  c.moves = o.moves;
  c.execution_limit = o.execution_limit;
  c.seed = o.seed;
  c.record_trajectory = o.record_trajectory != 0;
  return c;
}

}  // namespace

extern "C" {

const char* pushopt_version(void) { return "1.0.0"; }

const char* pushopt_status_name(pushopt_status status) {
  switch (status) {
    case PUSHOPT_OK: return "ok";
    case PUSHOPT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PUSHOPT_ERR_PARSE: return "parse error";
    case PUSHOPT_ERR_CONFIG: return "config error";
    case PUSHOPT_ERR_IO: return "io error";
    case PUSHOPT_ERR_UNSUPPORTED_FUNCTION: return "unsupported function";
    case PUSHOPT_ERR_EMPTY_POOL: return "empty pool";
    case PUSHOPT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pushopt_last_error(void) { return g_last_error.c_str(); }

void pushopt_string_free(char* s) { std::free(s); }

pushopt_status pushopt_program_parse(const char* text, pushopt_program** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new pushopt_program{pushopt::parse_program(text)};
  });
}

pushopt_status pushopt_program_load(const char* path, pushopt_program** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new pushopt_program{pushopt::parse_program(pushopt::read_text_file(path))};
  });
}

pushopt_status pushopt_program_print(const pushopt_program* program, char** out) {
  return guarded([&] {
    require(program && out, "null argument");
    *out = copy_string(pushopt::print_program(program->program));
  });
}

size_t pushopt_program_size(const pushopt_program* program) { return program ? program->program.size() : 0; }

void pushopt_program_free(pushopt_program* program) { delete program; }

pushopt_status pushopt_problem_create(const char* function, size_t dim, uint64_t function_seed,
                                      pushopt_problem** out) {
  return guarded([&] {
    require(function && out, "null argument");
    require(dim > 0, "dimension must be positive");
    auto f = pushopt::BenchmarkFunction::make(pushopt::parse_function_id(function), dim, function_seed);
    *out = new pushopt_problem{pushopt::Problem(std::move(f))};
  });
}

pushopt_status pushopt_problem_from_json(const char* descriptor, uint64_t seed, size_t repeat,
                                         pushopt_problem** out) {
  return guarded([&] {
    require(descriptor && out, "null argument");
    const auto spec = pushopt::problem_spec_from_json(pushopt::Json::parse(descriptor));
    *out = new pushopt_problem{spec.instance(seed, repeat)};
  });
}

size_t pushopt_problem_dim(const pushopt_problem* problem) { return problem ? problem->problem.dim() : 0; }

pushopt_status pushopt_problem_bounds(const pushopt_problem* problem, double* lo, double* hi) {
  return guarded([&] {
    require(problem && lo && hi, "null argument");
    const auto& b = problem->problem.bounds();
    std::copy(b.lo.begin(), b.lo.end(), lo);
    std::copy(b.hi.begin(), b.hi.end(), hi);
  });
}

pushopt_status pushopt_problem_evaluate(const pushopt_problem* problem, const double* x, size_t n,
                                        double* error) {
  return guarded([&] {
    require(problem && x && error, "null argument");
    *error = problem->problem.evaluate(std::span<const double>(x, n));
  });
}

void pushopt_problem_free(pushopt_problem* problem) { delete problem; }

void pushopt_run_options_default(pushopt_run_options* options) {
  if (!options) return;
  options->swarm_size = 1;
  options->moves = 1000;
  options->execution_limit = pushopt::kDefaultExecutionLimit;
  options->seed = 0;
  options->record_trajectory = 0;
}

pushopt_status pushopt_run(const pushopt_program* program, const pushopt_problem* problem,
                           const pushopt_run_options* options, pushopt_result** out) {
  return guarded([&] {
    require(program && problem && out, "null argument");
    *out = new pushopt_result{pushopt::run_optimisation(program->program, problem->problem, to_config(options))};
  });
}

pushopt_status pushopt_pool_create(pushopt_pool** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new pushopt_pool{};
  });
}

pushopt_status pushopt_pool_add(pushopt_pool* pool, const pushopt_program* program, double fitness) {
  return guarded([&] {
    require(pool && program, "null argument");
    pushopt::PoolEntry e;
    e.program = program->program;
    e.fitness = fitness;
    e.rank = pool->pool.size() + 1;
    pool->pool.entries.push_back(std::move(e));
  });
}

size_t pushopt_pool_size(const pushopt_pool* pool) { return pool ? pool->pool.size() : 0; }

void pushopt_pool_free(pushopt_pool* pool) { delete pool; }

pushopt_status pushopt_run_hybrid(const pushopt_pool* pool, const pushopt_problem* problem,
                                  const pushopt_run_options* options, int persistent, pushopt_result** out) {
  return guarded([&] {
    require(pool && problem && out, "null argument");
    const auto mode = persistent ? pushopt::AssignmentMode::Persistent : pushopt::AssignmentMode::PerMove;
    *out = new pushopt_result{pushopt::run_hybrid(pool->pool, problem->problem, to_config(options), mode)};
  });
}

double pushopt_result_pbest(const pushopt_result* result) { return result ? result->result.pbest : 0.0; }

size_t pushopt_result_evaluations(const pushopt_result* result) {
  return result ? result->result.evaluations : 0;
}

size_t pushopt_result_trajectory_size(const pushopt_result* result) {
  return result ? result->result.trajectory.size() : 0;
}

pushopt_status pushopt_result_pbest_point(const pushopt_result* result, double* out, size_t n) {
  return guarded([&] {
    require(result && out, "null argument");
    require(n == result->result.pbest_point.size(), "buffer length must equal the problem dimension");
    std::copy(result->result.pbest_point.begin(), result->result.pbest_point.end(), out);
  });
}

pushopt_status pushopt_result_trajectory_csv(const pushopt_result* result, char** out) {
  return guarded([&] {
    require(result && out, "null argument");
    const auto& t = result->result.trajectory;
    const std::size_t dim = t.empty() ? result->result.pbest_point.size() : t.front().point.size();
    std::string csv = pushopt::trajectory_csv_header(dim);
    pushopt::append_trajectory_csv(csv, "0", 0, t);
    *out = copy_string(csv);
  });
}

void pushopt_result_free(pushopt_result* result) { delete result; }

pushopt_status pushopt_command(const char* command, const char* request, char** manifest) {
  return guarded([&] {
    require(command && request, "null argument");
    const auto m = pushopt::execute_command(command, pushopt::Json::parse(request));
    if (manifest) *manifest = copy_string(m.dump(2));
  });
}

pushopt_status pushopt_replay(const char* manifest_path, const char* out_dir, char** manifest) {
  return guarded([&] {
    require(manifest_path, "null argument");
    std::optional<std::filesystem::path> dir;
    if (out_dir) dir = out_dir;
    const auto m = pushopt::replay_command(manifest_path, dir);
    if (manifest) *manifest = copy_string(m.dump(2));
  });
}

}  // extern "C"
