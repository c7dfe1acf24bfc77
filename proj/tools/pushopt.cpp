// pushopt: evolve, run, hybridise and analyse Push optimisers.
//
// Every command is forwarded to the library as a JSON request; the library
// writes a manifest alongside the outputs so `pushopt replay` can reproduce them.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pushopt/pushopt.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct ProblemFlags {
  std::string problem_file;
  std::string function;
  std::size_t dim = 2;
  std::uint64_t function_seed = 0;
  std::string transform = "identity";

  void add(CLI::App* app) {
    auto* p = app->add_option("--problem", problem_file, "problem descriptor (JSON)");
    auto* f = app->add_option("--function", function, "benchmark id: F1, F9, F12, F13 or F14");
    app->add_option("--dim", dim, "dimension used with --function")->excludes(p);
    app->add_option("--function-seed", function_seed, "seed for the function's shift parameters")->excludes(p);
    app->add_option("--transform", transform, "identity or random, used with --function")
        ->check(CLI::IsMember({"identity", "random"}))
        ->excludes(p);
    p->excludes(f);
  }

  bool given() const { return !problem_file.empty() || !function.empty(); }

  void fill(Json& req) const {
    if (!problem_file.empty()) {
      req["problem_file"] = problem_file;
    } else {
      req["function"] = function;
      req["D"] = dim;
      req["function_seed"] = function_seed;
      req["transform"] = transform;
    }
  }
};

struct RunFlags {
  std::size_t swarm = 1;
  std::size_t moves = 1000;
  std::size_t limit = 100;
  std::string input_mode = "scalar";

  void add(CLI::App* app) {
    app->add_option("--swarm", swarm, "swarm size")->capture_default_str();
    app->add_option("--moves", moves, "moves per run")->capture_default_str();
    app->add_option("--limit", limit, "execution limit per move")->capture_default_str();
    app->add_option("--input-mode", input_mode, "bounds on the input stack: scalar or per-axis")
        ->check(CLI::IsMember({"scalar", "per-axis"}))
        ->capture_default_str();
  }

  void fill(Json& req) const {
    req["swarm"] = swarm;
    req["moves"] = moves;
    req["execution_limit"] = limit;
    req["input_mode"] = input_mode;
  }
};

int submit(const std::string& command, const Json& request) {
  char* manifest = nullptr;
  const pushopt_status status = pushopt_command(command.c_str(), request.dump().c_str(), &manifest);
  if (status != PUSHOPT_OK) {
    std::cerr << "pushopt " << command << ": " << pushopt_status_name(status) << ": " << pushopt_last_error()
              << "\n";
    return status == PUSHOPT_ERR_CONFIG ? kExitUsage : kExitFailure;
  }
  const Json m = Json::parse(manifest);
  pushopt_string_free(manifest);
  for (const auto& f : m["outputs"]) std::cout << "wrote " << f.get<std::string>() << "\n";
  if (!m["summary"].empty()) std::cout << m["summary"].dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolve and run Push programs as black-box optimisers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pushopt_version()));

  // evolve
  auto* evolve = app.add_subcommand("evolve", "evolve an optimiser from a JSON config");
  std::string config_file;
  std::optional<std::uint64_t> evolve_seed;
  std::optional<std::size_t> jobs;
  std::string evolve_out;
  evolve->add_option("--config", config_file, "evolution config (JSON)")->required()->check(CLI::ExistingFile);
  evolve->add_option("--seed", evolve_seed, "overrides the config seed");
  evolve->add_option("--jobs", jobs, "parallel fitness workers");
  evolve->add_option("--out", evolve_out, "output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "run a program as an optimiser");
  std::string run_program;
  ProblemFlags run_problem;
  RunFlags run_flags;
  std::size_t run_repeats = 1;
  std::uint64_t run_seed = 0;
  std::string run_trajectory, run_out;
  run->add_option("--program", run_program, "program file")->required();
  run_problem.add(run);
  run_flags.add(run);
  run->add_option("--repeats", run_repeats, "independent runs")->capture_default_str();
  run->add_option("--seed", run_seed, "master seed")->capture_default_str();
  run->add_option("--trajectory", run_trajectory, "trajectory CSV");
  run->add_option("--out", run_out, "results CSV")->required();

  // hybrid
  auto* hybrid = app.add_subcommand("hybrid", "run a heterogeneous swarm drawn from a pool");
  std::string pool_manifest, pool_dir, hybrid_mode = "per-move";
  std::optional<std::size_t> top;
  ProblemFlags hybrid_problem;
  RunFlags hybrid_flags;
  std::size_t hybrid_repeats = 1;
  std::uint64_t hybrid_seed = 0;
  std::string hybrid_trajectory, hybrid_out;
  auto* manifest_opt = hybrid->add_option("--manifest", pool_manifest, "pool manifest (JSON)");
  auto* dir_opt = hybrid->add_option("--dir", pool_dir, "directory of evolution runs");
  auto* top_opt = hybrid->add_option("--top", top, "keep the n best programs found under --dir");
  manifest_opt->excludes(dir_opt)->excludes(top_opt);
  top_opt->needs(dir_opt);
  hybrid->add_option("--mode", hybrid_mode, "per-move or persistent")
      ->check(CLI::IsMember({"per-move", "persistent"}))
      ->capture_default_str();
  hybrid_problem.add(hybrid);
  hybrid_flags.add(hybrid);
  hybrid->add_option("--repeats", hybrid_repeats, "independent runs")->capture_default_str();
  hybrid->add_option("--seed", hybrid_seed, "master seed")->capture_default_str();
  hybrid->add_option("--trajectory", hybrid_trajectory, "trajectory CSV");
  hybrid->add_option("--out", hybrid_out, "results CSV")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "post-hoc analysis");
  analyze->require_subcommand(1);

  auto* usage = analyze->add_subcommand("usage", "instruction usage tables");
  std::vector<std::string> usage_inputs;
  std::string usage_mode = "static", usage_out;
  std::size_t usage_top = 20;
  ProblemFlags usage_problem;
  RunFlags usage_flags;
  std::uint64_t usage_seed = 0;
  usage->add_option("--input", usage_inputs, "run directory, best.json or program file (repeatable)")
      ->required();
  usage->add_option("--mode", usage_mode, "static or dynamic")
      ->check(CLI::IsMember({"static", "dynamic"}))
      ->capture_default_str();
  usage->add_option("--top", usage_top, "rows per set, 0 keeps all")->capture_default_str();
  usage_problem.add(usage);
  usage_flags.add(usage);
  usage->add_option("--seed", usage_seed, "seed for dynamic counting")->capture_default_str();
  usage->add_option("--out", usage_out, "usage CSV")->required();

  auto* simplify = analyze->add_subcommand("simplify", "remove items that do not affect fitness");
  std::string simplify_program, simplify_steps, simplify_out;
  ProblemFlags simplify_problem;
  RunFlags simplify_flags;
  std::size_t simplify_repeats = 10;
  std::uint64_t simplify_seed = 0;
  double tolerance = 1e-6;
  simplify->add_option("--program", simplify_program, "program file")->required();
  simplify_problem.add(simplify);
  simplify_flags.add(simplify);
  simplify->add_option("--repeats", simplify_repeats, "fitness repeats")->capture_default_str();
  simplify->add_option("--seed", simplify_seed, "fitness seed")->capture_default_str();
  simplify->add_option("--tolerance", tolerance, "relative fitness tolerance")->capture_default_str();
  simplify->add_option("--steps", simplify_steps, "CSV log of accepted removals");
  simplify->add_option("--out", simplify_out, "simplified program file")->required();

  auto* reeval = analyze->add_subcommand("reevaluate", "error table over untransformed problems");
  std::vector<std::string> reeval_programs, reeval_pools, reeval_functions, reeval_problems;
  std::size_t reeval_dim = 2, runs = 25, reeval_jobs = 1;
  std::uint64_t reeval_function_seed = 0, reeval_seed = 0;
  RunFlags reeval_flags;
  std::string reeval_raw, reeval_out;
  reeval->add_option("--program", reeval_programs, "program file, best.json or run directory (repeatable)");
  reeval->add_option("--pool", reeval_pools, "pool manifest evaluated as one hybrid optimiser (repeatable)");
  auto* funcs = reeval->add_option("--functions", reeval_functions, "benchmark ids")->delimiter(',');
  auto* probs = reeval->add_option("--problem", reeval_problems, "problem descriptor (repeatable)");
  funcs->excludes(probs);
  reeval->add_option("--dim", reeval_dim, "dimension used with --functions")->capture_default_str();
  reeval->add_option("--function-seed", reeval_function_seed, "seed for shift parameters")->capture_default_str();
  reeval_flags.add(reeval);
  reeval->add_option("--runs", runs, "runs per problem")->capture_default_str();
  reeval->add_option("--seed", reeval_seed, "master seed")->capture_default_str();
  reeval->add_option("--jobs", reeval_jobs, "parallel workers")->capture_default_str();
  reeval->add_option("--raw", reeval_raw, "per-run errors CSV");
  reeval->add_option("--out", reeval_out, "error table CSV")->required();

  // replay
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  std::string replay_manifest, replay_out_dir;
  replay->add_option("manifest", replay_manifest, "manifest JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("--out-dir", replay_out_dir, "write outputs under this directory instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  auto usage_error = [](const std::string& message) {
    std::cerr << "pushopt: " << message << "\n";
    return kExitUsage;
  };

  if (evolve->parsed()) {
    Json req = {{"config_file", config_file}, {"out", evolve_out}};
    if (evolve_seed) req["seed"] = *evolve_seed;
    if (jobs) req["jobs"] = *jobs;
    return submit("evolve", req);
  }
  if (run->parsed()) {
    if (!run_problem.given()) return usage_error("run needs --problem or --function");
    Json req = {{"program_file", run_program}};
    run_problem.fill(req);
    run_flags.fill(req);
    req["repeats"] = run_repeats;
    req["seed"] = run_seed;
    if (!run_trajectory.empty()) req["trajectory"] = run_trajectory;
    req["out"] = run_out;
    return submit("run", req);
  }
  if (hybrid->parsed()) {
    if (pool_manifest.empty() && pool_dir.empty()) return usage_error("hybrid needs --manifest or --dir");
    if (!hybrid_problem.given()) return usage_error("hybrid needs --problem or --function");
    Json req;
    if (!pool_manifest.empty()) req["pool_manifest"] = pool_manifest;
    if (!pool_dir.empty()) req["dir"] = pool_dir;
    if (top) req["top"] = *top;
    req["mode"] = hybrid_mode;
    hybrid_problem.fill(req);
    hybrid_flags.fill(req);
    req["repeats"] = hybrid_repeats;
    req["seed"] = hybrid_seed;
    if (!hybrid_trajectory.empty()) req["trajectory"] = hybrid_trajectory;
    req["out"] = hybrid_out;
    return submit("hybrid", req);
  }
  if (usage->parsed()) {
    Json req = {{"inputs", usage_inputs}, {"mode", usage_mode}, {"top", usage_top}};
    if (usage_mode == "dynamic") {
      if (!usage_problem.given()) return usage_error("dynamic usage needs --problem or --function");
      usage_problem.fill(req);
      usage_flags.fill(req);
      req["seed"] = usage_seed;
    }
    req["out"] = usage_out;
    return submit("usage", req);
  }
  if (simplify->parsed()) {
    if (!simplify_problem.given()) return usage_error("simplify needs --problem or --function");
    Json req = {{"program_file", simplify_program}};
    simplify_problem.fill(req);
    simplify_flags.fill(req);
    req["repeats"] = simplify_repeats;
    req["seed"] = simplify_seed;
    req["tolerance"] = tolerance;
    if (!simplify_steps.empty()) req["steps"] = simplify_steps;
    req["out"] = simplify_out;
    return submit("simplify", req);
  }
  if (reeval->parsed()) {
    if (reeval_programs.empty() && reeval_pools.empty()) return usage_error("reevaluate needs --program or --pool");
    Json req;
    if (!reeval_programs.empty()) req["programs"] = reeval_programs;
    if (!reeval_pools.empty()) req["pools"] = reeval_pools;
    if (!reeval_problems.empty()) {
      Json problems = Json::array();
      for (const auto& p : reeval_problems) {
        std::ifstream in(p);
        if (!in) return usage_error("cannot read " + p);
        try {
          problems.push_back(Json::parse(in));
        } catch (const Json::parse_error& e) {
          return usage_error(p + ": " + e.what());
        }
      }
      req["problems"] = problems;
    } else {
      if (reeval_functions.empty()) return usage_error("reevaluate needs --functions or --problem");
      req["functions"] = reeval_functions;
      req["D"] = reeval_dim;
      req["function_seed"] = reeval_function_seed;
    }
    reeval_flags.fill(req);
    req["runs"] = runs;
    req["seed"] = reeval_seed;
    req["jobs"] = reeval_jobs;
    if (!reeval_raw.empty()) req["raw"] = reeval_raw;
    req["out"] = reeval_out;
    return submit("reevaluate", req);
  }
  if (replay->parsed()) {
    char* manifest = nullptr;
    const pushopt_status status = pushopt_replay(replay_manifest.c_str(),
                                                 replay_out_dir.empty() ? nullptr : replay_out_dir.c_str(),
                                                 &manifest);
    if (status != PUSHOPT_OK) {
      std::cerr << "pushopt replay: " << pushopt_status_name(status) << ": " << pushopt_last_error() << "\n";
      return status == PUSHOPT_ERR_CONFIG ? kExitUsage : kExitFailure;
    }
    const Json m = Json::parse(manifest);
    pushopt_string_free(manifest);
    for (const auto& f : m["outputs"]) std::cout << "wrote " << f.get<std::string>() << "\n";
    return 0;
  }
  return kExitUsage;
}
