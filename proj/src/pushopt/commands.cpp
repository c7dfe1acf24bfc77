#include "pushopt/commands.hpp"

#include <cstdio>
#include <map>

namespace pushopt {

namespace fs = std::filesystem;

namespace {

struct Outputs {
  std::vector<std::string> files;

  void write(const fs::path& path, const std::string& text) {
    write_text_file(path, text);
    files.push_back(path.generic_string());
  }
  void write(const fs::path& path, const Json& j) {
    write_json_file(path, j);
    files.push_back(path.generic_string());
  }
};

Json make_manifest(const std::string& command, const Json& request, const Outputs& out, Json summary) {
  Json m;
  m["format"] = "pushopt-manifest";
  m["version"] = 1;
  m["command"] = command;
  m["request"] = request;
  m["outputs"] = out.files;
  m["summary"] = std::move(summary);
  return m;
}

fs::path manifest_path_for(const fs::path& primary) {
  fs::path p = primary;
  p += ".manifest.json";
  return p;
}

Program parse_request_program(const std::string& text) {
  try {
    return parse_program(text);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("program: ") + e.what());
  }
}

/// Accepts "program" (text) or "program_file"; records both in `resolved`.
Program resolve_program(ObjectReader& r, Json& resolved, const char* text_key = "program",
                        const char* file_key = "program_file") {
  std::string text;
  if (r.has(text_key)) {
    text = r.at(text_key).get<std::string>();
  } else if (r.has(file_key)) {
    text = read_text_file(r.at(file_key).get<std::string>());
  } else {
    throw ConfigError(std::string("missing '") + text_key + "' or '" + file_key + "'");
  }
  Program p = parse_request_program(text);
  if (r.has(file_key)) resolved[file_key] = r.at(file_key);
  resolved[text_key] = print_program(p);
  return p;
}

/// Accepts "problem" (object), "problem_file", or "function" with optional "D", "function_seed"
/// and "transform".
ProblemSpec resolve_problem(ObjectReader& r, Json& resolved) {
  ProblemSpec spec;
  if (r.has("problem")) {
    spec = problem_spec_from_json(r.at("problem"));
  } else if (r.has("problem_file")) {
    spec = problem_spec_from_json(read_json_file(r.at("problem_file").get<std::string>()));
  } else if (r.has("function")) {
    Json j = {{"id", r.at("function")}};
    if (r.has("D")) j["D"] = r.at("D");
    if (r.has("function_seed")) j["seed"] = r.at("function_seed");
    if (r.has("transform")) j["transform"] = r.at("transform");
    spec = problem_spec_from_json(j);
  } else {
    throw ConfigError("missing 'problem', 'problem_file' or 'function'");
  }
  resolved["problem"] = to_json(spec);
  return spec;
}

std::string require_path(ObjectReader& r, const char* key) {
  const std::string p = r.require<std::string>(key);
  if (p.empty()) throw ConfigError(std::string("'") + key + "' must not be empty");
  return p;
}

std::optional<std::string> optional_path(ObjectReader& r, const char* key, Json& resolved) {
  if (!r.has(key) || r.at(key).is_null()) return std::nullopt;
  const auto p = r.at(key).get<std::string>();
  resolved[key] = p;
  return p;
}

AssignmentMode parse_mode(const std::string& s) {
  if (s == "per-move") return AssignmentMode::PerMove;
  if (s == "persistent") return AssignmentMode::Persistent;
  throw ConfigError("mode must be 'per-move' or 'persistent'");
}

using Runner = std::function<RunResult(const Problem&, const RunConfig&)>;

/// Shared body of run and hybrid: `repeats` runs with paired per-repeat seeds.
Json run_repeats(const Runner& runner, const ProblemSpec& spec, RunConfig config, std::size_t repeats,
                 std::uint64_t seed, const std::optional<std::string>& trajectory, const std::string& out,
                 Outputs& outputs) {
  config.record_trajectory = trajectory.has_value();
  std::vector<RepeatRow> rows;
  std::string traj = trajectory_csv_header(spec.dim);
  const std::string run_id = std::to_string(seed);
  double sum = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    RunConfig cfg = config;
    cfg.seed = repeat_seed(seed, r);
    const Problem problem = spec.instance(seed, r);
    const RunResult result = runner(problem, cfg);
    rows.push_back({r, cfg.seed, result.pbest, result.evaluations});
    if (trajectory) append_trajectory_csv(traj, run_id, r, result.trajectory);
    sum += result.pbest;
  }
  outputs.write(out, results_csv(rows));
  if (trajectory) outputs.write(*trajectory, traj);
  return {{"mean_pbest", sum / static_cast<double>(repeats)}, {"repeats", repeats}};
}

Json cmd_run(const Json& request) {
  Json req = request;
  if (!req.is_object()) throw ConfigError("run: expected an object");
  const RunConfig config = run_config_from_json(req);
  ObjectReader r(req, "run");
  Json resolved;
  const Program program = resolve_program(r, resolved);
  const ProblemSpec spec = resolve_problem(r, resolved);
  resolved.update(run_config_to_json(config));
  const auto repeats = r.get<std::size_t>("repeats", 1);
  const auto seed = r.get<std::uint64_t>("seed", 0);
  if (repeats == 0) throw ConfigError("repeats must be positive");
  resolved["repeats"] = repeats;
  resolved["seed"] = seed;
  const auto trajectory = optional_path(r, "trajectory", resolved);
  const auto out = require_path(r, "out");
  resolved["out"] = out;
  r.finish();

  Outputs outputs;
  const Runner runner = [&](const Problem& p, const RunConfig& c) { return run_optimisation(program, p, c); };
  Json summary = run_repeats(runner, spec, config, repeats, seed, trajectory, out, outputs);
  Json manifest = make_manifest("run", resolved, outputs, summary);
  write_json_file(manifest_path_for(out), manifest);
  return manifest;
}

Pool resolve_pool(ObjectReader& r, Json& resolved) {
  const bool has_pool = r.has("pool");
  const bool has_manifest = r.has("pool_manifest");
  const bool has_dir = r.has("dir");
  const bool has_top = r.has("top");
  if (static_cast<int>(has_pool) + static_cast<int>(has_manifest) + static_cast<int>(has_dir) != 1) {
    throw ConfigError("give exactly one of 'pool', 'pool_manifest' or 'dir'");
  }
  if (has_top && !has_dir) throw ConfigError("'top' applies only to 'dir'");
  Pool pool;
  if (has_pool) {
    std::vector<PoolEntry> entries;
    for (const auto& e : r.at("pool")) entries.push_back(pool_entry_from_json(e));
    std::vector<std::size_t> all(entries.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    pool = build_pool_explicit(entries, all);
  } else if (has_manifest) {
    const auto entries = load_pool_manifest(r.at("pool_manifest").get<std::string>());
    std::vector<std::size_t> all(entries.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    pool = build_pool_explicit(entries, all);
    resolved["pool_manifest"] = r.at("pool_manifest");
  } else {
    auto entries = scan_run_directory(r.at("dir").get<std::string>());
    const std::size_t n = has_top ? r.at("top").get<std::size_t>() : entries.size();
    pool = build_pool_top(std::move(entries), n);
    resolved["dir"] = r.at("dir");
    if (has_top) resolved["top"] = n;
  }
  Json entries = Json::array();
  for (const auto& e : pool.entries) entries.push_back(to_json(e));
  resolved["pool"] = std::move(entries);
  return pool;
}

Json cmd_hybrid(const Json& request) {
  Json req = request;
  if (!req.is_object()) throw ConfigError("hybrid: expected an object");
  const RunConfig config = run_config_from_json(req);
  ObjectReader r(req, "hybrid");
  Json resolved;
  // a resolved request carries the pool inline and keeps the original source only as provenance
  Json provenance;
  Pool pool;
  if (r.has("pool")) {
    if (r.has("pool_manifest")) provenance["pool_manifest"] = r.at("pool_manifest");
    if (r.has("dir")) provenance["dir"] = r.at("dir");
    if (r.has("top")) provenance["top"] = r.at("top");
    Json only = {{"pool", r.at("pool")}};
    ObjectReader pr(only, "hybrid");
    pool = resolve_pool(pr, resolved);
  } else {
    pool = resolve_pool(r, resolved);
  }
  for (auto& [k, v] : provenance.items()) resolved[k] = v;
  const ProblemSpec spec = resolve_problem(r, resolved);
  resolved.update(run_config_to_json(config));
  const std::string mode_name = r.get<std::string>("mode", "per-move");
  const AssignmentMode mode = parse_mode(mode_name);
  resolved["mode"] = mode_name;
  const auto repeats = r.get<std::size_t>("repeats", 1);
  const auto seed = r.get<std::uint64_t>("seed", 0);
  if (repeats == 0) throw ConfigError("repeats must be positive");
  resolved["repeats"] = repeats;
  resolved["seed"] = seed;
  const auto trajectory = optional_path(r, "trajectory", resolved);
  const auto out = require_path(r, "out");
  resolved["out"] = out;
  r.finish();

  Outputs outputs;
  const Runner runner = [&](const Problem& p, const RunConfig& c) { return run_hybrid(pool, p, c, mode); };
  Json summary = run_repeats(runner, spec, config, repeats, seed, trajectory, out, outputs);
  summary["pool_size"] = pool.size();
  Json manifest = make_manifest("hybrid", resolved, outputs, summary);
  write_json_file(manifest_path_for(out), manifest);
  return manifest;
}

std::string stats_csv(const std::vector<GenerationStats>& stats) {
  std::string out = "generation,best,median,mean,best_so_far\n";
  for (const auto& s : stats) {
    out += std::to_string(s.generation) + ',' + csv_number(s.best) + ',' + csv_number(s.median) + ',' +
           csv_number(s.mean) + ',' + csv_number(s.best_so_far) + '\n';
  }
  return out;
}

Json cmd_evolve(const Json& request) {
  ObjectReader r(request, "evolve");
  EvolveSpec spec;
  if (r.has("config")) {
    spec = evolve_spec_from_json(r.at("config"));
  } else if (r.has("config_file")) {
    spec = evolve_spec_from_json(read_json_file(r.at("config_file").get<std::string>()));
  } else {
    throw ConfigError("evolve: missing 'config' or 'config_file'");
  }
  if (r.has("seed") && !r.at("seed").is_null()) spec.evolution.seed = r.require<std::uint64_t>("seed");
  if (r.has("jobs") && !r.at("jobs").is_null()) spec.evolution.jobs = std::max<std::size_t>(1, r.require<std::size_t>("jobs"));
  const fs::path out = require_path(r, "out");
  r.finish();

  Json resolved;
  resolved["config"] = to_json(spec);
  resolved["out"] = out.generic_string();

  fs::create_directories(out / "checkpoints");
  Outputs outputs;
  const ProblemFamily family = spec.problem.family();
  const auto on_generation = [&](const GenerationStats& s, std::span<const Program> pop,
                                 std::span<const double> fit) {
    char name[32];
    std::snprintf(name, sizeof name, "gen_%03zu.json", s.generation);
    outputs.write(out / "checkpoints" / name, checkpoint_to_json(s, pop, fit));
  };
  const EvolvedResult result = evolve(spec.evolution, family, on_generation);

  outputs.write(out / "stats.csv", stats_csv(result.stats));
  outputs.write(out / "best.push", print_program(result.best_program) + "\n");
  Json best;
  best["program"] = print_program(result.best_program);
  best["fitness"] = result.best_fitness;
  best["problem"] = to_json(spec.problem);
  best["run"] = run_config_to_json(spec.evolution.run);
  best["repeats"] = spec.evolution.repeats;
  best["seed"] = spec.evolution.seed;
  outputs.write(out / "best.json", best);

  Json summary = {{"best_fitness", result.best_fitness},
                  {"best_size", result.best_program.size()},
                  {"generations", result.stats.size()}};
  Json manifest = make_manifest("evolve", resolved, outputs, summary);
  write_json_file(out / "manifest.json", manifest);
  return manifest;
}

std::vector<Program> programs_from_input(const fs::path& input) {
  std::vector<Program> programs;
  if (fs::is_directory(input)) {
    for (auto& e : scan_run_directory(input)) programs.push_back(std::move(e.program));
    if (programs.empty()) throw ConfigError("no best.json found under " + input.string());
  } else if (input.extension() == ".json") {
    const Json j = read_json_file(input);
    programs.push_back(parse_request_program(j.at("program").get<std::string>()));
  } else {
    programs.push_back(parse_request_program(read_text_file(input)));
  }
  return programs;
}

Json cmd_usage(const Json& request) {
  Json req = request;
  if (!req.is_object()) throw ConfigError("usage: expected an object");
  const RunConfig config = run_config_from_json(req);
  ObjectReader r(req, "usage");
  Json resolved;
  std::vector<std::pair<std::string, std::vector<Program>>> sets;
  if (r.has("sets")) {
    for (const auto& s : r.at("sets")) {
      ObjectReader sr(s, "usage set");
      std::vector<Program> programs;
      for (const auto& p : sr.at("programs")) programs.push_back(parse_request_program(p.get<std::string>()));
      sets.emplace_back(sr.require<std::string>("label"), std::move(programs));
      sr.finish();
    }
    // provenance from the request that produced the inline sets
    if (r.has("inputs")) resolved["inputs"] = r.at("inputs");
  } else if (r.has("inputs")) {
    for (const auto& in : r.at("inputs")) {
      const fs::path path = in.get<std::string>();
      std::string label = path.filename().string();
      if (label.empty()) label = path.parent_path().filename().string();
      sets.emplace_back(label, programs_from_input(path));
    }
    resolved["inputs"] = r.at("inputs");
  } else {
    throw ConfigError("usage: missing 'sets' or 'inputs'");
  }
  Json sets_json = Json::array();
  for (const auto& [label, programs] : sets) {
    Json texts = Json::array();
    for (const auto& p : programs) texts.push_back(print_program(p));
    sets_json.push_back({{"label", label}, {"programs", texts}});
  }
  resolved["sets"] = sets_json;
  const std::string mode = r.get<std::string>("mode", "static");
  if (mode != "static" && mode != "dynamic") throw ConfigError("usage: mode must be 'static' or 'dynamic'");
  resolved["mode"] = mode;
  const auto top = r.get<std::size_t>("top", 20);
  resolved["top"] = top;
  std::optional<ProblemSpec> spec;
  std::uint64_t seed = 0;
  if (mode == "dynamic") {
    spec = resolve_problem(r, resolved);
    resolved.update(run_config_to_json(config));
    seed = r.get<std::uint64_t>("seed", 0);
    resolved["seed"] = seed;
  }
  const auto out = require_path(r, "out");
  resolved["out"] = out;
  r.finish();

  std::vector<UsageSet> tables;
  for (const auto& [label, programs] : sets) {
    if (mode == "static") {
      tables.push_back({label, instruction_usage(programs, top)});
    } else {
      RunConfig cfg = config;
      cfg.seed = seed;
      tables.push_back({label, dynamic_instruction_usage(programs, spec->instance(seed, 0), cfg, top)});
    }
  }
  Outputs outputs;
  outputs.write(out, usage_csv(tables));
  Json manifest = make_manifest("usage", resolved, outputs, {{"sets", sets.size()}});
  write_json_file(manifest_path_for(out), manifest);
  return manifest;
}

Json cmd_simplify(const Json& request) {
  Json req = request;
  if (!req.is_object()) throw ConfigError("simplify: expected an object");
  const RunConfig config = run_config_from_json(req);
  ObjectReader r(req, "simplify");
  Json resolved;
  const Program program = resolve_program(r, resolved);
  const ProblemSpec spec = resolve_problem(r, resolved);
  if (spec.transform == TransformKind::Explicit) throw ConfigError("simplify: transform must be 'random' or 'identity'");
  resolved.update(run_config_to_json(config));
  const auto repeats = r.get<std::size_t>("repeats", 10);
  if (repeats == 0) throw ConfigError("repeats must be positive");
  const auto seed = r.get<std::uint64_t>("seed", 0);
  const double tolerance = r.get<double>("tolerance", kSimplifyTolerance);
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
  resolved["repeats"] = repeats;
  resolved["seed"] = seed;
  resolved["tolerance"] = tolerance;
  const auto steps_path = optional_path(r, "steps", resolved);
  const auto out = require_path(r, "out");
  resolved["out"] = out;
  r.finish();

  RunConfig cfg = config;
  cfg.seed = seed;
  const SimplifyResult result = simplify(program, spec.family(), repeats, cfg, tolerance);
  Outputs outputs;
  outputs.write(out, print_program(result.program) + "\n");
  if (steps_path) {
    std::string csv = "step,removed_index,removed_item,before,after\n";
    for (std::size_t i = 0; i < result.steps.size(); ++i) {
      const auto& s = result.steps[i];
      csv += std::to_string(i) + ',' + std::to_string(s.removed_index) + ',' + s.removed_item + ',' +
             csv_number(s.before) + ',' + csv_number(s.after) + '\n';
    }
    outputs.write(*steps_path, csv);
  }
  Json summary = {{"initial_fitness", result.initial_fitness},
                  {"final_fitness", result.final_fitness},
                  {"initial_size", program.size()},
                  {"final_size", result.program.size()}};
  Json manifest = make_manifest("simplify", resolved, outputs, summary);
  write_json_file(manifest_path_for(out), manifest);
  return manifest;
}

std::string optimiser_name_for(const fs::path& path) {
  std::string stem = path.stem().string();
  if ((stem == "best" || stem.empty()) && path.has_parent_path()) stem = path.parent_path().filename().string();
  return stem.empty() ? "optimiser" : stem;
}

void make_unique(std::vector<std::string>& names) {
  std::map<std::string, std::size_t> seen;
  for (auto& n : names) {
    const std::size_t k = seen[n]++;
    if (k > 0) n += "#" + std::to_string(k);
  }
}

Json cmd_reevaluate(const Json& request) {
  Json req = request;
  if (!req.is_object()) throw ConfigError("reevaluate: expected an object");
  const RunConfig config = run_config_from_json(req);
  ObjectReader r(req, "reevaluate");
  Json resolved;

  std::vector<Optimiser> optimisers;
  if (r.has("optimisers")) {
    for (const auto& o : r.at("optimisers")) {
      ObjectReader orr(o, "optimiser");
      Optimiser opt;
      opt.name = orr.require<std::string>("name");
      if (orr.has("program")) {
        opt.body = parse_request_program(orr.at("program").get<std::string>());
      } else if (orr.has("pool")) {
        Pool pool;
        for (const auto& e : orr.at("pool")) pool.entries.push_back(pool_entry_from_json(e));
        if (pool.empty()) throw EmptyPool("optimiser '" + opt.name + "' has an empty pool");
        for (std::size_t i = 0; i < pool.size(); ++i) pool.entries[i].rank = i + 1;
        opt.body = std::move(pool);
      } else {
        throw ConfigError("optimiser: needs 'program' or 'pool'");
      }
      orr.finish();
      optimisers.push_back(std::move(opt));
    }
    for (const char* key : {"programs", "pools"}) {
      if (r.has(key)) resolved[key] = r.at(key);
    }
  } else {
    std::vector<std::string> names;
    if (r.has("programs")) {
      for (const auto& p : r.at("programs")) {
        const fs::path path = p.get<std::string>();
        for (auto& prog : programs_from_input(path)) {
          optimisers.push_back({"", std::move(prog)});
          names.push_back(optimiser_name_for(path));
        }
      }
      resolved["programs"] = r.at("programs");
    }
    if (r.has("pools")) {
      for (const auto& p : r.at("pools")) {
        const fs::path path = p.get<std::string>();
        const auto entries = load_pool_manifest(path);
        std::vector<std::size_t> all(entries.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        optimisers.push_back({"", build_pool_explicit(entries, all)});
        names.push_back(optimiser_name_for(path));
      }
      resolved["pools"] = r.at("pools");
    }
    make_unique(names);
    for (std::size_t i = 0; i < optimisers.size(); ++i) optimisers[i].name = names[i];
  }
  if (optimisers.empty()) throw ConfigError("reevaluate: no optimisers given");
  Json opt_json = Json::array();
  for (const auto& o : optimisers) {
    if (const auto* p = std::get_if<Program>(&o.body)) {
      opt_json.push_back({{"name", o.name}, {"program", print_program(*p)}});
    } else {
      Json entries = Json::array();
      for (const auto& e : std::get<Pool>(o.body).entries) entries.push_back(to_json(e));
      opt_json.push_back({{"name", o.name}, {"pool", entries}});
    }
  }
  resolved["optimisers"] = opt_json;

  std::vector<ProblemSpec> specs;
  if (r.has("problems")) {
    for (const auto& p : r.at("problems")) specs.push_back(problem_spec_from_json(p));
  } else if (r.has("functions")) {
    for (const auto& f : r.at("functions")) {
      Json j = {{"id", f}};
      if (r.has("D")) j["D"] = r.at("D");
      if (r.has("function_seed")) j["seed"] = r.at("function_seed");
      specs.push_back(problem_spec_from_json(j));
    }
  } else {
    throw ConfigError("reevaluate: missing 'problems' or 'functions'");
  }
  if (specs.empty()) throw ConfigError("reevaluate: no problems given");
  Json problems_json = Json::array();
  std::vector<std::string> problem_names;
  std::vector<ProblemCase> problems;
  for (const auto& s : specs) {
    problems_json.push_back(to_json(s));
    problem_names.emplace_back(function_name(s.id));
  }
  std::map<std::string, std::size_t> name_use;
  for (const auto& n : problem_names) ++name_use[n];
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::string name = problem_names[i];
    if (name_use[name] > 1) name += "_D" + std::to_string(specs[i].dim);
    problem_names[i] = name;
  }
  make_unique(problem_names);
  for (std::size_t i = 0; i < specs.size(); ++i) problems.push_back({problem_names[i], specs[i].function()});
  resolved["problems"] = problems_json;

  resolved.update(run_config_to_json(config));
  const auto runs = r.get<std::size_t>("runs", 25);
  if (runs == 0) throw ConfigError("runs must be positive");
  const auto seed = r.get<std::uint64_t>("seed", 0);
  const auto jobs = std::max<std::size_t>(1, r.get<std::size_t>("jobs", 1));
  resolved["runs"] = runs;
  resolved["seed"] = seed;
  resolved["jobs"] = jobs;
  const auto raw = optional_path(r, "raw", resolved);
  const auto out = require_path(r, "out");
  resolved["out"] = out;
  r.finish();

  RunConfig cfg = config;
  cfg.seed = seed;
  const ErrorTable table = reevaluate(optimisers, problems, runs, cfg, jobs);
  Outputs outputs;
  outputs.write(out, error_table_csv(table));
  if (raw) outputs.write(*raw, raw_errors_csv(table));
  Json summary = {{"runs", runs}, {"optimisers", optimisers.size()}, {"problems", problems.size()}};
  Json manifest = make_manifest("reevaluate", resolved, outputs, summary);
  write_json_file(manifest_path_for(out), manifest);
  return manifest;
}

}  // namespace

Json execute_command(const std::string& command, const Json& request) {
  if (command == "run") return cmd_run(request);
  if (command == "hybrid") return cmd_hybrid(request);
  if (command == "evolve") return cmd_evolve(request);
  if (command == "usage") return cmd_usage(request);
  if (command == "simplify") return cmd_simplify(request);
  if (command == "reevaluate") return cmd_reevaluate(request);
  throw ConfigError("unknown command '" + command + "'");
}

Json replay_command(const fs::path& manifest_path, const std::optional<fs::path>& out_dir) {
  const Json manifest = read_json_file(manifest_path);
  if (!manifest.is_object() || manifest.value("format", "") != "pushopt-manifest") {
    throw ConfigError(manifest_path.string() + ": not a manifest");
  }
  const std::string command = manifest.at("command").get<std::string>();
  Json request = manifest.at("request");
  if (out_dir) {
    if (command == "evolve") {
      request["out"] = out_dir->generic_string();
    } else {
      for (const char* key : {"out", "trajectory", "raw", "steps"}) {
        if (request.contains(key) && request[key].is_string()) {
          request[key] = (*out_dir / fs::path(request[key].get<std::string>()).filename()).generic_string();
        }
      }
    }
  }
  return execute_command(command, request);
}

}  // namespace pushopt
