#include "pushopt/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pushopt {

namespace fs = std::filesystem;

namespace {

Vector read_vector(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array of numbers");
  Vector v;
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(what + ": expected an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

std::pair<double, double> read_pair(const Json& j, const std::string& what) {
  const Vector v = read_vector(j, what);
  if (v.size() != 2 || !(v[0] <= v[1])) throw ConfigError(what + ": expected [lo, hi] with lo <= hi");
  return {v[0], v[1]};
}

Bounds read_bounds(const Json& j, std::size_t dim) {
  if (j.is_array()) {
    const auto [lo, hi] = read_pair(j, "bounds");
    return Bounds::cube(dim, lo, hi);
  }
  ObjectReader r(j, "bounds");
  Bounds b{read_vector(r.at("lo"), "bounds.lo"), read_vector(r.at("hi"), "bounds.hi")};
  r.finish();
  if (b.lo.size() != dim || b.hi.size() != dim) throw ConfigError("bounds: length must equal D");
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(b.lo[i] < b.hi[i])) throw ConfigError("bounds: lo must be below hi");
  }
  return b;
}

const char* input_mode_name(InputMode mode) {
  return mode == InputMode::ScalarBounds ? "scalar" : "per-axis";
}

InputMode parse_input_mode(const std::string& s) {
  if (s == "scalar") return InputMode::ScalarBounds;
  if (s == "per-axis") return InputMode::PerAxisBounds;
  throw ConfigError("input_mode must be 'scalar' or 'per-axis'");
}

Program parse_or_throw(const std::string& text) {
  try {
    return parse_program(text);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("program: ") + e.what());
  }
}

}  // namespace

std::shared_ptr<const BenchmarkFunction> ProblemSpec::function() const {
  auto f = BenchmarkFunction::make(id, dim, seed);
  if (bounds) f.override_bounds(*bounds);
  return std::make_shared<const BenchmarkFunction>(std::move(f));
}

ProblemFamily ProblemSpec::family() const {
  if (transform == TransformKind::Explicit) throw ConfigError("an explicit transform does not define a family");
  return {function(), transform == TransformKind::Random};
}

Problem ProblemSpec::instance(std::uint64_t run_seed, std::size_t repeat) const {
  if (transform == TransformKind::Explicit) return Problem(function(), explicit_transform);
  return family().instance(run_seed, repeat);
}

ProblemSpec problem_spec_from_json(const Json& j) {
  ObjectReader r(j, "problem");
  ProblemSpec spec;
  try {
    spec.id = parse_function_id(r.require<std::string>("id"));
  } catch (const UnsupportedFunction& e) {
    throw ConfigError(e.what());
  }
  spec.dim = r.get<std::size_t>("D", spec.dim);
  if (spec.dim == 0) throw ConfigError("problem: D must be positive");
  spec.seed = r.get<std::uint64_t>("seed", 0);
  if (r.has("transform")) {
    const Json& t = r.at("transform");
    if (t.is_string()) {
      const auto s = t.get<std::string>();
      if (s == "identity") {
        spec.transform = TransformKind::Identity;
      } else if (s == "random") {
        spec.transform = TransformKind::Random;
      } else {
        throw ConfigError("problem: transform must be 'identity', 'random' or an object");
      }
    } else {
      ObjectReader tr(t, "transform");
      spec.transform = TransformKind::Explicit;
      spec.explicit_transform.translation = read_vector(tr.at("translation"), "transform.translation");
      spec.explicit_transform.scale = read_vector(tr.at("scale"), "transform.scale");
      spec.explicit_transform.flip = read_vector(tr.at("flip"), "transform.flip");
      tr.finish();
      const auto& x = spec.explicit_transform;
      if (x.translation.size() != spec.dim || x.scale.size() != spec.dim || x.flip.size() != spec.dim) {
        throw ConfigError("transform: component lengths must equal D");
      }
      for (std::size_t i = 0; i < spec.dim; ++i) {
        if (!(x.scale[i] > 0.0)) throw ConfigError("transform: scale must be positive");
        if (x.flip[i] != 1.0 && x.flip[i] != -1.0) throw ConfigError("transform: flip must be 1 or -1");
      }
    }
  }
  if (r.has("bounds")) spec.bounds = read_bounds(r.at("bounds"), spec.dim);
  r.finish();
  return spec;
}

Json to_json(const ProblemSpec& spec) {
  Json j;
  j["id"] = std::string(function_name(spec.id));
  j["D"] = spec.dim;
  j["seed"] = spec.seed;
  switch (spec.transform) {
    case TransformKind::Identity:
      j["transform"] = "identity";
      break;
    case TransformKind::Random:
      j["transform"] = "random";
      break;
    case TransformKind::Explicit:
      j["transform"] = {{"translation", spec.explicit_transform.translation},
                        {"scale", spec.explicit_transform.scale},
                        {"flip", spec.explicit_transform.flip}};
      break;
  }
  if (spec.bounds) j["bounds"] = {{"lo", spec.bounds->lo}, {"hi", spec.bounds->hi}};
  return j;
}

Json run_config_to_json(const RunConfig& c) {
  Json j;
  j["swarm"] = c.swarm_size;
  j["moves"] = c.moves;
  j["execution_limit"] = c.execution_limit;
  j["input_mode"] = input_mode_name(c.input_mode);
  j["ranges"] = {{"float_rand", {c.ranges.float_rand_lo, c.ranges.float_rand_hi}},
                 {"integer_rand", {c.ranges.integer_rand_lo, c.ranges.integer_rand_hi}},
                 {"vector_rand", {c.ranges.vector_rand_lo, c.ranges.vector_rand_hi}}};
  return j;
}

RunConfig run_config_from_json(Json& j, RunConfig c) {
  auto take = [&](const char* key) -> std::optional<Json> {
    if (!j.contains(key)) return std::nullopt;
    Json v = j[key];
    j.erase(key);
    return v;
  };
  auto positive = [](const Json& v, const char* key) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(std::string(key) + " must be a non-negative integer");
    }
    const auto n = v.get<std::size_t>();
    if (n == 0) throw ConfigError(std::string(key) + " must be positive");
    return n;
  };
  if (auto v = take("swarm")) c.swarm_size = positive(*v, "swarm");
  if (auto v = take("moves")) c.moves = positive(*v, "moves");
  if (auto v = take("execution_limit")) c.execution_limit = positive(*v, "execution_limit");
  if (auto v = take("input_mode")) {
    if (!v->is_string()) throw ConfigError("input_mode must be a string");
    c.input_mode = parse_input_mode(v->get<std::string>());
  }
  if (auto v = take("ranges")) {
    ObjectReader r(*v, "ranges");
    if (r.has("float_rand")) std::tie(c.ranges.float_rand_lo, c.ranges.float_rand_hi) = read_pair(r.at("float_rand"), "float_rand");
    if (r.has("vector_rand")) std::tie(c.ranges.vector_rand_lo, c.ranges.vector_rand_hi) = read_pair(r.at("vector_rand"), "vector_rand");
    if (r.has("integer_rand")) {
      const Json& p = r.at("integer_rand");
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer() ||
          p[0].get<std::int64_t>() > p[1].get<std::int64_t>()) {
        throw ConfigError("integer_rand: expected [lo, hi] integers with lo <= hi");
      }
      c.ranges.integer_rand_lo = p[0].get<std::int64_t>();
      c.ranges.integer_rand_hi = p[1].get<std::int64_t>();
    }
    r.finish();
  }
  return c;
}

EvolveSpec evolve_spec_from_json(const Json& input) {
  Json j = input;
  if (!j.is_object()) throw ConfigError("config: expected an object");
  EvolveSpec spec;
  spec.evolution.run = run_config_from_json(j);

  ObjectReader r(j, "config");
  Json problem = {{"id", r.require<std::string>("function")}};
  if (r.has("D")) problem["D"] = r.at("D");
  if (r.has("function_seed")) problem["seed"] = r.at("function_seed");
  problem["transform"] = r.get<std::string>("transform", "random");
  if (r.has("bounds")) problem["bounds"] = r.at("bounds");
  spec.problem = problem_spec_from_json(problem);
  if (spec.problem.transform == TransformKind::Explicit) throw ConfigError("config: transform must be 'random' or 'identity'");

  auto& e = spec.evolution;
  e.population_size = r.get<std::size_t>("pop", e.population_size);
  e.generations = r.get<std::size_t>("gens", e.generations);
  e.tournament_size = r.get<std::size_t>("tournament", e.tournament_size);
  e.size_limit = r.get<std::size_t>("size_limit", e.size_limit);
  e.repeats = r.get<std::size_t>("repeats", e.repeats);
  e.seed = r.get<std::uint64_t>("seed", e.seed);
  e.jobs = r.get<std::size_t>("jobs", e.jobs);
  if (r.has("rates")) {
    ObjectReader rr(r.at("rates"), "rates");
    e.rates.crossover = rr.get<double>("crossover", e.rates.crossover);
    e.rates.mutation = rr.get<double>("mutation", e.rates.mutation);
    e.rates.reproduction = rr.get<double>("reproduction", e.rates.reproduction);
    rr.finish();
  }
  if (r.has("erc")) {
    ObjectReader er(r.at("erc"), "erc");
    if (er.has("float")) std::tie(e.erc.float_lo, e.erc.float_hi) = read_pair(er.at("float"), "erc.float");
    if (er.has("integer")) {
      const auto [lo, hi] = read_pair(er.at("integer"), "erc.integer");
      if (lo != std::floor(lo) || hi != std::floor(hi)) throw ConfigError("erc.integer: bounds must be integers");
      e.erc.integer_lo = static_cast<std::int64_t>(lo);
      e.erc.integer_hi = static_cast<std::int64_t>(hi);
    }
    er.finish();
  }
  if (r.has("instructions")) {
    const Json& names = r.at("instructions");
    if (!names.is_array()) throw ConfigError("instructions: expected an array of names");
    std::vector<std::string> list;
    for (const auto& n : names) {
      if (!n.is_string()) throw ConfigError("instructions: expected an array of names");
      list.push_back(n.get<std::string>());
    }
    try {
      e.instruction_set = InstructionSet::from_names(list);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
  }
  r.finish();
  try {
    e.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  return spec;
}

Json to_json(const EvolveSpec& spec) {
  const auto& e = spec.evolution;
  Json j;
  j["function"] = std::string(function_name(spec.problem.id));
  j["D"] = spec.problem.dim;
  j["function_seed"] = spec.problem.seed;
  j["transform"] = spec.problem.transform == TransformKind::Random ? "random" : "identity";
  if (spec.problem.bounds) j["bounds"] = {{"lo", spec.problem.bounds->lo}, {"hi", spec.problem.bounds->hi}};
  j.update(run_config_to_json(e.run));
  j["pop"] = e.population_size;
  j["gens"] = e.generations;
  j["tournament"] = e.tournament_size;
  j["size_limit"] = e.size_limit;
  j["repeats"] = e.repeats;
  j["seed"] = e.seed;
  j["jobs"] = e.jobs;
  j["rates"] = {{"crossover", e.rates.crossover}, {"mutation", e.rates.mutation},
                {"reproduction", e.rates.reproduction}};
  j["erc"] = {{"float", {e.erc.float_lo, e.erc.float_hi}}, {"integer", {e.erc.integer_lo, e.erc.integer_hi}}};
  j["instructions"] = e.instruction_set.names();
  return j;
}

Json checkpoint_to_json(const GenerationStats& s, std::span<const Program> population,
                        std::span<const double> fitnesses) {
  Json j;
  j["generation"] = s.generation;
  j["best"] = s.best;
  j["median"] = s.median;
  j["mean"] = s.mean;
  j["best_so_far"] = s.best_so_far;
  Json programs = Json::array();
  for (std::size_t i = 0; i < population.size(); ++i) {
    programs.push_back({{"program", print_program(population[i])}, {"fitness", fitnesses[i]}});
  }
  j["programs"] = std::move(programs);
  return j;
}

Checkpoint checkpoint_from_json(const Json& j) {
  ObjectReader r(j, "checkpoint");
  Checkpoint c;
  c.stats.generation = r.require<std::size_t>("generation");
  c.stats.best = r.require<double>("best");
  c.stats.median = r.require<double>("median");
  c.stats.mean = r.require<double>("mean");
  c.stats.best_so_far = r.require<double>("best_so_far");
  for (const auto& p : r.at("programs")) {
    ObjectReader pr(p, "checkpoint program");
    c.programs.push_back(parse_or_throw(pr.require<std::string>("program")));
    c.fitnesses.push_back(pr.require<double>("fitness"));
    pr.finish();
  }
  r.finish();
  return c;
}

Json to_json(const PoolEntry& e) {
  return {{"program", print_program(e.program)},
          {"fitness", e.fitness},
          {"source", e.source},
          {"training_function", e.training_function}};
}

PoolEntry pool_entry_from_json(const Json& j, const fs::path& base_dir) {
  ObjectReader r(j, "pool entry");
  PoolEntry e;
  if (r.has("program")) {
    e.program = parse_or_throw(r.at("program").get<std::string>());
  } else if (r.has("file")) {
    fs::path file = r.at("file").get<std::string>();
    if (file.is_relative()) file = base_dir / file;
    e.program = parse_or_throw(read_text_file(file));
    e.source = file.generic_string();
  } else {
    throw ConfigError("pool entry: needs 'program' or 'file'");
  }
  e.fitness = r.get<double>("fitness", 0.0);
  e.source = r.get<std::string>("source", e.source);
  e.training_function = r.get<std::string>("training_function", "");
  r.has("rank");  // recomputed when the pool is built
  r.finish();
  return e;
}

std::vector<PoolEntry> load_pool_manifest(const fs::path& path) {
  const Json j = read_json_file(path);
  ObjectReader r(j, "pool manifest");
  std::vector<PoolEntry> entries;
  for (const auto& e : r.at("programs")) entries.push_back(pool_entry_from_json(e, path.parent_path()));
  r.finish();
  return entries;
}

std::vector<PoolEntry> scan_run_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<fs::path> bests;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "best.json") bests.push_back(entry.path());
  }
  std::sort(bests.begin(), bests.end());
  std::vector<PoolEntry> out;
  for (const auto& p : bests) {
    const Json j = read_json_file(p);
    PoolEntry e;
    e.program = parse_or_throw(j.at("program").get<std::string>());
    e.fitness = j.at("fitness").get<double>();
    e.source = p.parent_path().generic_string();
    if (j.contains("problem")) e.training_function = j["problem"].at("id").get<std::string>();
    out.push_back(std::move(e));
  }
  return out;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const fs::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
  }
  fs::rename(tmp, path);
}

void write_json_file(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string csv_number(double value) {
  if (std::isinf(value) || value == kOutOfBoundsValue) return value < 0 ? "-inf" : "inf";
  if (std::isnan(value)) return "nan";
  return format_float(value);
}

std::string trajectory_csv_header(std::size_t dim) {
  std::string h = "run_id,repeat,move,member";
  for (std::size_t i = 0; i < dim; ++i) h += ",x" + std::to_string(i);
  return h + ",error,in_bounds,pbest\n";
}

void append_trajectory_csv(std::string& out, std::string_view run_id, std::size_t repeat,
                           const std::vector<TrajectoryRecord>& records) {
  for (const auto& r : records) {
    out += run_id;
    out += ',' + std::to_string(repeat) + ',' + std::to_string(r.move) + ',' + std::to_string(r.member);
    for (double x : r.point) out += ',' + csv_number(x);
    out += ',' + (r.in_bounds ? csv_number(r.value) : std::string("inf"));
    out += r.in_bounds ? ",1," : ",0,";
    out += csv_number(r.pbest);
    out += '\n';
  }
}

std::string results_csv(const std::vector<RepeatRow>& rows) {
  std::string out = "repeat,seed,pbest,evaluations\n";
  double sum = 0.0;
  for (const auto& r : rows) {
    out += std::to_string(r.repeat) + ',' + std::to_string(r.seed) + ',' + csv_number(r.pbest) + ',' +
           std::to_string(r.evaluations) + '\n';
    sum += r.pbest;
  }
  if (!rows.empty()) out += "mean,," + csv_number(sum / static_cast<double>(rows.size())) + ",\n";
  return out;
}

std::string usage_csv(const std::vector<UsageSet>& sets) {
  std::string out = "set,rank,instruction,count,rate\n";
  for (const auto& s : sets) {
    for (const auto& r : s.rows) {
      out += s.label + ',' + std::to_string(r.rank) + ',' + r.instruction + ',' + std::to_string(r.count) + ',' +
             csv_number(r.rate) + '\n';
    }
  }
  return out;
}

std::string error_table_csv(const ErrorTable& t) {
  std::string out = "optimiser";
  for (const auto& p : t.problems) out += ',' + p;
  out += ",mean_rank\n";
  for (std::size_t o = 0; o < t.optimisers.size(); ++o) {
    out += t.optimisers[o];
    for (std::size_t p = 0; p < t.problems.size(); ++p) out += ',' + csv_number(t.mean[o][p]);
    out += ',' + csv_number(t.mean_rank[o]) + '\n';
  }
  return out;
}

std::string raw_errors_csv(const ErrorTable& t) {
  std::string out = "optimiser,problem,run,error\n";
  for (std::size_t o = 0; o < t.optimisers.size(); ++o) {
    for (std::size_t p = 0; p < t.problems.size(); ++p) {
      for (std::size_t r = 0; r < t.runs; ++r) {
        out += t.optimisers[o] + ',' + t.problems[p] + ',' + std::to_string(r) + ',' +
               csv_number(t.per_run[o][p][r]) + '\n';
      }
    }
  }
  return out;
}

}  // namespace pushopt
