#include <doctest.h>

#include <filesystem>
#include <cfloat>
#include <fstream>

#include <unistd.h>

#include "pushopt/commands.hpp"
#include "pushopt/io.hpp"
#include "support.hpp"

using namespace pushopt;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory per test case.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("pushopt_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("evolve configs default to the documented parameters and reject unknown keys") {
  const auto spec = evolve_spec_from_json(Json::parse(R"j({"function": "F9", "D": 3})j"));
  CHECK(spec.problem.id == FunctionId::F9);
  CHECK(spec.problem.dim == 3);
  CHECK(spec.problem.transform == TransformKind::Random);
  CHECK(spec.evolution.population_size == 200);
  CHECK(spec.evolution.generations == 50);
  CHECK(spec.evolution.tournament_size == 5);
  CHECK(spec.evolution.size_limit == 100);
  CHECK(spec.evolution.rates.crossover == 0.4);
  CHECK(spec.evolution.repeats == 10);

  CHECK_THROWS_AS(evolve_spec_from_json(Json::parse(R"j({"function": "F1", "popsize": 10})j")), ConfigError);
  CHECK_THROWS_AS(evolve_spec_from_json(Json::parse(R"j({"D": 2})j")), ConfigError);
  CHECK_THROWS_AS(evolve_spec_from_json(Json::parse(R"j({"function": "F1", "pop": -1})j")), ConfigError);
  CHECK_THROWS(evolve_spec_from_json(Json::parse(R"j({"function": "F15"})j")));
}

TEST_CASE("evolve config round-trips through JSON") {
  const auto j = Json::parse(R"j({"function": "F12", "D": 4, "function_seed": 3, "swarm": 7, "moves": 30,
      "pop": 11, "gens": 2, "tournament": 3, "seed": 9, "rates": {"crossover": 0.5, "mutation": 0.3,
      "reproduction": 0.2}, "instructions": ["vector.rand", "float.+"]})j");
  const auto a = evolve_spec_from_json(j);
  const auto b = evolve_spec_from_json(to_json(a));
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(b.evolution.run.swarm_size == 7);
  CHECK(b.evolution.instruction_set.instructions().size() == 2);
  CHECK(b.evolution.rates.crossover == 0.5);
}

TEST_CASE("problem descriptors") {
  const auto spec = problem_spec_from_json(Json::parse(
      R"j({"id": "F1", "D": 2, "seed": 4, "transform": {"translation": [1, 2], "scale": [1, 0.5], "flip": [1, -1]}})j"));
  CHECK(spec.transform == TransformKind::Explicit);
  const auto back = problem_spec_from_json(to_json(spec));
  CHECK(to_json(back).dump() == to_json(spec).dump());
  const Problem p = spec.instance(0, 0);
  CHECK(p.transform().scale[1] == 0.5);

  CHECK_THROWS_AS(problem_spec_from_json(Json::parse(R"j({"id": "F1", "D": 2, "transform": {"translation": [1]}})j")),
                  ConfigError);
  CHECK_THROWS_AS(problem_spec_from_json(Json::parse(
                      R"j({"id": "F1", "D": 1, "transform": {"translation": [0], "scale": [0], "flip": [1]}})j")),
                  ConfigError);
  CHECK_THROWS_AS(problem_spec_from_json(Json::parse(R"j({"id": "F1", "colour": 1})j")), ConfigError);

  const auto bounded = problem_spec_from_json(Json::parse(R"j({"id": "F9", "D": 2, "bounds": [-1, 1]})j"));
  CHECK(bounded.function()->bounds().hi[0] == 1.0);

  const auto random = problem_spec_from_json(Json::parse(R"j({"id": "F13", "D": 2, "transform": "random"})j"));
  CHECK(random.instance(1, 0).transform().translation != random.instance(1, 1).transform().translation);
  CHECK(random.instance(1, 0).transform().translation == random.instance(1, 0).transform().translation);
}

TEST_CASE("csv writers") {
  CHECK(csv_number(DBL_MAX) == "inf");
  CHECK(csv_number(0.5) == "0.5");
  CHECK(trajectory_csv_header(2) == "run_id,repeat,move,member,x0,x1,error,in_bounds,pbest\n");
  std::string t;
  append_trajectory_csv(t, "7", 1, {{3, 0, {0.25, -1.0}, DBL_MAX, false, 2.0}, {3, 1, {0.0, 0.0}, 1.5, true, 1.5}});
  CHECK(t == "7,1,3,0,0.25,-1.0,inf,0,2.0\n7,1,3,1,0.0,0.0,1.5,1,1.5\n");
  CHECK(results_csv({{0, 11, 1.0, 5}, {1, 12, 3.0, 6}}) == "repeat,seed,pbest,evaluations\n0,11,1.0,5\n1,12,3.0,6\nmean,,2.0,\n");
  CHECK(usage_csv({{"a", {{1, "float.+", 3, 0.75}}}}) == "set,rank,instruction,count,rate\na,1,float.+,3,0.75\n");

  ErrorTable table;
  table.optimisers = {"x"};
  table.problems = {"F1", "F9"};
  table.runs = 1;
  table.mean = {{1.0, 2.0}};
  table.per_run = {{{1.0}, {2.0}}};
  table.mean_rank = {1.0};
  CHECK(error_table_csv(table) == "optimiser,F1,F9,mean_rank\nx,1.0,2.0,1.0\n");
  CHECK(raw_errors_csv(table) == "optimiser,problem,run,error\nx,F1,0,1.0\nx,F9,0,2.0\n");
}

TEST_CASE("checkpoints and pool manifests") {
  TempDir dir;
  const std::vector<Program> pop = {parse_program("(float.+ 1.5)"), parse_program("(vector.rand)")};
  const std::vector<double> fit = {2.0, 0.5};
  const GenerationStats stats{4, 0.5, 1.25, 1.25, 0.5};
  const auto cp = checkpoint_from_json(checkpoint_to_json(stats, pop, fit));
  CHECK(cp.stats.generation == 4);
  CHECK(cp.programs == pop);
  CHECK(cp.fitnesses == fit);

  write_text_file(dir / "sub/prog.push", "(vector.urand vector.+)\n");
  write_text_file(dir / "pool.json",
                  R"j({"programs": [{"file": "sub/prog.push", "fitness": 3, "source": "s1"}, {"program": "(float.-)", "fitness": 1}]})j");
  const auto entries = load_pool_manifest(dir / "pool.json");
  REQUIRE(entries.size() == 2);
  CHECK(print_program(entries[0].program) == "(vector.urand vector.+)");
  CHECK(entries[1].fitness == 1.0);

  write_text_file(dir / "runs/b/best.json", R"j({"program": "(float.*)", "fitness": 2})j");
  write_text_file(dir / "runs/a/best.json", R"j({"program": "(float./)", "fitness": 4})j");
  const auto scanned = scan_run_directory(dir.path / "runs");
  REQUIRE(scanned.size() == 2);
  CHECK(print_program(scanned[0].program) == "(float./)");
}

TEST_CASE("run command writes results, trajectory and a replayable manifest") {
  TempDir dir;
  const Json req = {{"program", testing_support::best_programs()[0].text},
                    {"function", "F1"},
                    {"D", 2},
                    {"transform", "random"},
                    {"swarm", 3},
                    {"moves", 20},
                    {"repeats", 25},
                    {"seed", 5},
                    {"trajectory", dir / "traj.csv"},
                    {"out", dir / "results.csv"}};
  const Json manifest = execute_command("run", req);
  const std::string results = read_text_file(dir / "results.csv");
  CHECK(count_lines(results) == 27);  // header, 25 repeats, mean
  const std::string traj = read_text_file(dir / "traj.csv");
  CHECK(count_lines(traj) == 1 + 25 * 3 * 21);
  CHECK(fs::exists(dir / "results.csv.manifest.json"));
  CHECK(manifest.at("summary").at("repeats") == 25);

  fs::create_directories(dir.path / "replay");
  replay_command(dir / "results.csv.manifest.json", dir.path / "replay");
  CHECK(read_text_file(dir / "replay/results.csv") == results);
  CHECK(read_text_file(dir / "replay/traj.csv") == traj);
}

TEST_CASE("command errors map to distinct exception types") {
  TempDir dir;
  const Json missing = {{"program_file", dir / "nope.push"}, {"function", "F1"}, {"out", dir / "r.csv"}};
  CHECK_THROWS_AS(execute_command("run", missing), IoError);
  const Json bad_function = {{"program", "()"}, {"function", "F15"}, {"out", dir / "r.csv"}};
  CHECK_THROWS_AS(execute_command("run", bad_function), ConfigError);
  const Json unknown = {{"program", "()"}, {"function", "F1"}, {"out", dir / "r.csv"}, {"colour", 1}};
  CHECK_THROWS_AS(execute_command("run", unknown), ConfigError);
  CHECK_THROWS_AS(execute_command("dance", Json::object()), ConfigError);
  const Json both = {{"pool_manifest", dir / "p.json"}, {"top", 2}, {"function", "F1"}, {"out", dir / "h.csv"}};
  CHECK_THROWS_AS(execute_command("hybrid", both), ConfigError);
}

TEST_CASE("evolve command is deterministic and feeds the hybrid command") {
  TempDir dir;
  const Json config = {{"function", "F1"}, {"D", 2}, {"swarm", 1}, {"moves", 200}, {"pop", 50}, {"gens", 5}, {"seed", 1}};
  execute_command("evolve", {{"config", config}, {"out", dir / "a"}});
  execute_command("evolve", {{"config", config}, {"out", dir / "b"}, {"jobs", 4}});
  const std::string best = read_text_file(dir / "a/best.push");
  CHECK(best == read_text_file(dir / "b/best.push"));
  CHECK(read_text_file(dir / "a/stats.csv") == read_text_file(dir / "b/stats.csv"));
  CHECK(count_lines(read_text_file(dir / "a/stats.csv")) == 7);
  CHECK(fs::exists(dir / "a/checkpoints/gen_005.json"));
  CHECK(fs::exists(dir / "a/manifest.json"));

  const Json common = {{"function", "F1"}, {"D", 2}, {"transform", "random"}, {"swarm", 4}, {"moves", 30},
                       {"repeats", 3}, {"seed", 2}};
  Json run = common;
  run["program_file"] = dir / "a/best.push";
  run["out"] = dir / "run.csv";
  execute_command("run", run);
  Json hybrid = common;
  hybrid["dir"] = dir / "a";
  hybrid["top"] = 1;
  hybrid["out"] = dir / "hybrid.csv";
  execute_command("hybrid", hybrid);
  const auto run_csv = read_text_file(dir / "run.csv");
  CHECK(run_csv == read_text_file(dir / "hybrid.csv"));

  fs::create_directories(dir.path / "again");
  replay_command(dir / "a/manifest.json", dir.path / "again");
  CHECK(read_text_file(dir / "again/best.push") == best);
}

TEST_CASE("simplify, usage and reevaluate commands") {
  TempDir dir;
  execute_command("simplify", {{"program", "(vector.rand exec.noop exec.noop)"},
                               {"function", "F1"},
                               {"D", 2},
                               {"transform", "random"},
                               {"moves", 30},
                               {"repeats", 3},
                               {"steps", dir / "steps.csv"},
                               {"out", dir / "simple.push"}});
  CHECK(read_text_file(dir / "simple.push") == "(vector.rand)\n");
  CHECK(count_lines(read_text_file(dir / "steps.csv")) == 3);

  execute_command("usage", {{"sets", {{{"label", "all"}, {"programs", {"(float.sin float.sin)", "(float.cos 2)"}}}}},
                            {"out", dir / "usage.csv"}});
  CHECK(read_text_file(dir / "usage.csv") ==
        "set,rank,instruction,count,rate\nall,1,float.sin,2,0.6666666666666666\nall,2,float.cos,1,0.3333333333333333\n");

  write_text_file(dir / "p1.push", "(vector.rand)");
  write_text_file(dir / "p2.push", "(0.5 vector.scale)");
  execute_command("reevaluate", {{"programs", {dir / "p1.push", dir / "p2.push"}},
                                 {"functions", {"F1", "F9", "F12", "F13", "F14"}},
                                 {"D", 2},
                                 {"moves", 10},
                                 {"runs", 4},
                                 {"raw", dir / "raw.csv"},
                                 {"out", dir / "table.csv"}});
  const std::string table = read_text_file(dir / "table.csv");
  CHECK(table.substr(0, table.find('\n')) == "optimiser,F1,F9,F12,F13,F14,mean_rank");
  CHECK(count_lines(table) == 3);
  CHECK(count_lines(read_text_file(dir / "raw.csv")) == 1 + 2 * 5 * 4);
}
