#include <doctest.h>

#include <algorithm>
#include <map>

#include "pushopt/evolution.hpp"

using namespace pushopt;

namespace {

std::vector<std::string> texts(const Program& p) {
  std::vector<std::string> out;
  for (const auto& item : p.items()) out.push_back(print_item(item));
  return out;
}

EvolutionConfig small_config(std::uint64_t seed) {
  EvolutionConfig c;
  c.population_size = 16;
  c.generations = 3;
  c.repeats = 2;
  c.run.swarm_size = 2;
  c.run.moves = 15;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("defaults match the documented evolutionary parameters") {
  const EvolutionConfig c;
  CHECK(c.population_size == 200);
  CHECK(c.generations == 50);
  CHECK(c.tournament_size == 5);
  CHECK(c.size_limit == 100);
  CHECK(c.rates.crossover == 0.4);
  CHECK(c.rates.mutation == 0.4);
  CHECK(c.rates.reproduction == 0.2);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("validation rejects inconsistent settings") {
  EvolutionConfig c;
  c.rates.reproduction = 0.3;
  CHECK_THROWS(c.validate());
  c = EvolutionConfig{};
  c.population_size = 0;
  CHECK_THROWS(c.validate());
  c = EvolutionConfig{};
  c.run.moves = 0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("crossover_at splices a prefix of one parent with the suffix of the other") {
  Rng rng(3);
  const auto set = InstructionSet::standard();
  for (int k = 0; k < 500; ++k) {
    const Program a = random_program(set, 30, rng);
    const Program b = random_program(set, 30, rng);
    const std::size_t cut = rng.index(std::min(a.size(), b.size()) + 1);
    const std::size_t limit = 1 + rng.index(60);
    const auto child = texts(crossover_at(a, b, cut, limit));

    auto want = texts(a);
    want.resize(cut);
    const auto tb = texts(b);
    want.insert(want.end(), tb.begin() + static_cast<std::ptrdiff_t>(cut), tb.end());
    if (want.empty()) want.push_back(tb.back());
    if (want.size() > limit) want.resize(limit);
    REQUIRE(child == want);
  }
}

TEST_CASE("mutation kinds change the program in the expected way") {
  Rng rng(8);
  const auto set = InstructionSet::standard();
  const Program p = parse_program("(float.+ float.- float.* float./)");
  const auto replaced = mutate(p, MutationKind::Replace, 2, set, 100, rng);
  CHECK(replaced.size() == 4);
  CHECK(replaced[0] == p[0]);
  CHECK(replaced[3] == p[3]);

  const auto inserted = mutate(p, MutationKind::Insert, 1, set, 100, rng);
  REQUIRE(inserted.size() == 5);
  CHECK(inserted[0] == p[0]);
  CHECK(inserted[2] == p[1]);

  const auto deleted = mutate(p, MutationKind::Delete, 0, set, 100, rng);
  CHECK(print_program(deleted) == "(float.- float.* float./)");

  CHECK(mutate(p, MutationKind::Insert, 0, set, 4, rng).size() == 4);
  CHECK(mutate(parse_program("(float.+)"), MutationKind::Delete, 0, set, 4, rng).size() == 1);
}

TEST_CASE("variation respects the size limit and never yields an empty program") {
  Rng rng(12);
  const auto set = InstructionSet::standard();
  for (int k = 0; k < 2000; ++k) {
    const Program a = random_program(set, 20, rng);
    REQUIRE(a.size() >= 1);
    REQUIRE(a.size() <= 20);
    const Program b = random_program(set, 20, rng);
    const Program c = crossover(a, b, 20, rng);
    REQUIRE(c.size() >= 1);
    REQUIRE(c.size() <= 20);
    const Program m = mutate(c, set, 20, rng);
    REQUIRE(m.size() >= 1);
    REQUIRE(m.size() <= 20);
  }
}

TEST_CASE("random atoms cover instructions and every literal kind") {
  Rng rng(1);
  const auto set = InstructionSet::standard();
  std::map<std::size_t, int> kinds;
  for (int k = 0; k < 20000; ++k) {
    const Item item = random_atom(set, rng, ErcRanges{-2.0, 2.0, -3, 3});
    kinds[item.index()]++;
    if (const auto* d = std::get_if<double>(&item)) REQUIRE((*d >= -2.0 && *d <= 2.0));
    if (const auto* i = std::get_if<std::int64_t>(&item)) REQUIRE((*i >= -3 && *i <= 3));
  }
  CHECK(kinds.size() == 4);
  // two boolean atoms against one of each ERC
  CHECK(kinds[1] > kinds[2]);
}

TEST_CASE("tournament selection") {
  Rng rng(21);
  const std::vector<double> fit = {5, 3, 9, 1, 7};
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int k = 0; k < n; ++k) counts[tournament_select(fit, 1, rng)]++;
  for (int c : counts) CHECK(static_cast<double>(c) / n == doctest::Approx(0.2).epsilon(0.05));

  int best = 0;
  for (int k = 0; k < 1000; ++k) best += tournament_select(fit, 200, rng) == 3;
  CHECK(best == 1000);

  // larger tournaments shift mass towards the fittest individual
  double previous = 0;
  for (std::size_t t : {1u, 2u, 3u, 5u}) {
    int wins = 0;
    for (int k = 0; k < 20000; ++k) wins += tournament_select(fit, t, rng) == 3;
    CHECK(wins > previous);
    previous = wins;
  }
}

TEST_CASE("evolution is deterministic and independent of the job count") {
  const auto family = make_family(FunctionId::F1, 2, 0, true);
  auto c = small_config(42);
  const auto a = evolve(c, family);
  c.jobs = 4;
  const auto b = evolve(c, family);
  CHECK(a.best_program == b.best_program);
  CHECK(a.best_fitness == b.best_fitness);
  CHECK(a.fitnesses == b.fitnesses);
  REQUIRE(a.stats.size() == c.generations + 1);
  for (std::size_t g = 0; g < a.stats.size(); ++g) {
    CHECK(a.stats[g].generation == g);
    CHECK(a.stats[g].best_so_far == b.stats[g].best_so_far);
    CHECK(a.stats[g].best <= a.stats[g].median);
    if (g > 0) CHECK(a.stats[g].best_so_far <= a.stats[g - 1].best_so_far);
  }
  CHECK(a.best_fitness == a.stats.back().best_so_far);

  const auto other = evolve(small_config(43), family);
  CHECK(other.fitnesses != a.fitnesses);
}

TEST_CASE("generation callback sees every generation") {
  const auto family = make_family(FunctionId::F9, 2, 0, true);
  std::vector<std::size_t> seen;
  evolve(small_config(5), family, [&](const GenerationStats& s, std::span<const Program> pop, std::span<const double> fit) {
    seen.push_back(s.generation);
    CHECK(pop.size() == 16);
    CHECK(fit.size() == 16);
  });
  CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("parallel_for visits each index once and forwards exceptions") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS(parallel_for(10, 4, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}
