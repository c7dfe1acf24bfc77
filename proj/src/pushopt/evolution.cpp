#include "pushopt/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace pushopt {

void EvolutionConfig::validate() const {
  if (population_size == 0) throw std::invalid_argument("population size must be positive");
  if (tournament_size == 0) throw std::invalid_argument("tournament size must be positive");
  if (size_limit == 0) throw std::invalid_argument("size limit must be positive");
  if (repeats == 0) throw std::invalid_argument("repeats must be positive");
  if (run.swarm_size == 0 || run.moves == 0 || run.execution_limit == 0) {
    throw std::invalid_argument("swarm size, moves and execution limit must be positive");
  }
  if (rates.crossover < 0 || rates.mutation < 0 || rates.reproduction < 0 ||
      std::fabs(rates.crossover + rates.mutation + rates.reproduction - 1.0) > 1e-9) {
    throw std::invalid_argument("operator rates must be non-negative and sum to 1");
  }
  if (instruction_set.atom_count() == 0) throw std::invalid_argument("instruction set is empty");
}

Item random_atom(const InstructionSet& set, Rng& rng, const ErcRanges& erc) {
  const std::size_t n = set.atom_count();
  if (n == 0) throw std::invalid_argument("instruction set is empty");
  std::size_t pick = rng.index(n);
  const auto instructions = set.instructions();
  if (pick < instructions.size()) return instructions[pick];
  pick -= instructions.size();
  if (set.float_erc()) {
    if (pick == 0) return rng.uniform(erc.float_lo, erc.float_hi);
    --pick;
  }
  if (set.integer_erc()) {
    if (pick == 0) return rng.uniform_int(erc.integer_lo, erc.integer_hi);
    --pick;
  }
  return pick == 0;  // true, then false
}

Program random_program(const InstructionSet& set, std::size_t size_limit, Rng& rng, const ErcRanges& erc) {
  const std::size_t length = 1 + rng.index(std::max<std::size_t>(size_limit, 1));
  std::vector<Item> items;
  items.reserve(length);
  for (std::size_t i = 0; i < length; ++i) items.push_back(random_atom(set, rng, erc));
  return Program(std::move(items));
}

Program mutate(const Program& parent, MutationKind kind, std::size_t position, const InstructionSet& set,
               std::size_t size_limit, Rng& rng, const ErcRanges& erc) {
  std::vector<Item> items(parent.items().begin(), parent.items().end());
  switch (kind) {
    case MutationKind::Replace:
      if (!items.empty()) items[std::min(position, items.size() - 1)] = random_atom(set, rng, erc);
      break;
    case MutationKind::Insert:
      if (items.size() < size_limit) {
        items.insert(items.begin() + static_cast<std::ptrdiff_t>(std::min(position, items.size())),
                     random_atom(set, rng, erc));
      }
      break;
    case MutationKind::Delete:
      if (items.size() > 1) items.erase(items.begin() + static_cast<std::ptrdiff_t>(std::min(position, items.size() - 1)));
      break;
  }
  return Program(std::move(items));
}

Program mutate(const Program& parent, const InstructionSet& set, std::size_t size_limit, Rng& rng,
               const ErcRanges& erc) {
  const auto kind = static_cast<MutationKind>(rng.index(3));
  const std::size_t slots = kind == MutationKind::Insert ? parent.size() + 1 : std::max<std::size_t>(parent.size(), 1);
  return mutate(parent, kind, rng.index(slots), set, size_limit, rng, erc);
}

Program crossover_at(const Program& a, const Program& b, std::size_t cut, std::size_t size_limit) {
  cut = std::min({cut, a.size(), b.size()});
  std::vector<Item> items(a.items().begin(), a.items().begin() + static_cast<std::ptrdiff_t>(cut));
  items.insert(items.end(), b.items().begin() + static_cast<std::ptrdiff_t>(cut), b.items().end());
  if (items.empty()) {
    if (!b.empty()) {
      items.push_back(b[b.size() - 1]);
    } else if (!a.empty()) {
      items.push_back(a[0]);
    }
  }
  if (items.size() > size_limit) items.resize(size_limit);
  return Program(std::move(items));
}

Program crossover(const Program& a, const Program& b, std::size_t size_limit, Rng& rng) {
  const std::size_t cut = rng.index(std::min(a.size(), b.size()) + 1);
  return crossover_at(a, b, cut, size_limit);
}

std::size_t tournament_select(std::span<const double> fitnesses, std::size_t k, Rng& rng) {
  if (fitnesses.empty()) throw std::invalid_argument("tournament over an empty population");
  std::size_t winner = rng.index(fitnesses.size());
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t c = rng.index(fitnesses.size());
    if (fitnesses[c] < fitnesses[winner]) winner = c;
  }
  return winner;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

GenerationStats summarise(std::size_t generation, std::span<const double> fitnesses, double best_so_far) {
  std::vector<double> sorted(fitnesses.begin(), fitnesses.end());
  std::sort(sorted.begin(), sorted.end());
  GenerationStats s;
  s.generation = generation;
  s.best = sorted.front();
  const std::size_t n = sorted.size();
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  s.best_so_far = best_so_far;
  return s;
}

}  // namespace

EvolvedResult evolve(const EvolutionConfig& config, const ProblemFamily& family,
                     const GenerationCallback& on_generation) {
  config.validate();
  const std::size_t n = config.population_size;

  auto evaluate = [&](std::span<const Program> programs, std::size_t generation) {
    std::vector<double> out(programs.size());
    parallel_for(programs.size(), config.jobs, [&](std::size_t i) {
      RunConfig run = config.run;
      run.seed = derive_seed(config.seed, Stream::Fitness, {generation, i});
      out[i] = fitness(programs[i], family, config.repeats, run).mean;
    });
    return out;
  };

  Rng init_rng(derive_seed(config.seed, Stream::Population));
  std::vector<Program> population;
  population.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    population.push_back(random_program(config.instruction_set, config.size_limit, init_rng, config.erc));
  }
  std::vector<double> fit = evaluate(population, 0);

  EvolvedResult result;
  auto track_best = [&] {
    const auto it = std::min_element(fit.begin(), fit.end());
    const auto i = static_cast<std::size_t>(it - fit.begin());
    if (result.stats.empty() || fit[i] < result.best_fitness) {
      result.best_fitness = fit[i];
      result.best_program = population[i];
    }
    return i;
  };

  std::size_t elite = track_best();
  result.stats.push_back(summarise(0, fit, result.best_fitness));
  if (on_generation) on_generation(result.stats.back(), population, fit);

  for (std::size_t g = 1; g <= config.generations; ++g) {
    Rng rng(derive_seed(config.seed, Stream::Variation, {g}));
    std::vector<Program> next;
    next.reserve(n);
    next.push_back(population[elite]);
    const double elite_fitness = fit[elite];
    while (next.size() < n) {
      const double r = rng.uniform();
      const Program& parent = population[tournament_select(fit, config.tournament_size, rng)];
      if (r < config.rates.crossover) {
        const Program& other = population[tournament_select(fit, config.tournament_size, rng)];
        next.push_back(crossover(parent, other, config.size_limit, rng));
      } else if (r < config.rates.crossover + config.rates.mutation) {
        next.push_back(mutate(parent, config.instruction_set, config.size_limit, rng, config.erc));
      } else {
        next.push_back(parent);
      }
    }
    population = std::move(next);
    fit = evaluate(population, g);
    // fitness is a noisy estimate; the elite keeps its best observed value
    fit[0] = std::min(fit[0], elite_fitness);
    elite = track_best();
    result.stats.push_back(summarise(g, fit, result.best_fitness));
    if (on_generation) on_generation(result.stats.back(), population, fit);
  }

  result.population = std::move(population);
  result.fitnesses = std::move(fit);
  return result;
}

}  // namespace pushopt
