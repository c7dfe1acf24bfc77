#include "pushopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pushopt/evolution.hpp"

namespace pushopt {

std::vector<UsageRow> rank_usage(const std::vector<std::uint64_t>& counts, std::size_t top_k) {
  std::uint64_t total = 0;
  std::vector<UsageRow> rows;
  for (std::size_t id = 0; id < counts.size(); ++id) {
    if (counts[id] == 0) continue;
    total += counts[id];
    rows.push_back({0, std::string(instruction_name(Instruction{static_cast<std::uint16_t>(id)})), counts[id], 0.0});
  }
  std::sort(rows.begin(), rows.end(), [](const UsageRow& a, const UsageRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.instruction < b.instruction;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rank = i + 1;
    rows[i].rate = static_cast<double>(rows[i].count) / static_cast<double>(total);
  }
  if (top_k != 0 && rows.size() > top_k) rows.resize(top_k);
  return rows;
}

std::vector<UsageRow> instruction_usage(const std::vector<Program>& programs, std::size_t top_k) {
  std::vector<std::uint64_t> counts(instruction_count(), 0);
  for (const auto& p : programs) {
    for (const auto& item : p.items()) {
      if (const auto* instr = std::get_if<Instruction>(&item)) ++counts[instr->id];
    }
  }
  return rank_usage(counts, top_k);
}

std::vector<UsageRow> dynamic_instruction_usage(const std::vector<Program>& programs, const Problem& problem,
                                                const RunConfig& config, std::size_t top_k) {
  std::vector<std::uint64_t> counts(instruction_count(), 0);
  RunConfig cfg = config;
  cfg.exec_counts = &counts;
  cfg.record_trajectory = false;
  for (const auto& p : programs) run_optimisation(p, problem, cfg);
  return rank_usage(counts, top_k);
}

SimplifyResult simplify(const Program& program, const ProblemFamily& family, std::size_t repeats,
                        const RunConfig& config, double tolerance) {
  SimplifyResult result;
  result.program = program;
  double current = fitness(program, family, repeats, config).mean;
  result.initial_fitness = current;

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < result.program.size() && result.program.size() > 1;) {
      std::vector<Item> items(result.program.items().begin(), result.program.items().end());
      const Item removed = items[i];
      items.erase(items.begin() + static_cast<std::ptrdiff_t>(i));
      Program candidate(std::move(items));
      const double f = fitness(candidate, family, repeats, config).mean;
      if (f <= current + std::fabs(current) * tolerance) {
        result.steps.push_back({i, print_item(removed), current, f});
        result.program = std::move(candidate);
        current = f;
        changed = true;
      } else {
        ++i;
      }
    }
  }
  result.final_fitness = current;
  return result;
}

std::vector<double> midranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

ErrorTable reevaluate(const std::vector<Optimiser>& optimisers, const std::vector<ProblemCase>& problems,
                      std::size_t runs, const RunConfig& config, std::size_t jobs) {
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  ErrorTable table;
  table.runs = runs;
  for (const auto& o : optimisers) table.optimisers.push_back(o.name);
  for (const auto& p : problems) table.problems.push_back(p.name);
  const std::size_t no = optimisers.size();
  const std::size_t np = problems.size();
  table.per_run.assign(no, std::vector<std::vector<double>>(np, std::vector<double>(runs, 0.0)));
  table.mean.assign(no, std::vector<double>(np, 0.0));

  parallel_for(no * np * runs, jobs, [&](std::size_t task) {
    const std::size_t r = task % runs;
    const std::size_t p = (task / runs) % np;
    const std::size_t o = task / (runs * np);
    RunConfig cfg = config;
    cfg.record_trajectory = false;
    cfg.exec_counts = nullptr;
    cfg.seed = derive_seed(config.seed, Stream::Reevaluation, {r});
    const Problem problem(problems[p].function, Transform::identity(problems[p].function->dim()));
    const auto& body = optimisers[o].body;
    double pbest;
    if (const auto* program = std::get_if<Program>(&body)) {
      pbest = run_optimisation(*program, problem, cfg).pbest;
    } else {
      pbest = run_hybrid(std::get<Pool>(body), problem, cfg).pbest;
    }
    table.per_run[o][p][r] = pbest;
  });

  for (std::size_t o = 0; o < no; ++o) {
    for (std::size_t p = 0; p < np; ++p) {
      const auto& v = table.per_run[o][p];
      table.mean[o][p] = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(runs);
    }
  }
  table.ranks.assign(no, std::vector<double>(np, 0.0));
  for (std::size_t p = 0; p < np; ++p) {
    std::vector<double> column(no);
    for (std::size_t o = 0; o < no; ++o) column[o] = table.mean[o][p];
    const auto r = midranks(column);
    for (std::size_t o = 0; o < no; ++o) table.ranks[o][p] = r[o];
  }
  table.mean_rank.assign(no, 0.0);
  for (std::size_t o = 0; o < no; ++o) {
    if (np == 0) continue;
    table.mean_rank[o] = std::accumulate(table.ranks[o].begin(), table.ranks[o].end(), 0.0) / static_cast<double>(np);
  }
  return table;
}

}  // namespace pushopt
