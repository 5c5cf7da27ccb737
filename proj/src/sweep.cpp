#include "mrmc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace mrmc {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Topology apply_config(const Topology& base, const CrConfig& config) {
  if (config.channels < 1 || config.radios < 1)
    throw ValidationError("C-R configuration values must be >= 1");
  Topology t = base;
  t.channels = config.channels;
  for (auto& n : t.nodes) n.radios = config.radios;
  return t;
}

ConfigResult run_config(const Topology& base, const CrConfig& config,
                        const TwoStageOptions& options) {
  ConfigResult result;
  result.config = config;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Topology t = apply_config(base, config);
    const std::vector<Tuple> tuples = enumerate_tuples(t);
    const ConflictGraph graph = build_mdcg(tuples, t);
    TwoStageResult solved = solve_two_stage(tuples, graph, t, options);
    result.capacity = solved.capacity;
    result.stats = solved.stats;
    result.plan = std::move(solved.plan);
    result.report = energy_efficiency(result.plan, tuples, t);
    if (solved.stats.capped) result.status = "capped";
  } catch (const Error& e) {
    result.status = std::string("error: ") + e.what();
  }
  result.wall_ms = elapsed_ms(start);
  return result;
}

std::vector<ConfigResult> sweep_cr(const Topology& base, int channels_from, int channels_to,
                                   int radios_from, int radios_to, const SweepOptions& options) {
  if (channels_from < 1 || radios_from < 1 || channels_to < channels_from ||
      radios_to < radios_from)
    throw ValidationError("sweep ranges must be non-empty and start at 1 or above");

  std::vector<CrConfig> grid;
  for (int c = channels_from; c <= channels_to; ++c)
    for (int r = radios_from; r <= radios_to; ++r) grid.push_back({c, r});

  std::vector<ConfigResult> results(grid.size());
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      results[i] = run_config(base, grid[i], options.solve);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= grid.size()) break;
        results[i] = run_config(base, grid[i], options.solve);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // grid order is already (channels, radios); keep it explicit regardless of
  // completion order
  std::vector<std::size_t> index(results.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
  std::sort(index.begin(), index.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].config.channels != results[b].config.channels)
      return results[a].config.channels < results[b].config.channels;
    return results[a].config.radios < results[b].config.radios;
  });
  std::vector<ConfigResult> sorted;
  sorted.reserve(results.size());
  for (const std::size_t i : index) sorted.push_back(std::move(results[i]));
  return sorted;
}

std::vector<RelaxationPoint> relaxation_sweep(const Topology& base, const CrConfig& config,
                                              const std::vector<double>& fractions,
                                              const TwoStageOptions& options) {
  for (const double rho : fractions)
    if (!(rho > 0.0) || rho > 1.0)
      throw ValidationError("relaxation fractions must lie in (0, 1]");

  const Topology t = apply_config(base, config);
  const std::vector<Tuple> tuples = enumerate_tuples(t);
  const ConflictGraph graph = build_mdcg(tuples, t);

  TwoStageSolver solver(tuples, graph, t, options);
  const double capacity = solver.solve_capacity();

  std::vector<RelaxationPoint> points;
  for (const double rho : fractions) {
    const auto start = std::chrono::steady_clock::now();
    RelaxationPoint point;
    point.rho = rho;
    TwoStageResult stage2 = solver.solve_min_energy(rho * capacity);
    point.plan = std::move(stage2.plan);
    point.report = energy_efficiency(point.plan, tuples, t);
    point.wall_ms = elapsed_ms(start);
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace mrmc
