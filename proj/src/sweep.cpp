#include "sdcsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "sdcsim/metrics.hpp"
#include "sdcsim/netsim.hpp"

namespace sdc {

double scale_power(double t, double k, double k_new) {
  if (!(k > 0.0) || !(k_new > 0.0))
    throw std::invalid_argument("scale_power: sizes must be positive");
  return t * std::sqrt(k / k_new);
}

double scale_power_literal(double t, double k, double k_new) {
  if (!(k > 0.0) || !(k_new > 0.0))
    throw std::invalid_argument("scale_power: sizes must be positive");
  return std::sqrt(t * 2.0 * k / k_new);
}

double scale_pa(double p, double k, double k_new) {
  if (!(k > 0.0) || !(k_new > 0.0)) throw std::invalid_argument("scale_pa: sizes must be positive");
  const double scaled = p * k / k_new;
  return std::min(1.0, std::max(0.0, scaled));
}

RunConfig sweep_point_config(const SweepSpec& spec, double value, std::uint64_t seed) {
  RunConfig cfg = spec.base;
  cfg.sim.seed = seed;
  switch (spec.var) {
    case SweepVar::Loss:
      if (!(value >= 0.0 && value <= 1.0))
        throw std::invalid_argument("loss value must be in [0, 1]");
      cfg.network.p_loss = value;
      break;
    case SweepVar::Cloud:
      if (!(value >= 0.0 && value <= 1.0))
        throw std::invalid_argument("cloud value must be in [0, 1]");
      cfg.environment.cloud_cover = value;
      break;
    case SweepVar::Size: {
      const double rounded = std::round(value);
      if (value != rounded) throw std::invalid_argument("size value must be an integer");
      if (rounded < kMinSweepSize)
        throw std::invalid_argument("size value must be >= " + std::to_string(kMinSweepSize));
      const double base_k = static_cast<double>(spec.base.network.size);
      cfg.network.size = static_cast<int>(rounded);
      auto scale = spec.base.scaling.literal_power_formula ? scale_power_literal : scale_power;
      cfg.protocol.p_min = scale(spec.base.protocol.p_min, base_k, rounded);
      cfg.protocol.p_max = scale(spec.base.protocol.p_max, base_k, rounded);
      cfg.protocol.p_a = scale_pa(spec.base.protocol.p_a, base_k, rounded);
      break;
    }
  }
  return cfg;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("run_sweep: empty value grid");
  if (spec.seeds < 1) throw std::invalid_argument("run_sweep: need at least one seed");
  spec.base.validate();

  struct Task {
    double value;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  tasks.reserve(spec.values.size() * spec.seeds);
  for (double value : spec.values)
    for (int s = 1; s <= spec.seeds; ++s) tasks.push_back({value, static_cast<std::uint64_t>(s)});

  std::vector<SweepRow> runs(tasks.size());
  const auto execute = [&](std::size_t idx) {
    const Task& task = tasks[idx];
    SweepRow row;
    row.value = task.value;
    row.seed = task.seed;
    try {
      const RunConfig cfg = sweep_point_config(spec, task.value, task.seed);
      Engine engine(cfg);
      const RunResult res = engine.run();
      row.mean_system_activity = mean_system_activity(res.trace, cfg.sim.warmup_periods);
      row.final_mean_battery = res.final_mean_battery;
      row.breakdown = energy_breakdown(res.buckets);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    runs[idx] = std::move(row);
  };

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) execute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int n_workers = static_cast<int>(std::min<std::size_t>(jobs, tasks.size()));
    workers.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          execute(i);
      });
    }
    for (std::thread& t : workers) t.join();
  }

  // Assemble grouped output: each value's seed rows followed by its average.
  std::vector<SweepRow> rows;
  rows.reserve(tasks.size() + spec.values.size());
  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    SweepRow avg;
    avg.value = spec.values[v];
    avg.averaged = true;
    int ok_count = 0;
    for (int s = 0; s < spec.seeds; ++s) {
      const SweepRow& row = runs[v * spec.seeds + s];
      rows.push_back(row);
      if (!row.ok) continue;
      ++ok_count;
      avg.mean_system_activity += row.mean_system_activity;
      avg.final_mean_battery += row.final_mean_battery;
      for (std::size_t b = 0; b < avg.breakdown.size(); ++b) avg.breakdown[b] += row.breakdown[b];
    }
    if (ok_count == 0) {
      avg.ok = false;
      avg.error = "all seeds failed";
    } else {
      avg.mean_system_activity /= ok_count;
      avg.final_mean_battery /= ok_count;
      for (double& b : avg.breakdown) b /= ok_count;
    }
    rows.push_back(std::move(avg));
  }
  return rows;
}

}  // namespace sdc
