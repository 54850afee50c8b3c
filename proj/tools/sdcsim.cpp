// Command-line front end: single runs (trace CSV + summary) and parameter
// sweeps over loss, cloud cover, or network size (sweep CSV).
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdcsim/config.hpp"
#include "sdcsim/csv.hpp"
#include "sdcsim/metrics.hpp"
#include "sdcsim/netsim.hpp"
#include "sdcsim/sweep.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> periods;
  std::string out;
};

void add_common_options(CLI::App& cmd, CommonOptions& opts) {
  cmd.add_option("--config", opts.config_path, "Configuration file (JSON, // comments allowed)");
  cmd.add_option("--set", opts.overrides,
                 "Override a config value as section.key=value (repeatable)");
  cmd.add_option("--seed", opts.seed, "Root RNG seed (overrides config)");
  cmd.add_option("--periods", opts.periods, "Number of periods to simulate (overrides config)");
  cmd.add_option("--out", opts.out, "Output CSV path");
}

sdc::RunConfig build_config(const CommonOptions& opts) {
  sdc::RunConfig cfg;
  if (!opts.config_path.empty()) cfg = sdc::load_config_file(opts.config_path);
  for (const std::string& assignment : opts.overrides) sdc::apply_override(cfg, assignment);
  if (opts.seed) cfg.sim.seed = *opts.seed;
  if (opts.periods) cfg.sim.periods = *opts.periods;
  cfg.validate();
  return cfg;
}

std::filesystem::path default_out(const char* filename) {
  if (const char* dir = std::getenv("SDCSIM_OUT_DIR"); dir != nullptr && *dir != '\0')
    return std::filesystem::path(dir) / filename;
  return std::filesystem::path(filename);
}

// Grid syntax: "start:end:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  const auto parse_number = [](const std::string& token) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid grid value: '" + token + "'");
    }
    if (pos != token.size()) throw std::invalid_argument("invalid grid value: '" + token + "'");
    return v;
  };

  std::vector<std::string> tokens;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = text.find(sep, begin);
    tokens.push_back(text.substr(begin, end == std::string::npos ? end : end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }

  if (sep == ':') {
    if (tokens.size() != 3) throw std::invalid_argument("grid range must be start:end:step");
    const double start = parse_number(tokens[0]);
    const double end = parse_number(tokens[1]);
    const double step = parse_number(tokens[2]);
    if (step == 0.0) throw std::invalid_argument("grid step must be nonzero");
    const double span = (end - start) / step;
    if (span < -0.5) throw std::invalid_argument("grid step points away from end value");
    const long n = std::lround(span) + 1;
    std::vector<double> values(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
      values[static_cast<std::size_t>(i)] =
          n == 1 ? start : start + (end - start) * static_cast<double>(i) / (n - 1);
    return values;
  }

  std::vector<double> values;
  for (const std::string& token : tokens) {
    if (token.empty()) throw std::invalid_argument("empty grid value");
    values.push_back(parse_number(token));
  }
  if (values.empty()) throw std::invalid_argument("empty grid");
  return values;
}

int cmd_run(const CommonOptions& opts) {
  const sdc::RunConfig cfg = build_config(opts);
  sdc::Engine engine(cfg);
  const sdc::RunResult result = engine.run();

  const std::filesystem::path out_path =
      opts.out.empty() ? default_out("trace.csv") : std::filesystem::path(opts.out);
  sdc::write_trace_csv(result.trace, out_path);

  std::printf("nodes: %d  periods: %lld  seed: %llu\n", cfg.network.size,
              static_cast<long long>(cfg.sim.periods),
              static_cast<unsigned long long>(cfg.sim.seed));
  if (cfg.sim.periods > cfg.sim.warmup_periods) {
    const double msa = sdc::mean_system_activity(result.trace, cfg.sim.warmup_periods);
    std::printf("mean system activity (after warm-up): %s\n", sdc::format_real(msa).c_str());
  } else {
    std::printf("mean system activity (after warm-up): n/a (run shorter than warm-up)\n");
  }
  std::printf("final mean battery: %s\n", sdc::format_real(result.final_mean_battery).c_str());

  const auto pct = sdc::energy_breakdown(result.buckets);
  std::printf("energy breakdown %%: tx %.2f  rx %.2f  idle %.2f  active %.2f  app %.2f\n", pct[0],
              pct[1], pct[2], pct[3], pct[4]);

  const std::int64_t usable = cfg.sim.periods - cfg.sim.warmup_periods;
  if (usable >= cfg.environment.day_length_periods) {
    const sdc::OscillationStats osc =
        sdc::detect_oscillation(result.trace, cfg.sim.warmup_periods,
                                static_cast<double>(cfg.environment.day_length_periods));
    std::printf("activity oscillation: %.2f peaks/day, amplitude %s\n", osc.peaks_per_day,
                sdc::format_real(osc.amplitude()).c_str());
  }

  std::printf("wrote %zu trace rows to %s\n", result.trace.size(), out_path.string().c_str());
  return 0;
}

int cmd_sweep(const CommonOptions& opts, sdc::SweepVar var, const std::string& grid, int seeds,
              int jobs) {
  sdc::SweepSpec spec;
  spec.var = var;
  spec.values = parse_grid(grid);
  spec.seeds = seeds;
  spec.jobs = jobs;
  spec.base = build_config(opts);

  const std::vector<sdc::SweepRow> rows = sdc::run_sweep(spec);
  const std::filesystem::path out_path =
      opts.out.empty() ? default_out("sweep.csv") : std::filesystem::path(opts.out);
  sdc::write_sweep_csv(rows, out_path);

  std::printf("sweep: %zu values x %d seeds\n", spec.values.size(), spec.seeds);
  for (const sdc::SweepRow& row : rows) {
    if (!row.averaged) continue;
    if (row.ok) {
      std::printf("value %s: mean system activity %s (avg over seeds)\n",
                  sdc::format_real(row.value).c_str(),
                  sdc::format_real(row.mean_system_activity).c_str());
    } else {
      std::printf("value %s: failed (%s)\n", sdc::format_real(row.value).c_str(),
                  row.error.c_str());
    }
  }
  std::printf("wrote %zu sweep rows to %s\n", rows.size(), out_path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-synchronized duty-cycling simulator for energy-harvesting sensor networks"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Simulate one network and write its activity trace");
  add_common_options(*run, run_opts);

  CommonOptions sweep_opts;
  std::string var_name;
  std::string grid;
  int seeds = 3;
  int jobs = 1;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run a parameter sweep with several seeds per grid value");
  add_common_options(*sweep, sweep_opts);
  sweep->add_option("--var", var_name, "Swept variable: loss, cloud, or size")
      ->required()
      ->check(CLI::IsMember({"loss", "cloud", "size"}));
  sweep->add_option("--grid", grid, "Grid values: start:end:step or v1,v2,...")->required();
  sweep->add_option("--seeds", seeds, "Seeds per grid value (root seeds 1..N)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    const std::map<std::string, sdc::SweepVar> vars{{"loss", sdc::SweepVar::Loss},
                                                    {"cloud", sdc::SweepVar::Cloud},
                                                    {"size", sdc::SweepVar::Size}};
    return cmd_sweep(sweep_opts, vars.at(var_name), grid, seeds, jobs);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
