#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sdcsim/energy.hpp"
#include "sdcsim/protocol.hpp"

// Run configuration: nested sections, JSON-with-comments on disk, strict
// parsing (unknown keys rejected), validation with field-path diagnostics,
// loss-free round-trip.

namespace sdc {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct NetworkConfig {
  int size = 120;        // node count
  double p_loss = 0.0;   // per-(message, receiver) Bernoulli loss probability

  bool operator==(const NetworkConfig&) const = default;
};

struct ProtocolConfig {
  double theta_act = 5e-4;
  double s_a = 1.0;
  double p_a = 1e-3;
  double g = 0.1;
  double p_min = 0.07;
  double p_max = 0.14;

  bool operator==(const ProtocolConfig&) const = default;
};

struct PowerConfig {
  // Radio TX power profile (normalized units, roughly 1.5-2 dB steps).
  std::vector<double> levels{0.030, 0.045, 0.065, 0.092, 0.154, 0.300};
  // Reach radius of a transmission = range_scale * level value.
  double range_scale = 1.33;

  bool operator==(const PowerConfig&) const = default;
};

struct EnergyConfig {
  double e_tx = 1e-5;
  double e_rx = 1e-5;
  double e_on = 1e-4;
  // Sleep/idle current draw as a fraction of radio-on draw (25 uA / 12.8 mA).
  double e_off_ratio = 0.025 / 12.8;
  double e_app = 1e-3;
  double initial_battery = 1.0;

  bool operator==(const EnergyConfig&) const = default;
};

struct EnvironmentConfig {
  double day_length_periods = 1440.0;
  double cloud_cover = 0.0;
  // Optional piecewise-constant override: [start_period, value] pairs with
  // ascending starts; before the first start, cloud_cover applies.
  std::vector<std::pair<double, double>> cloud_schedule;
  double harvest_factor = 2.7e-3;  // f

  bool operator==(const EnvironmentConfig&) const = default;
};

struct SimConfig {
  std::uint64_t seed = 2;
  std::int64_t periods = 43200;        // 30 days
  std::int64_t warmup_periods = 1440;  // first day excluded from averages
  double delta_seconds = 60.0;         // period length
  double phase1_seconds = 0.05;        // duty-cycling window at period start

  bool operator==(const SimConfig&) const = default;
};

struct ScalingConfig {
  // Use the size-compensation power formula in its literal published form
  // sqrt(t * 2 * k / k_new) instead of the default t * sqrt(k / k_new).
  bool literal_power_formula = false;

  bool operator==(const ScalingConfig&) const = default;
};

struct RunConfig {
  NetworkConfig network;
  ProtocolConfig protocol;
  PowerConfig power;
  EnergyConfig energy;
  EnvironmentConfig environment;
  SimConfig sim;
  ScalingConfig scaling;

  // Throws ConfigError naming the offending field path.
  void validate() const;

  ProtocolParams protocol_params() const;
  EnergyParams energy_params() const;   // e_off = e_on * e_off_ratio
  Environment make_environment() const;
  double phase1_fraction() const { return sim.phase1_seconds / sim.delta_seconds; }

  bool operator==(const RunConfig&) const = default;
};

// JSON serialization (two-space indent, stable key order, trailing newline).
std::string serialize_config(const RunConfig& cfg);

// Strict parse from JSON text; // and /* */ comments allowed. Missing fields
// take defaults; unknown keys and type mismatches raise ConfigError.
RunConfig parse_config(const std::string& text);

// Reads and parses a config file; ConfigError on missing/unreadable files.
RunConfig load_config_file(const std::string& path);

// Applies one "section.key=value" override onto a config; the value is parsed
// as JSON (numbers, booleans, arrays), falling back to a raw string.
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace sdc
