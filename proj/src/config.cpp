#include "sdcsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sdc {
namespace {

using nlohmann::json;

// Reads known keys out of one section object, rejecting unknown ones so
// typos surface as errors instead of silently keeping defaults.
class SectionReader {
 public:
  SectionReader(const json& section, std::string path) : sec_(section), path_(std::move(path)) {
    if (!sec_.is_object()) throw ConfigError(path_, "must be an object");
  }

  template <typename T>
  void field(const char* key, T& out) {
    seen_.push_back(key);
    auto it = sec_.find(key);
    if (it == sec_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key, std::string("wrong type (expected ") + type_name<T>() + ")");
    }
  }

  // Marks a key as known without reading it (parsed separately by the caller).
  void claim(const char* key) { seen_.push_back(key); }

  void finish() const {
    for (auto it = sec_.begin(); it != sec_.end(); ++it) {
      bool known = false;
      for (const char* k : seen_)
        if (it.key() == k) known = true;
      if (!known) throw ConfigError(path_ + "." + it.key(), "unknown field");
    }
  }

 private:
  template <typename T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) return "boolean";
    else if constexpr (std::is_integral_v<T>) return "integer";
    else if constexpr (std::is_floating_point_v<T>) return "number";
    else return "array";
  }

  const json& sec_;
  std::string path_;
  std::vector<const char*> seen_;
};

json schedule_to_json(const std::vector<std::pair<double, double>>& entries) {
  json arr = json::array();
  for (const auto& [start, value] : entries) arr.push_back(json::array({start, value}));
  return arr;
}

std::vector<std::pair<double, double>> schedule_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path, "must be an array of [start, value] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ConfigError(path, "entries must be [start, value] number pairs");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

json to_json(const RunConfig& c) {
  json j;
  j["network"] = {{"size", c.network.size}, {"p_loss", c.network.p_loss}};
  j["protocol"] = {{"theta_act", c.protocol.theta_act}, {"s_a", c.protocol.s_a},
                   {"p_a", c.protocol.p_a},             {"g", c.protocol.g},
                   {"p_min", c.protocol.p_min},         {"p_max", c.protocol.p_max}};
  j["power"] = {{"levels", c.power.levels}, {"range_scale", c.power.range_scale}};
  j["energy"] = {{"e_tx", c.energy.e_tx},
                 {"e_rx", c.energy.e_rx},
                 {"e_on", c.energy.e_on},
                 {"e_off_ratio", c.energy.e_off_ratio},
                 {"e_app", c.energy.e_app},
                 {"initial_battery", c.energy.initial_battery}};
  j["environment"] = {{"day_length_periods", c.environment.day_length_periods},
                      {"cloud_cover", c.environment.cloud_cover},
                      {"cloud_schedule", schedule_to_json(c.environment.cloud_schedule)},
                      {"harvest_factor", c.environment.harvest_factor}};
  j["sim"] = {{"seed", c.sim.seed},
              {"periods", c.sim.periods},
              {"warmup_periods", c.sim.warmup_periods},
              {"delta_seconds", c.sim.delta_seconds},
              {"phase1_seconds", c.sim.phase1_seconds}};
  j["scaling"] = {{"literal_power_formula", c.scaling.literal_power_formula}};
  return j;
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config root must be an object");
  RunConfig c;
  static const char* known_sections[] = {"network", "protocol", "power",   "energy",
                                         "environment", "sim",  "scaling"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* s : known_sections)
      if (it.key() == s) known = true;
    if (!known) throw ConfigError(it.key(), "unknown section");
  }

  if (j.contains("network")) {
    SectionReader r(j["network"], "network");
    r.field("size", c.network.size);
    r.field("p_loss", c.network.p_loss);
    r.finish();
  }
  if (j.contains("protocol")) {
    SectionReader r(j["protocol"], "protocol");
    r.field("theta_act", c.protocol.theta_act);
    r.field("s_a", c.protocol.s_a);
    r.field("p_a", c.protocol.p_a);
    r.field("g", c.protocol.g);
    r.field("p_min", c.protocol.p_min);
    r.field("p_max", c.protocol.p_max);
    r.finish();
  }
  if (j.contains("power")) {
    SectionReader r(j["power"], "power");
    r.field("levels", c.power.levels);
    r.field("range_scale", c.power.range_scale);
    r.finish();
  }
  if (j.contains("energy")) {
    SectionReader r(j["energy"], "energy");
    r.field("e_tx", c.energy.e_tx);
    r.field("e_rx", c.energy.e_rx);
    r.field("e_on", c.energy.e_on);
    r.field("e_off_ratio", c.energy.e_off_ratio);
    r.field("e_app", c.energy.e_app);
    r.field("initial_battery", c.energy.initial_battery);
    r.finish();
  }
  if (j.contains("environment")) {
    const json& sec = j["environment"];
    SectionReader r(sec, "environment");
    r.field("day_length_periods", c.environment.day_length_periods);
    r.field("cloud_cover", c.environment.cloud_cover);
    if (sec.is_object() && sec.contains("cloud_schedule"))
      c.environment.cloud_schedule =
          schedule_from_json(sec["cloud_schedule"], "environment.cloud_schedule");
    r.claim("cloud_schedule");
    r.field("harvest_factor", c.environment.harvest_factor);
    r.finish();
  }
  if (j.contains("sim")) {
    SectionReader r(j["sim"], "sim");
    r.field("seed", c.sim.seed);
    r.field("periods", c.sim.periods);
    r.field("warmup_periods", c.sim.warmup_periods);
    r.field("delta_seconds", c.sim.delta_seconds);
    r.field("phase1_seconds", c.sim.phase1_seconds);
    r.finish();
  }
  if (j.contains("scaling")) {
    SectionReader r(j["scaling"], "scaling");
    r.field("literal_power_formula", c.scaling.literal_power_formula);
    r.finish();
  }
  return c;
}

void require(bool ok, const char* path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void RunConfig::validate() const {
  require(network.size >= 1, "network.size", "must be >= 1 (got " + std::to_string(network.size) + ")");
  require(finite(network.p_loss) && network.p_loss >= 0.0 && network.p_loss <= 1.0,
          "network.p_loss", "must be in [0, 1]");

  require(finite(protocol.theta_act), "protocol.theta_act", "must be finite");
  require(finite(protocol.s_a), "protocol.s_a", "must be finite");
  require(finite(protocol.p_a) && protocol.p_a >= 0.0 && protocol.p_a <= 1.0, "protocol.p_a",
          "must be in [0, 1]");
  require(finite(protocol.g) && protocol.g > 0.0, "protocol.g", "must be > 0");
  require(finite(protocol.p_min) && protocol.p_min >= 0.0, "protocol.p_min", "must be >= 0");
  require(finite(protocol.p_max) && protocol.p_max >= protocol.p_min, "protocol.p_max",
          "must be >= protocol.p_min");

  require(!power.levels.empty(), "power.levels", "must be nonempty");
  for (std::size_t i = 0; i < power.levels.size(); ++i) {
    require(finite(power.levels[i]) && power.levels[i] > 0.0, "power.levels",
            "entries must be positive");
    if (i > 0)
      require(power.levels[i] > power.levels[i - 1], "power.levels",
              "must be strictly increasing");
  }
  require(finite(power.range_scale) && power.range_scale > 0.0, "power.range_scale",
          "must be > 0");

  require(finite(energy.e_tx) && energy.e_tx >= 0.0, "energy.e_tx", "must be >= 0");
  require(finite(energy.e_rx) && energy.e_rx >= 0.0, "energy.e_rx", "must be >= 0");
  require(finite(energy.e_on) && energy.e_on >= 0.0, "energy.e_on", "must be >= 0");
  require(finite(energy.e_off_ratio) && energy.e_off_ratio >= 0.0, "energy.e_off_ratio",
          "must be >= 0");
  require(finite(energy.e_app) && energy.e_app >= 0.0, "energy.e_app", "must be >= 0");
  require(finite(energy.initial_battery) && energy.initial_battery >= 0.0 &&
              energy.initial_battery <= 1.0,
          "energy.initial_battery", "must be in [0, 1]");

  require(finite(environment.day_length_periods) && environment.day_length_periods >= 1.0,
          "environment.day_length_periods", "must be >= 1");
  require(finite(environment.cloud_cover) && environment.cloud_cover >= 0.0 &&
              environment.cloud_cover <= 1.0,
          "environment.cloud_cover", "must be in [0, 1]");
  double prev_start = -1.0;
  for (const auto& [start, value] : environment.cloud_schedule) {
    require(finite(start) && start >= 0.0 && start > prev_start, "environment.cloud_schedule",
            "starts must be >= 0 and strictly ascending");
    require(finite(value) && value >= 0.0 && value <= 1.0, "environment.cloud_schedule",
            "values must be in [0, 1]");
    prev_start = start;
  }
  require(finite(environment.harvest_factor) && environment.harvest_factor >= 0.0,
          "environment.harvest_factor", "must be >= 0");

  require(sim.periods >= 1, "sim.periods", "must be >= 1");
  require(sim.warmup_periods >= 0, "sim.warmup_periods", "must be >= 0");
  require(finite(sim.delta_seconds) && sim.delta_seconds > 0.0, "sim.delta_seconds",
          "must be > 0");
  require(finite(sim.phase1_seconds) && sim.phase1_seconds > 0.0 &&
              sim.phase1_seconds < sim.delta_seconds,
          "sim.phase1_seconds", "must be in (0, sim.delta_seconds)");
}

ProtocolParams RunConfig::protocol_params() const {
  ProtocolParams p;
  p.theta_act = protocol.theta_act;
  p.s_a = protocol.s_a;
  p.p_a = protocol.p_a;
  p.g = protocol.g;
  p.p_min = protocol.p_min;
  p.p_max = protocol.p_max;
  p.levels = power.levels;
  return p;
}

EnergyParams RunConfig::energy_params() const {
  EnergyParams e;
  e.e_tx = energy.e_tx;
  e.e_rx = energy.e_rx;
  e.e_on = energy.e_on;
  e.e_off = energy.e_on * energy.e_off_ratio;
  e.e_app = energy.e_app;
  return e;
}

Environment RunConfig::make_environment() const {
  Environment env;
  env.day_length = environment.day_length_periods;
  env.cloud.base = environment.cloud_cover;
  env.cloud.entries = environment.cloud_schedule;
  return env;
}

std::string serialize_config(const RunConfig& cfg) {
  return to_json(cfg).dump(2) + "\n";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("", "override must look like section.key=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error&) {
    value = raw;  // uninterpretable values pass through as strings
  }

  json doc = to_json(cfg);
  json* node = &doc;
  std::size_t begin = 0;
  std::string walked;
  while (true) {
    const auto dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot == std::string::npos ? dot : dot - begin);
    if (key.empty()) throw ConfigError(path, "empty path component");
    walked = walked.empty() ? key : walked + "." + key;
    if (!node->is_object() || !node->contains(key))
      throw ConfigError(walked, "unknown config field");
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  *node = value;
  cfg = from_json(doc);
}

}  // namespace sdc
