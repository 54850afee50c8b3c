// Configuration parsing/validation and the CSV writers. Default values,
// error paths, and output formatting are all frozen; CSV writes must be
// byte-stable and atomic.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdcsim/config.hpp"
#include "sdcsim/csv.hpp"
#include "sdcsim/rng.hpp"

using namespace sdc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool has_temp_files(const fs::path& dir) {
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename().string().find(".tmp.") != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("defaults are frozen") {
  const RunConfig cfg;
  CHECK(cfg.network.size == 120);
  CHECK(cfg.network.p_loss == 0.0);
  CHECK(cfg.protocol.theta_act == 5e-4);
  CHECK(cfg.protocol.s_a == 1.0);
  CHECK(cfg.protocol.p_a == 1e-3);
  CHECK(cfg.protocol.g == 0.1);
  CHECK(cfg.protocol.p_min == 0.07);
  CHECK(cfg.protocol.p_max == 0.14);
  CHECK(cfg.power.levels == std::vector<double>{0.030, 0.045, 0.065, 0.092, 0.154, 0.300});
  CHECK(cfg.power.range_scale == 1.33);
  CHECK(cfg.energy.e_tx == 1e-5);
  CHECK(cfg.energy.e_rx == 1e-5);
  CHECK(cfg.energy.e_on == 1e-4);
  CHECK(cfg.energy.e_off_ratio == 0.025 / 12.8);
  CHECK(cfg.energy.e_app == 1e-3);
  CHECK(cfg.energy.initial_battery == 1.0);
  CHECK(cfg.environment.day_length_periods == 1440.0);
  CHECK(cfg.environment.cloud_cover == 0.0);
  CHECK(cfg.environment.cloud_schedule.empty());
  CHECK(cfg.environment.harvest_factor == 2.7e-3);
  CHECK(cfg.sim.seed == 2);
  CHECK(cfg.sim.periods == 43200);
  CHECK(cfg.sim.warmup_periods == 1440);
  CHECK(cfg.sim.delta_seconds == 60.0);
  CHECK(cfg.sim.phase1_seconds == 0.05);
  CHECK_FALSE(cfg.scaling.literal_power_formula);
  cfg.validate();  // defaults must be valid
}

TEST_CASE("derived parameter views are consistent with the config") {
  const RunConfig cfg;
  const ProtocolParams pp = cfg.protocol_params();
  CHECK(pp.theta_act == cfg.protocol.theta_act);
  CHECK(pp.levels == cfg.power.levels);

  const EnergyParams ep = cfg.energy_params();
  CHECK(ep.e_off == 1e-4 / 512);  // ratio 0.025/12.8 is exactly 1/512
  CHECK(ep.e_off == EnergyParams{}.e_off);

  CHECK(cfg.phase1_fraction() == 0.05 / 60.0);

  const Environment env = cfg.make_environment();
  CHECK(env.day_length == 1440.0);
  CHECK(env.cloud.base == 0.0);
}

TEST_CASE("JSON configs accept comments and partial sections") {
  const std::string text = R"({
    // deployment under test
    "network": { "size": 40, "p_loss": 0.1 },
    "sim": { "periods": 2000 }  // short run
  })";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.network.size == 40);
  CHECK(cfg.network.p_loss == 0.1);
  CHECK(cfg.sim.periods == 2000);
  CHECK(cfg.sim.seed == 2);            // untouched default
  CHECK(cfg.protocol.g == 0.1);        // untouched section
}

TEST_CASE("cloud schedules parse from [start, value] pairs") {
  const RunConfig cfg = parse_config(
      R"({"environment": {"cloud_schedule": [[100, 0.4], [2000, 0.0]]}})");
  REQUIRE(cfg.environment.cloud_schedule.size() == 2);
  CHECK(cfg.environment.cloud_schedule[0].first == 100.0);
  CHECK(cfg.environment.cloud_schedule[0].second == 0.4);
  CHECK(cfg.environment.cloud_schedule[1].first == 2000.0);

  CHECK_THROWS_WITH_AS(parse_config(R"({"environment": {"cloud_schedule": [[1, 2, 3]]}})"),
                       "environment.cloud_schedule: entries must be [start, value] number pairs",
                       ConfigError);
}

TEST_CASE("unknown sections, unknown keys, and wrong types carry their path") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"webwork": {}})"), "webwork: unknown section",
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"network": {"sixe": 10}})"),
                       "network.sixe: unknown field", ConfigError);
  try {
    parse_config(R"({"network": {"size": "big"}})");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "network.size");
    CHECK(std::string(e.what()).find("wrong type") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
}

TEST_CASE("validation failures name the offending field") {
  RunConfig cfg;
  cfg.network.size = 0;
  try {
    cfg.validate();
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "network.size");
  }

  const auto expect_path = [](RunConfig bad, const std::string& path) {
    try {
      bad.validate();
      FAIL_CHECK("expected a ConfigError for " << path);
    } catch (const ConfigError& e) {
      CHECK(e.path() == path);
    }
  };

  RunConfig bad;
  bad.protocol.p_max = 0.01;  // below p_min
  expect_path(bad, "protocol.p_max");

  bad = RunConfig{};
  bad.power.levels = {0.1, 0.1};
  expect_path(bad, "power.levels");

  bad = RunConfig{};
  bad.energy.initial_battery = 1.5;
  expect_path(bad, "energy.initial_battery");

  bad = RunConfig{};
  bad.environment.cloud_schedule = {{50.0, 0.2}, {40.0, 0.1}};  // not ascending
  expect_path(bad, "environment.cloud_schedule");

  bad = RunConfig{};
  bad.sim.phase1_seconds = 60.0;  // must stay below delta_seconds
  expect_path(bad, "sim.phase1_seconds");

  bad = RunConfig{};
  bad.network.p_loss = 1.2;
  expect_path(bad, "network.p_loss");
}

TEST_CASE("serialize/parse round-trips preserve every field bit-exactly") {
  const RunConfig defaults;
  CHECK(parse_config(serialize_config(defaults)) == defaults);

  rng::Stream gen(31337);
  for (int trial = 0; trial < 20; ++trial) {
    RunConfig cfg;
    cfg.network.size = 1 + static_cast<int>(gen.next_unit() * 400);
    cfg.network.p_loss = gen.next_unit();
    cfg.protocol.theta_act = gen.next_unit() * 1e-3;
    cfg.protocol.p_a = gen.next_unit() * 0.01;
    cfg.protocol.g = 0.01 + gen.next_unit();
    cfg.protocol.p_min = gen.next_unit() * 0.1;
    cfg.protocol.p_max = cfg.protocol.p_min + gen.next_unit() * 0.2;
    cfg.power.range_scale = 0.5 + gen.next_unit();
    cfg.energy.e_tx = gen.next_unit() * 1e-4;
    cfg.energy.e_app = gen.next_unit() * 1e-2;
    cfg.energy.initial_battery = gen.next_unit();
    cfg.environment.cloud_cover = gen.next_unit();
    cfg.environment.harvest_factor = gen.next_unit() * 1e-2;
    cfg.environment.cloud_schedule = {{gen.next_unit() * 100.0, gen.next_unit()},
                                      {100.0 + gen.next_unit() * 100.0, gen.next_unit()}};
    cfg.sim.seed = gen.next_u64() >> 1;
    cfg.sim.periods = 1 + static_cast<std::int64_t>(gen.next_unit() * 1e6);
    cfg.sim.delta_seconds = 1.0 + gen.next_unit() * 100.0;
    cfg.sim.phase1_seconds = gen.next_unit() * cfg.sim.delta_seconds * 0.5;
    cfg.scaling.literal_power_formula = gen.next_unit() < 0.5;
    CHECK(parse_config(serialize_config(cfg)) == cfg);
  }
}

TEST_CASE("overrides rewrite scalars, arrays, and nested schedules") {
  RunConfig cfg;
  apply_override(cfg, "network.p_loss=0.25");
  CHECK(cfg.network.p_loss == 0.25);

  apply_override(cfg, "sim.seed=42");
  CHECK(cfg.sim.seed == 42);

  apply_override(cfg, "power.levels=[0.1, 0.2, 0.4]");
  CHECK(cfg.power.levels == std::vector<double>{0.1, 0.2, 0.4});

  apply_override(cfg, "environment.cloud_schedule=[[500, 0.9]]");
  REQUIRE(cfg.environment.cloud_schedule.size() == 1);
  CHECK(cfg.environment.cloud_schedule[0].first == 500.0);
  CHECK(cfg.environment.cloud_schedule[0].second == 0.9);

  apply_override(cfg, "scaling.literal_power_formula=true");
  CHECK(cfg.scaling.literal_power_formula);

  CHECK_THROWS_WITH_AS(apply_override(cfg, "network.speed=1"),
                       "network.speed: unknown config field", ConfigError);
  CHECK_THROWS_WITH_AS(apply_override(cfg, "warp.size=1"), "warp: unknown config field",
                       ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "network.size"), ConfigError);     // no '='
  CHECK_THROWS_AS(apply_override(cfg, "network.size=fast"), ConfigError);  // wrong type
}

TEST_CASE("reals are printed with nine significant digits") {
  CHECK(format_real(0.5583333333333333) == "0.558333333");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(1e-5) == "1e-05");
  CHECK(format_real(0.3) == "0.3");
  CHECK(format_real(123456.789) == "123456.789");
  CHECK(format_real(9.87654321e-7) == "9.87654321e-07");
  CHECK(format_real(0.0) == "0");
  CHECK(format_real(0.07) == "0.07");
  CHECK(format_real(2861.5124891) == "2861.51249");
}

TEST_CASE("trace CSV layout is pinned") {
  CHECK(trace_to_csv({}) == std::string(kTraceHeader) + "\n");

  TraceRecord r;
  r.period = 7;
  r.mean_activity = 0.5583333333333333;
  r.mean_battery = 0.912345678901;
  r.sun = 1.0;
  r.cloud = 0.3;
  r.cumulative = Buckets{0.001, 0.002, 0.0, 0.004, 1.23456789e-4};
  const std::string text = trace_to_csv({r});
  CHECK(text ==
        std::string(kTraceHeader) +
            "\n7,0.558333333,0.912345679,1,0.3,0.001,0.002,0,0.004,0.000123456789\n");
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("trace CSV files are atomic, byte-stable, and re-readable") {
  const fs::path dir = fresh_dir("sdcsim_trace_csv_test");
  const fs::path path = dir / "trace.csv";

  std::vector<TraceRecord> records(50);
  rng::Stream gen(8);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].period = static_cast<std::int64_t>(i);
    records[i].mean_activity = gen.next_unit();
    records[i].mean_battery = gen.next_unit();
    records[i].sun = gen.next_unit();
    records[i].cloud = gen.next_unit();
    records[i].cumulative =
        Buckets{gen.next_unit(), gen.next_unit(), gen.next_unit(), gen.next_unit(),
                gen.next_unit() * 1e-7};
  }

  write_trace_csv(records, path);
  const std::string first = slurp(path);
  write_trace_csv(records, path);
  CHECK(slurp(path) == first);
  CHECK_FALSE(has_temp_files(dir));

  const std::vector<TraceRecord> back = read_trace_csv(path);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].period == records[i].period);
    // Nine significant digits guarantee 5e-9 relative round-trip accuracy.
    CHECK(back[i].mean_activity ==
          doctest::Approx(records[i].mean_activity).epsilon(5e-9));
    CHECK(back[i].mean_battery == doctest::Approx(records[i].mean_battery).epsilon(5e-9));
    CHECK(back[i].cumulative.app == doctest::Approx(records[i].cumulative.app).epsilon(5e-9));
  }

  fs::remove_all(dir);
}

TEST_CASE("trace CSV reader rejects corrupted files") {
  const fs::path dir = fresh_dir("sdcsim_trace_bad_test");
  const fs::path bad_header = dir / "bad_header.csv";
  std::ofstream(bad_header) << "period,activity\n1,2\n";
  CHECK_THROWS_AS(read_trace_csv(bad_header), std::runtime_error);

  const fs::path bad_row = dir / "bad_row.csv";
  std::ofstream(bad_row) << std::string(kTraceHeader) + "\n1,0.5\n";
  CHECK_THROWS_AS(read_trace_csv(bad_row), std::runtime_error);

  CHECK_THROWS_AS(read_trace_csv(dir / "missing.csv"), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("sweep CSV rows carry seeds, averages, and escaped errors") {
  SweepRow seed_row;
  seed_row.value = 0.3;
  seed_row.seed = 2;
  seed_row.mean_system_activity = 0.5;
  seed_row.final_mean_battery = 0.75;
  seed_row.breakdown = {1.0, 2.0, 3.0, 4.0, 90.0};

  SweepRow avg_row = seed_row;
  avg_row.averaged = true;

  SweepRow failed;
  failed.value = 0.4;
  failed.seed = 1;
  failed.ok = false;
  failed.error = "bad, \"thing\"";

  const std::string text = sweep_to_csv({seed_row, avg_row, failed});
  const std::string expected = std::string(kSweepHeader) + "\n" +
                               "0.3,2,0.5,0.75,1,2,3,4,90,\n" +
                               "0.3,avg,0.5,0.75,1,2,3,4,90,\n" +
                               "0.4,1,,,,,,,,\"bad, \"\"thing\"\"\"\n";
  CHECK(text == expected);
}

TEST_CASE("atomic text writes create parent directories and leave no debris") {
  const fs::path dir = fresh_dir("sdcsim_atomic_test");
  const fs::path nested = dir / "a" / "b" / "out.txt";
  atomic_write_text(nested, "hello\n");
  CHECK(slurp(nested) == "hello\n");
  CHECK_FALSE(has_temp_files(nested.parent_path()));

  atomic_write_text(nested, "replaced\n");
  CHECK(slurp(nested) == "replaced\n");
  fs::remove_all(dir);
}
