// Cross-validation against an independent flat-loop reference simulator.
// Every trace record must match bit for bit, across seeds and across
// configurations that exercise losses, clouds, and battery exhaustion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>

#include "doctest.h"
#include "reference_sim.hpp"
#include "sdcsim/config.hpp"
#include "sdcsim/netsim.hpp"

using namespace sdc;

namespace {

void check_parity(const RunConfig& cfg) {
  Engine engine(cfg);
  const RunResult got = engine.run();
  const refsim::RefResult want = refsim::reference_run(cfg);

  REQUIRE(got.trace.size() == want.trace.size());
  std::size_t mismatches = 0;
  for (std::size_t n = 0; n < want.trace.size(); ++n) {
    if (!(got.trace[n] == want.trace[n])) {
      ++mismatches;
      if (mismatches <= 3) {
        FAIL_CHECK("trace mismatch at period " << n << ": engine activity "
                   << got.trace[n].mean_activity << " battery " << got.trace[n].mean_battery
                   << " vs reference " << want.trace[n].mean_activity << " "
                   << want.trace[n].mean_battery);
      }
    }
  }
  CHECK(mismatches == 0);

  double ref_sum = 0.0;
  for (double b : want.battery) ref_sum += b;
  CHECK(got.final_mean_battery == ref_sum / cfg.network.size);
  CHECK(got.buckets == want.buckets);
}

}  // namespace

TEST_CASE("default physics: bit-identical traces across ten seeds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    RunConfig cfg;
    cfg.network.size = 10;
    cfg.sim.periods = 100;
    cfg.sim.warmup_periods = 0;
    cfg.sim.seed = seed;
    check_parity(cfg);
  }
}

TEST_CASE("battery exhaustion and dormancy: bit-identical traces across ten seeds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    RunConfig cfg;
    cfg.network.size = 8;
    cfg.sim.periods = 100;
    cfg.sim.warmup_periods = 0;
    cfg.sim.seed = seed;
    cfg.energy.initial_battery = 0.03;
    cfg.energy.e_app = 5e-3;
    cfg.environment.harvest_factor = 5e-3;
    check_parity(cfg);
  }
}

TEST_CASE("lossy links under constant cloud: bit-identical traces") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    RunConfig cfg;
    cfg.network.size = 12;
    cfg.sim.periods = 120;
    cfg.sim.warmup_periods = 0;
    cfg.sim.seed = seed;
    cfg.network.p_loss = 0.25;
    cfg.environment.cloud_cover = 0.4;
    check_parity(cfg);
  }
}

TEST_CASE("stepped cloud schedule: bit-identical traces") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    RunConfig cfg;
    cfg.network.size = 10;
    cfg.sim.periods = 150;
    cfg.sim.warmup_periods = 0;
    cfg.sim.seed = seed;
    cfg.environment.cloud_cover = 0.1;
    cfg.environment.cloud_schedule = {{40.0, 0.6}, {90.0, 0.2}};
    check_parity(cfg);
  }
}

TEST_CASE("spontaneous wake-ups matter: bit-identical with a high flicker rate") {
  RunConfig cfg;
  cfg.network.size = 6;
  cfg.sim.periods = 200;
  cfg.sim.warmup_periods = 0;
  cfg.sim.seed = 3;
  cfg.protocol.p_a = 0.2;     // frequent spontaneous activations
  cfg.protocol.g = 0.02;      // weak coupling so nodes keep deactivating
  check_parity(cfg);
}
