#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sdcsim/config.hpp"
#include "sdcsim/energy.hpp"
#include "sdcsim/protocol.hpp"
#include "sdcsim/topology.hpp"

// Discrete-event network engine. Each period: sample per-node event offsets
// inside the duty-cycling window, process the events in timestamp order
// (ties to the lower node id), deliver each broadcast instantly to in-range
// awake receivers with Bernoulli loss, charge phase-2 energy, credit the
// period's harvest, and record one trace sample taken at the period start.

namespace sdc {

// Network observables sampled at the start of a period, before any of that
// period's events: activity and battery as the previous period left them,
// sun/cloud evaluated at the period-start time, energy buckets cumulative
// since the start of the run.
struct TraceRecord {
  std::int64_t period = 0;
  double mean_activity = 0.0;
  double mean_battery = 0.0;
  double sun = 0.0;
  double cloud = 0.0;
  Buckets cumulative;

  bool operator==(const TraceRecord&) const = default;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  Buckets buckets;  // totals over the whole run
  EnergyLedger ledger;
  double initial_total_battery = 0.0;
  double final_total_battery = 0.0;
  double final_mean_battery = 0.0;
};

// Read-only view of engine state handed to the period observer after a
// period completes (events, phase-2 charges, and harvest all applied).
// Inboxes show messages carried over into the next period.
struct PeriodView {
  std::int64_t period = 0;
  std::span<const double> s;
  std::span<const double> battery;
  std::span<const std::uint8_t> active;
  std::span<const std::uint8_t> dormant;
  std::span<const double> offsets;
  const std::vector<Inbox>* inboxes = nullptr;
  std::int64_t messages_sent = 0;       // this period
  std::int64_t messages_delivered = 0;  // this period
  const Buckets* cumulative = nullptr;
};

class Engine {
 public:
  using PeriodObserver = std::function<void(const PeriodView&)>;
  using OffsetOverride = std::function<double(std::int32_t node, std::int64_t period)>;

  // Builds the deployment from the configured seed.
  explicit Engine(const RunConfig& cfg);
  // Runs on a caller-provided deployment (tests, custom site surveys).
  Engine(const RunConfig& cfg, Topology topology);

  // Simulates cfg.sim.periods periods from a fresh initial state. Repeated
  // calls reproduce identical results.
  RunResult run();

  int register_activity_callback(CallbackRegistry::Callback cb) {
    return callbacks_.add(std::move(cb));
  }
  void unregister_activity_callback(int handle) { callbacks_.remove(handle); }

  void set_period_observer(PeriodObserver obs) { observer_ = std::move(obs); }
  // Test hook: replaces drawn event offsets (the draw still happens, keeping
  // stream alignment).
  void set_offset_override(OffsetOverride ov) { offset_override_ = std::move(ov); }

  const Topology& topology() const { return topo_; }
  const RunConfig& config() const { return cfg_; }

 private:
  RunConfig cfg_;
  Topology topo_;
  NeighborTables tables_;
  CallbackRegistry callbacks_;
  PeriodObserver observer_;
  OffsetOverride offset_override_;
};

}  // namespace sdc
