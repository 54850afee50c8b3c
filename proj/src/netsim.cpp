#include "sdcsim/netsim.hpp"

#include <algorithm>
#include <cmath>

namespace sdc {
namespace {

std::vector<double> level_radii(const RunConfig& cfg) {
  std::vector<double> radii;
  radii.reserve(cfg.power.levels.size());
  for (double level : cfg.power.levels) radii.push_back(cfg.power.range_scale * level);
  return radii;
}

}  // namespace

Engine::Engine(const RunConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  topo_ = build_topology(cfg_.network.size, cfg_.sim.seed);
  tables_ = NeighborTables(topo_, level_radii(cfg_));
}

Engine::Engine(const RunConfig& cfg, Topology topology) : cfg_(cfg), topo_(std::move(topology)) {
  cfg_.validate();
  if (topo_.size() != cfg_.network.size)
    throw ConfigError("network.size", "does not match the provided topology");
  tables_ = NeighborTables(topo_, level_radii(cfg_));
}

RunResult Engine::run() {
  const int k = cfg_.network.size;
  const std::int64_t total_periods = cfg_.sim.periods;
  const std::uint64_t root = cfg_.sim.seed;
  const ProtocolParams pp = cfg_.protocol_params();
  const EnergyParams ep = cfg_.energy_params();
  const Environment env = cfg_.make_environment();
  const double f = cfg_.environment.harvest_factor;
  const double phi = cfg_.phase1_fraction();
  const double phase1 = cfg_.sim.phase1_seconds;
  const double p_loss = cfg_.network.p_loss;
  const double deliver_threshold = 1.0 - p_loss;
  const double resume_threshold = ep.e_tx + ep.e_on * phi;

  // Harvest is global (every node sees the same sky), precomputed per period.
  std::vector<double> harvest_per_period(total_periods);
  for (std::int64_t n = 0; n < total_periods; ++n)
    harvest_per_period[n] = harvest(static_cast<double>(n + 1), 1.0, env, f);

  std::vector<ActivationState> node(k);
  std::vector<Battery> battery(k);
  std::vector<Inbox> inbox(k);
  std::vector<std::uint8_t> dormant(k, 0);
  for (int i = 0; i < k; ++i) {
    node[i] = ActivationState{pp.theta_act, 1};  // everyone starts active
    battery[i] = Battery{cfg_.energy.initial_battery};
  }

  RunResult result;
  result.trace.reserve(total_periods);
  result.initial_total_battery = cfg_.energy.initial_battery * k;
  Buckets& buckets = result.buckets;
  EnergyLedger& ledger = result.ledger;

  std::vector<double> offsets(k);
  std::vector<rng::Stream> streams(k, rng::Stream(0));
  std::vector<std::int32_t> order(k);
  std::vector<double> s_view(k), battery_view(k);
  std::vector<std::uint8_t> active_view(k);

  for (std::int64_t n = 0; n < total_periods; ++n) {
    // Trace sample at period start: state as the previous period left it.
    {
      TraceRecord rec;
      rec.period = n;
      int active_count = 0;
      double battery_sum = 0.0;
      for (int i = 0; i < k; ++i) {
        active_count += node[i].active;
        battery_sum += battery[i].level;
      }
      rec.mean_activity = static_cast<double>(active_count) / k;
      rec.mean_battery = battery_sum / k;
      const double z = static_cast<double>(n);
      rec.sun = env.sun(z);
      rec.cloud = env.cloud.at(z);
      rec.cumulative = buckets;
      result.trace.push_back(rec);
    }

    // Dormancy transitions and event offsets. A node with nothing left
    // sleeps through the period (skips its event, receives nothing, spends
    // nothing, state frozen) and wakes once harvesting has paid for the
    // cheapest possible period entry (one send plus phase-1 listening).
    std::int64_t sent = 0, delivered = 0;
    for (int i = 0; i < k; ++i) {
      if (dormant[i] && battery[i].level > resume_threshold) dormant[i] = 0;
      if (!dormant[i] && battery[i].level <= 0.0) {
        dormant[i] = 1;
        if (node[i].active != 0) {
          node[i].active = 0;
          callbacks_.notify(i, n, 0);
        }
      }
      rng::Stream st = rng::node_period_stream(root, static_cast<std::uint64_t>(i),
                                               static_cast<std::uint64_t>(n));
      double offset = st.next_unit() * phase1;
      if (offset_override_) offset = offset_override_(i, n);
      offsets[i] = offset;
      streams[i] = st;
      order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
      if (offsets[a] != offsets[b]) return offsets[a] < offsets[b];
      return a < b;
    });

    // Phase 1: duty-cycling events in timestamp order; each broadcast is
    // delivered instantly, so receivers whose own event is still pending
    // consume it this period and earlier ones next period.
    for (std::int32_t i : order) {
      if (dormant[i]) continue;
      const EventResult ev =
          duty_cycling_event(node[i], inbox[i], battery[i].level, pp, streams[i], &callbacks_, i, n);
      buckets.tx += debit(battery[i], ep.e_tx, ledger);
      ++sent;
      for (std::int32_t j : tables_.neighbors(ev.level_index, i)) {
        if (dormant[j]) continue;
        if (streams[i].next_unit() < deliver_threshold) {
          inbox[j].messages.push_back(ev.message);
          buckets.rx += debit(battery[j], ep.e_rx, ledger);
          ++delivered;
        }
      }
    }

    // Phase 2: listening window already over; active nodes keep the radio on
    // and run the application, inactive nodes sleep.
    for (int i = 0; i < k; ++i) {
      if (dormant[i]) continue;
      buckets.rx += debit(battery[i], ep.e_on * phi, ledger);
      if (node[i].active != 0) {
        buckets.active += debit(battery[i], ep.e_on * (1.0 - phi), ledger);
        buckets.app += debit(battery[i], ep.e_app, ledger);
      } else {
        buckets.idle += debit(battery[i], ep.e_off * (1.0 - phi), ledger);
      }
    }

    // Harvest reaches every node, including sleeping ones.
    const double h = harvest_per_period[n];
    for (int i = 0; i < k; ++i) credit(battery[i], h, ledger);

    if (observer_) {
      for (int i = 0; i < k; ++i) {
        s_view[i] = node[i].s;
        battery_view[i] = battery[i].level;
        active_view[i] = node[i].active;
      }
      PeriodView view;
      view.period = n;
      view.s = s_view;
      view.battery = battery_view;
      view.active = active_view;
      view.dormant = dormant;
      view.offsets = offsets;
      view.inboxes = &inbox;
      view.messages_sent = sent;
      view.messages_delivered = delivered;
      view.cumulative = &buckets;
      observer_(view);
    }
  }

  double battery_sum = 0.0;
  for (int i = 0; i < k; ++i) battery_sum += battery[i].level;
  result.final_total_battery = battery_sum;
  result.final_mean_battery = battery_sum / k;
  return result;
}

}  // namespace sdc
