#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "sdcsim/rng.hpp"

// Per-node duty-cycling state machine: activity decision, spontaneous
// activation, activation-state update from received messages, and
// transmission-power selection.

namespace sdc {

struct DutyCyclingMessage {
  double activity = 0.0;  // sender's post-update activation value
  std::int32_t sender = -1;
};

// Ordered queue of messages received since the owner's last duty-cycling
// event; emptied exactly once per period, at that event.
struct Inbox {
  std::vector<DutyCyclingMessage> messages;
};

struct ActivationState {
  double s = 0.0;
  std::uint8_t active = 0;
};

struct ProtocolParams {
  double theta_act = 5e-4;  // activation threshold
  double s_a = 1.0;         // activation level injected by spontaneous wake-up
  double p_a = 1e-3;        // spontaneous wake-up probability per period
  double g = 0.1;           // gain of the saturating state update
  double p_min = 0.07;      // ideal-power bound at empty battery
  double p_max = 0.14;      // ideal-power bound at full battery
  // Hardware transmission power table, strictly increasing, normalized units.
  std::vector<double> levels{0.030, 0.045, 0.065, 0.092, 0.154, 0.300};
};

// 1 iff s - theta_act >= 0 (the step function counts 0 as active).
int compute_activity(double s, double theta_act) noexcept;

// Precondition: state.active == 0. With probability p_a (u <= p_a) the node
// restarts an activity wave: s := s_a, active := 1. Otherwise unchanged.
ActivationState spontaneous_activation(ActivationState state, const ProtocolParams& params,
                                       double u) noexcept;

// New activation value tanh(g * (s + sum of inbox activities)); the inbox is
// emptied. Messages are summed in arrival order.
double update_state(double s, Inbox& inbox, double g);

// Battery-proportional ideal transmission power. Rejects b outside [0, 1].
double ideal_power(double b, double p_min, double p_max);

// Index of the level whose midpoint interval contains p. Intervals are
// right-closed with -inf/+inf sentinels at the ends, so every real maps to a
// level and exact midpoint ties resolve to the lower level.
std::size_t snap_power_index(double p, const std::vector<double>& levels);
double snap_power(double p, const std::vector<double>& levels);

// Observers notified on every actual activity transition (never when the
// recomputed value equals the previous one).
class CallbackRegistry {
 public:
  using Callback = std::function<void(std::int32_t node, std::int64_t period, int new_activity)>;

  int add(Callback cb);
  void remove(int handle);
  void notify(std::int32_t node, std::int64_t period, int new_activity) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<int, Callback>> entries_;
  int next_handle_ = 1;
};

struct EventResult {
  DutyCyclingMessage message;  // broadcast after the update
  double power = 0.0;          // chosen level value
  std::size_t level_index = 0;
  bool activity_changed = false;
};

// The once-per-period event of one node, executed in this order: activity
// decision; spontaneous activation if inactive (consumes one draw); power
// selection from the battery level at event time; state update consuming the
// inbox. The returned message carries the new activation value at the chosen
// power. Fires callbacks only on an actual activity transition.
EventResult duty_cycling_event(ActivationState& state, Inbox& inbox, double battery,
                               const ProtocolParams& params, rng::Stream& stream,
                               const CallbackRegistry* callbacks = nullptr,
                               std::int32_t node = 0, std::int64_t period = 0);

}  // namespace sdc
