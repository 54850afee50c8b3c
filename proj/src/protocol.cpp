#include "sdcsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdc {

int compute_activity(double s, double theta_act) noexcept {
  return s - theta_act >= 0.0 ? 1 : 0;
}

ActivationState spontaneous_activation(ActivationState state, const ProtocolParams& params,
                                       double u) noexcept {
  if (u <= params.p_a) {
    state.s = params.s_a;
    state.active = 1;
  }
  return state;
}

double update_state(double s, Inbox& inbox, double g) {
  double sum = 0.0;
  for (const DutyCyclingMessage& m : inbox.messages) sum += m.activity;
  inbox.messages.clear();
  return std::tanh(g * (s + sum));
}

double ideal_power(double b, double p_min, double p_max) {
  if (!(b >= 0.0 && b <= 1.0))
    throw std::invalid_argument("ideal_power: battery level must be in [0, 1]");
  return p_min * (1.0 - b) + p_max * b;
}

std::size_t snap_power_index(double p, const std::vector<double>& levels) {
  if (levels.empty()) throw std::invalid_argument("snap_power: empty level table");
  std::size_t idx = 0;
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    if (p > 0.5 * (levels[l] + levels[l + 1])) idx = l + 1;
  }
  return idx;
}

double snap_power(double p, const std::vector<double>& levels) {
  return levels[snap_power_index(p, levels)];
}

int CallbackRegistry::add(Callback cb) {
  const int handle = next_handle_++;
  entries_.emplace_back(handle, std::move(cb));
  return handle;
}

void CallbackRegistry::remove(int handle) {
  entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                [handle](const auto& e) { return e.first == handle; }),
                 entries_.end());
}

void CallbackRegistry::notify(std::int32_t node, std::int64_t period, int new_activity) const {
  for (const auto& [handle, cb] : entries_) cb(node, period, new_activity);
}

EventResult duty_cycling_event(ActivationState& state, Inbox& inbox, double battery,
                               const ProtocolParams& params, rng::Stream& stream,
                               const CallbackRegistry* callbacks, std::int32_t node,
                               std::int64_t period) {
  int a = compute_activity(state.s, params.theta_act);
  if (a == 0) {
    const double u = stream.next_unit();
    if (u <= params.p_a) {
      state.s = params.s_a;
      a = 1;
    }
  }
  const double p = ideal_power(battery, params.p_min, params.p_max);
  const std::size_t level = snap_power_index(p, params.levels);
  state.s = update_state(state.s, inbox, params.g);

  EventResult result;
  result.activity_changed = (a != static_cast<int>(state.active));
  state.active = static_cast<std::uint8_t>(a);
  result.message = DutyCyclingMessage{state.s, node};
  result.level_index = level;
  result.power = params.levels[level];
  if (result.activity_changed && callbacks != nullptr) callbacks->notify(node, period, a);
  return result;
}

}  // namespace sdc
