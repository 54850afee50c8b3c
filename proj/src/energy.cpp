#include "sdcsim/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace sdc {

double debit(Battery& battery, double amount, EnergyLedger& ledger) {
  if (amount < 0.0) throw std::invalid_argument("debit: negative amount");
  const double actual = battery.level >= amount ? amount : battery.level;
  ledger.deficit += amount - actual;
  battery.level -= actual;
  return actual;
}

void credit(Battery& battery, double amount, EnergyLedger& ledger) {
  if (amount < 0.0) throw std::invalid_argument("credit: negative amount");
  ledger.harvested += amount;
  const double raised = battery.level + amount;
  if (raised > 1.0) {
    ledger.wasted += raised - 1.0;
    battery.level = 1.0;
  } else {
    battery.level = raised;
  }
}

PeriodCost period_consumption(int active, double phase1_fraction, std::int64_t sent,
                              std::int64_t received, const EnergyParams& params) {
  if (sent < 0 || received < 0)
    throw std::invalid_argument("period_consumption: negative message count");
  if (!(phase1_fraction >= 0.0 && phase1_fraction <= 1.0))
    throw std::invalid_argument("period_consumption: phase1_fraction must be in [0, 1]");
  PeriodCost cost;
  cost.buckets.tx = params.e_tx * static_cast<double>(sent);
  cost.buckets.rx = params.e_rx * static_cast<double>(received) + params.e_on * phase1_fraction;
  if (active != 0) {
    cost.buckets.active = params.e_on * (1.0 - phase1_fraction);
    cost.buckets.app = params.e_app;
  } else {
    cost.buckets.idle = params.e_off * (1.0 - phase1_fraction);
  }
  cost.total = cost.buckets.total();
  return cost;
}

double CloudSchedule::at(double z) const {
  double value = base;
  for (const auto& [start, v] : entries) {
    if (start <= z)
      value = v;
    else
      break;
  }
  return value;
}

bool CloudSchedule::constant_over(double a, double b, double& value) const {
  value = at(a);
  for (const auto& [start, v] : entries) {
    if (start > a && start <= b && v != value) return false;
  }
  return true;
}

double sun_intensity(double z, double day_length) {
  const double phase = std::fmod(z, day_length);
  return std::max(0.0, std::sin(2.0 * M_PI * phase / day_length));
}

double harvest(double t, double delta, const Environment& env, double f) {
  if (!(delta > 0.0)) throw std::invalid_argument("harvest: delta must be positive");
  const int per_period = 8;
  const int n = per_period * std::max(1, static_cast<int>(std::ceil(delta)));
  const double a = t - delta;
  const double h = delta / n;

  double constant_cloud = 0.0;
  if (env.cloud.constant_over(a, t, constant_cloud)) {
    // Factor the constant attenuation out of the integral so that
    // harvest(c) == (1 - c) * harvest(0) holds exactly.
    double integral = 0.0;
    double prev_z = a;
    double prev_s = env.sun(a);
    for (int i = 1; i <= n; ++i) {
      const double z = a + i * h;
      const double s = env.sun(z);
      integral += (z - prev_z) * (prev_s + s) * 0.5;
      prev_z = z;
      prev_s = s;
    }
    return (1.0 - constant_cloud) * (f * integral);
  }

  double integral = 0.0;
  double prev_z = a;
  double prev_v = env.sun(a) * (1.0 - env.cloud.at(a));
  for (int i = 1; i <= n; ++i) {
    const double z = a + i * h;
    const double v = env.sun(z) * (1.0 - env.cloud.at(z));
    integral += (z - prev_z) * (prev_v + v) * 0.5;
    prev_z = z;
    prev_v = v;
  }
  return f * integral;
}

}  // namespace sdc
