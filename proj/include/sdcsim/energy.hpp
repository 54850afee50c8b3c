#pragma once
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

// Battery accounting, per-period consumption buckets, and the harvesting
// environment (sun intensity attenuated by cloud cover, integrated per
// period). All quantities are in normalized battery units: a full battery
// is 1.0.

namespace sdc {

struct EnergyParams {
  double e_tx = 1e-5;         // per transmitted message
  double e_rx = 1e-5;         // per received message
  double e_on = 1e-4;         // radio-on cost for a full period
  double e_off = 1e-4 / 512;  // radio-off (sleep) cost for a full period
  double e_app = 1e-3;        // application cost per active period
};

struct Buckets {
  double tx = 0.0, rx = 0.0, idle = 0.0, active = 0.0, app = 0.0;

  double total() const { return tx + rx + idle + active + app; }
  bool operator==(const Buckets&) const = default;
  Buckets& operator+=(const Buckets& o) {
    tx += o.tx;
    rx += o.rx;
    idle += o.idle;
    active += o.active;
    app += o.app;
    return *this;
  }
};

struct Battery {
  double level = 1.0;
};

// Run-wide totals: nominal harvest offered, overflow lost to the full-battery
// clamp, and demand that could not be met by an empty battery.
struct EnergyLedger {
  double harvested = 0.0;
  double wasted = 0.0;
  double deficit = 0.0;
};

// Removes up to `amount`, clamping at empty; the shortfall is recorded as
// deficit. Returns the amount actually removed.
double debit(Battery& battery, double amount, EnergyLedger& ledger);

// Adds `amount`, clamping at full; the overflow is recorded as wasted.
void credit(Battery& battery, double amount, EnergyLedger& ledger);

struct PeriodCost {
  double total = 0.0;
  Buckets buckets;
};

// Nominal (un-clamped) cost of one period for one node:
//   Tx     = e_tx * sent
//   Rx     = e_rx * received + e_on * phase1_fraction   (everyone listens
//            through the duty-cycling window)
//   Active = e_on  * (1 - phase1_fraction)  if active   (radio on all period)
//   Idle   = e_off * (1 - phase1_fraction)  if inactive (asleep after phase 1)
//   App    = e_app                          if active
// Buckets sum to total exactly.
PeriodCost period_consumption(int active, double phase1_fraction, std::int64_t sent,
                              std::int64_t received, const EnergyParams& params);

// Piecewise-constant cloud cover: entries are (start time, value) with
// ascending starts; before the first entry the base value applies.
struct CloudSchedule {
  double base = 0.0;
  std::vector<std::pair<double, double>> entries;

  double at(double z) const;
  // If cover is a single constant over [a, b], reports it (enables the exact
  // factorization harvest = (1 - c) * harvest_at_zero_cloud).
  bool constant_over(double a, double b, double& value) const;
};

// Daily half-sinusoid: max(0, sin(2*pi * (z mod day_length) / day_length)).
double sun_intensity(double z, double day_length);

struct Environment {
  double day_length = 1440.0;  // periods per day
  CloudSchedule cloud;
  // Test hook: replaces the default half-sinusoid when set.
  std::function<double(double)> sun_override;

  double sun(double z) const {
    return sun_override ? sun_override(z) : sun_intensity(z, day_length);
  }
};

// Energy gained over (t - delta, t]: f * integral of s(z) * (1 - c(z)),
// composite trapezoid with at least 8 subintervals per period of length 1.
// For cloud cover constant over the interval the result factors exactly as
// f * (1 - c) * integral(s).
double harvest(double t, double delta, const Environment& env, double f);

}  // namespace sdc
