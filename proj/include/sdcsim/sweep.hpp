#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "sdcsim/config.hpp"
#include "sdcsim/csv.hpp"

// Parameter sweeps over packet loss, cloud cover, or network size, with the
// size-compensation rules applied automatically for size sweeps.

namespace sdc {

// Keeps the expected per-node contact area constant: the power bound scales
// with the square root of the density ratio.
double scale_power(double t, double k, double k_new);

// An alternative algebraic form of the same rule. It fails the k_new == k
// identity; kept selectable for comparison only.
double scale_power_literal(double t, double k, double k_new);

// Keeps the expected number of spontaneous wake-ups per period constant
// (k * p_a invariant), clamped to [0, 1].
double scale_pa(double p, double k, double k_new);

enum class SweepVar { Loss, Cloud, Size };

struct SweepSpec {
  SweepVar var = SweepVar::Loss;
  std::vector<double> values;
  int seeds = 3;  // runs use root seeds 1..seeds
  RunConfig base;
  int jobs = 1;
};

// Minimum size for size sweeps; below this the deployment is mostly
// disconnected and only spontaneous wake-ups drive activity.
inline constexpr int kMinSweepSize = 10;

// The per-run config for one grid value (exposed for tests): sets the swept
// field and, for size sweeps, rescales p_min/p_max/p_a relative to the base
// size. Throws for invalid values (e.g. fractional or too-small sizes).
RunConfig sweep_point_config(const SweepSpec& spec, double value, std::uint64_t seed);

// One row per (value, seed) in grid order, then a seed-averaged row per
// value. Individual run failures are recorded in the row's error field and
// the sweep continues. Results are deterministic and independent of `jobs`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

}  // namespace sdc
