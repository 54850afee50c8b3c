#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "sdcsim/energy.hpp"
#include "sdcsim/netsim.hpp"

// Run statistics: activity means, oscillation detection on the smoothed
// activity series, correlation/regression helpers, energy breakdown.

namespace sdc {

// Mean of a set of per-node activity values. Rejects empty input.
double mean_activity(std::span<const double> activities);

// Mean of the per-period mean-activity column after discarding the first
// `warmup` records. Rejects traces with no post-warmup records.
double mean_system_activity(const std::vector<TraceRecord>& trace, std::int64_t warmup);

struct OscillationStats {
  double peaks_per_day = 0.0;
  double mean_peak = 0.0;    // mean smoothed height at peaks
  double mean_trough = 0.0;  // mean of minima between consecutive peaks
  std::vector<std::int64_t> peak_indices;  // indices into `smoothed`
  std::vector<double> smoothed;

  double amplitude() const { return mean_peak - mean_trough; }
};

inline constexpr int kSmoothingWindow = 5;       // moving-average width, periods
inline constexpr double kPeakProminence = 0.2;   // minimum peak prominence

// Prominence of the value at `peak`: its height above the higher of its two
// bases, where a base is the lowest point between the peak and the nearest
// higher point (or the series end) on that side. Rejects out-of-range
// indices.
double peak_prominence(std::span<const double> x, std::int64_t peak);

// Indices of local maxima with prominence >= min_prominence. Runs of equal
// values count once, at the run center (left-biased for even runs); the
// first and last samples are never peaks.
std::vector<std::int64_t> find_peaks(std::span<const double> x, double min_prominence);

// Peak statistics of an activity series: moving-average smoothing followed by
// local-maximum detection with a prominence floor. Plateau maxima count once,
// at the plateau center. `day_length` converts the peak count to a daily rate.
OscillationStats detect_oscillation_series(std::span<const double> activity, double day_length);

// Same, applied to the post-warmup mean-activity column of a trace.
// Requires at least one full day after warmup.
OscillationStats detect_oscillation(const std::vector<TraceRecord>& trace, std::int64_t warmup,
                                    double day_length);

// Pearson correlation coefficient.
double pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

// Percentages {tx, rx, idle, active, app} of total consumption; sums to 100.
// Rejects runs that consumed nothing.
std::array<double, 5> energy_breakdown(const Buckets& buckets);

}  // namespace sdc
