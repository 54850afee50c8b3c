#include "sdcsim/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace sdc {
namespace {

// Indices of strict local maxima; runs of equal values count once, at the
// center of the run (left-biased for even runs). Borders are never peaks.
std::vector<std::int64_t> local_maxima(std::span<const double> x) {
  std::vector<std::int64_t> peaks;
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  std::int64_t i = 1;
  while (i < n - 1) {
    if (x[i - 1] < x[i]) {
      std::int64_t j = i;  // right edge of the plateau starting at i
      while (j + 1 < n && x[j + 1] == x[i]) ++j;
      if (j + 1 < n && x[j + 1] < x[i]) peaks.push_back((i + j) / 2);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return peaks;
}

}  // namespace

double peak_prominence(std::span<const double> x, std::int64_t peak) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  if (peak < 0 || peak >= n) throw std::invalid_argument("peak_prominence: index out of range");
  double left_min = x[peak];
  for (std::int64_t i = peak - 1; i >= 0 && x[i] <= x[peak]; --i)
    if (x[i] < left_min) left_min = x[i];
  double right_min = x[peak];
  for (std::int64_t i = peak + 1; i < n && x[i] <= x[peak]; ++i)
    if (x[i] < right_min) right_min = x[i];
  return x[peak] - std::max(left_min, right_min);
}

std::vector<std::int64_t> find_peaks(std::span<const double> x, double min_prominence) {
  std::vector<std::int64_t> peaks;
  for (std::int64_t p : local_maxima(x))
    if (peak_prominence(x, p) >= min_prominence) peaks.push_back(p);
  return peaks;
}

double mean_activity(std::span<const double> activities) {
  if (activities.empty()) throw std::invalid_argument("mean_activity: empty input");
  double sum = 0.0;
  for (double a : activities) sum += a;
  return sum / static_cast<double>(activities.size());
}

double mean_system_activity(const std::vector<TraceRecord>& trace, std::int64_t warmup) {
  if (warmup < 0) throw std::invalid_argument("mean_system_activity: negative warmup");
  if (static_cast<std::int64_t>(trace.size()) <= warmup)
    throw std::invalid_argument("mean_system_activity: trace has no records after warmup");
  double sum = 0.0;
  for (std::size_t i = warmup; i < trace.size(); ++i) sum += trace[i].mean_activity;
  return sum / static_cast<double>(trace.size() - warmup);
}

OscillationStats detect_oscillation_series(std::span<const double> activity, double day_length) {
  OscillationStats stats;
  const std::int64_t n = static_cast<std::int64_t>(activity.size());
  if (n < kSmoothingWindow) return stats;

  stats.smoothed.resize(n - kSmoothingWindow + 1);
  for (std::int64_t i = 0; i + kSmoothingWindow <= n; ++i) {
    double sum = 0.0;
    for (int w = 0; w < kSmoothingWindow; ++w) sum += activity[i + w];
    stats.smoothed[i] = sum / kSmoothingWindow;
  }

  stats.peak_indices = find_peaks(stats.smoothed, kPeakProminence);

  const double days = static_cast<double>(n) / day_length;
  if (stats.peak_indices.empty()) return stats;
  stats.peaks_per_day = static_cast<double>(stats.peak_indices.size()) / days;

  double height_sum = 0.0;
  for (std::int64_t p : stats.peak_indices) height_sum += stats.smoothed[p];
  stats.mean_peak = height_sum / static_cast<double>(stats.peak_indices.size());

  if (stats.peak_indices.size() > 1) {
    double trough_sum = 0.0;
    for (std::size_t i = 0; i + 1 < stats.peak_indices.size(); ++i) {
      double lowest = stats.smoothed[stats.peak_indices[i]];
      for (std::int64_t j = stats.peak_indices[i]; j < stats.peak_indices[i + 1]; ++j)
        lowest = std::min(lowest, stats.smoothed[j]);
      trough_sum += lowest;
    }
    stats.mean_trough = trough_sum / static_cast<double>(stats.peak_indices.size() - 1);
  }
  return stats;
}

OscillationStats detect_oscillation(const std::vector<TraceRecord>& trace, std::int64_t warmup,
                                    double day_length) {
  if (warmup < 0) throw std::invalid_argument("detect_oscillation: negative warmup");
  const std::int64_t n = static_cast<std::int64_t>(trace.size()) - warmup;
  if (n < static_cast<std::int64_t>(day_length))
    throw std::invalid_argument("detect_oscillation: need at least one day after warmup");
  std::vector<double> activity(n);
  for (std::int64_t i = 0; i < n; ++i) activity[i] = trace[warmup + i].mean_activity;
  return detect_oscillation_series(activity, day_length);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson: need two same-length series of size >= 2");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::Map<const Eigen::VectorXd> vx(x.data(), n), vy(y.data(), n);
  const Eigen::VectorXd cx = vx.array() - vx.mean();
  const Eigen::VectorXd cy = vy.array() - vy.mean();
  const double denom = std::sqrt(cx.squaredNorm() * cy.squaredNorm());
  if (denom == 0.0) throw std::invalid_argument("pearson: zero variance");
  return cx.dot(cy) / denom;
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ols_fit: need two same-length series of size >= 2");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  a.col(0) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  a.col(1).setOnes();
  Eigen::Map<const Eigen::VectorXd> vy(y.data(), n);
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(vy.eval());

  LinearFit fit;
  fit.slope = coef(0);
  fit.intercept = coef(1);
  const double ss_res = (vy - a * coef).squaredNorm();
  const double ss_tot = (vy.array() - vy.mean()).matrix().squaredNorm();
  fit.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

std::array<double, 5> energy_breakdown(const Buckets& buckets) {
  const double total = buckets.total();
  if (!(total > 0.0)) throw std::invalid_argument("energy_breakdown: zero-energy run");
  return {100.0 * buckets.tx / total, 100.0 * buckets.rx / total, 100.0 * buckets.idle / total,
          100.0 * buckets.active / total, 100.0 * buckets.app / total};
}

}  // namespace sdc
