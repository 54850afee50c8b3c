#pragma once
#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "sdcsim/netsim.hpp"

// Bit-stable CSV serialization. Reals are written with 9 significant digits
// ("%.9g", C locale), lines end with '\n', and files are written atomically
// (temp file in the target directory, then rename), so equal inputs always
// produce byte-identical files and readers never observe partial output.

namespace sdc {

inline constexpr const char* kTraceHeader =
    "period,mean_activity,mean_battery,sun,cloud,e_tx,e_rx,e_idle,e_active,e_app";

std::string format_real(double v);

std::string trace_to_csv(const std::vector<TraceRecord>& records);
void write_trace_csv(const std::vector<TraceRecord>& records, const std::filesystem::path& path);
std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

// One sweep result row; `averaged` rows carry the seed-mean over the
// successful runs of one grid value.
struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  bool averaged = false;
  bool ok = true;
  std::string error;
  double mean_system_activity = 0.0;
  double final_mean_battery = 0.0;
  std::array<double, 5> breakdown{};  // percentages: tx, rx, idle, active, app
};

inline constexpr const char* kSweepHeader =
    "value,seed,mean_system_activity,final_mean_battery,pct_tx,pct_rx,pct_idle,pct_active,"
    "pct_app,error";

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

// Writes content to path via a sibling temp file + rename.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace sdc
