#include "sdcsim/csv.hpp"

#include <unistd.h>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace sdc {
namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string trace_to_csv(const std::vector<TraceRecord>& records) {
  std::string out = kTraceHeader;
  out += '\n';
  char line[352];
  for (const TraceRecord& r : records) {
    std::snprintf(line, sizeof line, "%" PRId64 ",%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  r.period, r.mean_activity, r.mean_battery, r.sun, r.cloud, r.cumulative.tx,
                  r.cumulative.rx, r.cumulative.idle, r.cumulative.active, r.cumulative.app);
    out += line;
  }
  return out;
}

void write_trace_csv(const std::vector<TraceRecord>& records, const std::filesystem::path& path) {
  atomic_write_text(path, trace_to_csv(records));
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw std::runtime_error("bad trace header in " + path.string());
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRecord r;
    double fields[9];
    char* cursor = line.data();
    r.period = std::strtoll(cursor, &cursor, 10);
    for (double& f : fields) {
      if (*cursor != ',') throw std::runtime_error("malformed trace row: " + line);
      f = std::strtod(cursor + 1, &cursor);
    }
    r.mean_activity = fields[0];
    r.mean_battery = fields[1];
    r.sun = fields[2];
    r.cloud = fields[3];
    r.cumulative = Buckets{fields[4], fields[5], fields[6], fields[7], fields[8]};
    records.push_back(r);
  }
  return records;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += format_real(r.value);
    out += ',';
    out += r.averaged ? "avg" : std::to_string(r.seed);
    if (r.ok) {
      char buf[224];
      std::snprintf(buf, sizeof buf, ",%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,", r.mean_system_activity,
                    r.final_mean_battery, r.breakdown[0], r.breakdown[1], r.breakdown[2],
                    r.breakdown[3], r.breakdown[4]);
      out += buf;
    } else {
      out += ",,,,,,,,";
    }
    out += csv_escape(r.error);
    out += '\n';
  }
  return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  atomic_write_text(path, sweep_to_csv(rows));
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);  // best effort; open reports failures

  const std::filesystem::path tmp =
      dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("rename failed: " + path.string() + " (" + ec.message() + ")");
  }
}

}  // namespace sdc
