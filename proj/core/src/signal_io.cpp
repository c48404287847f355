#include "nilm/signal_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nilm/error.hpp"

namespace nilm {

namespace {

constexpr int kMaxGapSamples = 10;

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  if (begin == end) return false;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, delim)) fields.push_back(field);
  return fields;
}

/// Shortest decimal form that parses back to the same double; fixed-notation
/// values are padded to at least `min_decimals` fractional digits.
std::string format_value(double v, int min_decimals) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  if (s.find('e') == std::string::npos && s.find('E') == std::string::npos) {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      s += '.';
      dot = s.size() - 1;
    }
    const int decimals = static_cast<int>(s.size() - dot - 1);
    for (int i = decimals; i < min_decimals; ++i) s += '0';
  }
  return s;
}

struct Row {
  double ts;
  double watts;
};

}  // namespace

PowerTrace load_trace(const std::filesystem::path& path, const ColumnSpec& spec) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path.string());

  const int max_col = std::max(spec.time_column, spec.power_column);
  std::vector<Row> rows;
  std::optional<double> tagged_period;
  std::optional<double> tagged_start;

  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      // Exported traces tag their exact timebase in a comment.
      std::istringstream tag(line);
      std::string word;
      tag >> word >> word;
      if (word == "nilm-trace") {
        while (tag >> word) {
          double v;
          if (word.rfind("period=", 0) == 0 && parse_double(word.substr(7), v)) tagged_period = v;
          if (word.rfind("start=", 0) == 0 && parse_double(word.substr(6), v)) tagged_start = v;
        }
      }
      continue;
    }
    auto fields = split_row(line, spec.delimiter);
    if (static_cast<int>(fields.size()) <= max_col) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      raise(Errc::malformed_row, path.string() + ":" + std::to_string(lineno) + ": expected at least " +
                                     std::to_string(max_col + 1) + " columns");
    }
    Row row{};
    const bool ok = parse_double(fields[spec.time_column], row.ts) &&
                    parse_double(fields[spec.power_column], row.watts);
    if (!ok) {
      if (header_allowed) {
        header_allowed = false;  // one non-numeric leading row = header
        continue;
      }
      raise(Errc::malformed_row, path.string() + ":" + std::to_string(lineno) + ": bad numeric field");
    }
    header_allowed = false;
    if (row.watts < 0.0 && !spec.allow_signed)
      raise(Errc::malformed_row,
            path.string() + ":" + std::to_string(lineno) + ": negative power " + std::to_string(row.watts));
    if (!rows.empty() && row.ts < rows.back().ts)
      raise(Errc::non_monotone_time,
            path.string() + ":" + std::to_string(lineno) + ": timestamp decreases");
    rows.push_back(row);
  }

  if (rows.empty()) raise(Errc::empty_trace, path.string() + ": no data rows");

  double period;
  if (spec.sample_period) {
    period = *spec.sample_period;
  } else if (tagged_period) {
    period = *tagged_period;
  } else if (rows.size() >= 3) {
    std::vector<double> deltas;
    deltas.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double d = rows[i].ts - rows[i - 1].ts;
      if (d > 0.0) deltas.push_back(d);
    }
    if (deltas.empty()) {
      period = 1.0;
    } else {
      auto mid = deltas.begin() + deltas.size() / 2;
      std::nth_element(deltas.begin(), mid, deltas.end());
      period = *mid;
    }
  } else {
    period = 1.0;
  }
  if (!(period > 0.0)) raise(Errc::malformed_row, "inferred sample period is not positive");

  PowerTrace trace;
  trace.sample_period = period;
  trace.start_epoch = tagged_start ? *tagged_start : rows.front().ts;
  trace.samples.reserve(rows.size());
  trace.samples.push_back(rows.front().watts);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double delta = rows[i].ts - rows[i - 1].ts;
    const long steps = std::lround(delta / period);
    if (steps <= 0) {
      trace.samples.back() = rows[i].watts;  // duplicate timestamp: last wins
      continue;
    }
    const long missing = steps - 1;
    if (missing > kMaxGapSamples)
      raise(Errc::gap_too_large, path.string() + ": gap of " + std::to_string(missing) +
                                     " samples before t=" + std::to_string(rows[i].ts));
    for (long k = 0; k < missing; ++k) trace.samples.push_back(rows[i - 1].watts);
    trace.samples.push_back(rows[i].watts);
  }

  if (!spec.allow_signed) trace.validate();
  return trace;
}

void export_trace(const PowerTrace& trace, const std::filesystem::path& path,
                  bool allow_signed) {
  if (trace.empty()) raise(Errc::empty_trace, "refusing to export an empty trace");
  if (allow_signed) {
    for (double w : trace.samples)
      if (!std::isfinite(w))
        raise(Errc::malformed_row, "non-finite sample in trace");
  } else {
    trace.validate();
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot open " + path.string() + " for writing");

  out << "# nilm-trace period=" << format_value(trace.sample_period, 0)
      << " start=" << format_value(trace.start_epoch, 0) << "\n";
  out << "unix_ts,watts\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double ts = trace.start_epoch + static_cast<double>(i) * trace.sample_period;
    out << format_value(ts, 0) << ',' << format_value(trace.samples[i], 3) << "\n";
  }
  out.flush();
  if (!out) raise(Errc::io_error, "write failed for " + path.string());
}

}  // namespace nilm
