#pragma once

#include <filesystem>
#include <optional>

#include "nilm/power_trace.hpp"

namespace nilm {

/// How to read a delimited text file into a PowerTrace.
///
/// Rows are `timestamp<delim>watts` records; extra columns are ignored.
/// When sample_period is not given it is inferred from the median positive
/// timestamp delta (files with fewer than three data rows fall back to the
/// 1 s default, since a single delta cannot distinguish a slower rate from
/// a gap).
struct ColumnSpec {
  int time_column = 0;
  int power_column = 1;
  char delimiter = ',';
  std::optional<double> sample_period;  // seconds; overrides inference
  bool allow_signed = false;  // accept negative values (residual traces)
};

/// Loads a trace from CSV. A leading non-numeric row is treated as a header.
/// Gaps of up to 10 missing samples are filled by holding the previous
/// value; larger gaps raise GapTooLarge. Duplicate timestamps keep the last
/// value. Timestamps must be monotone non-decreasing.
PowerTrace load_trace(const std::filesystem::path& path, const ColumnSpec& spec = {});

/// Writes `unix_ts,watts` rows plus a `# nilm-trace` comment carrying the
/// exact timebase, so load_trace(export_trace(t)) reproduces t bit-exactly.
/// Watts are serialized with at least 3 decimal places. Signed traces
/// (residuals) must be marked as such on both export and load.
void export_trace(const PowerTrace& trace, const std::filesystem::path& path,
                  bool allow_signed = false);

}  // namespace nilm
