#pragma once

#include <stdexcept>
#include <string>

namespace nilm {

enum class Errc {
  // signal_io
  malformed_row,
  gap_too_large,
  non_monotone_time,
  io_error,
  empty_trace,
  // filters
  window_too_large,
  even_window,
  invalid_sigma,
  invalid_lambda,
  // events
  trace_too_short,
  // models
  empty_stat,
  already_on,
  already_off,
  // mckp
  instance_too_large,
  // labelling
  overlapping_cells,
  unknown_region,
  malformed_cell,
  // metrics
  zero_truth_energy,
  // synth
  invalid_scenario,
  // config / cli
  invalid_config,
};

const char* errc_name(Errc code);

/// Exception carrying a machine-checkable error code plus a human message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace nilm
