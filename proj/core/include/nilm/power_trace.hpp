#pragma once

#include <cstddef>
#include <vector>

namespace nilm {

/// Uniformly sampled real-power signal in watts.
///
/// Invariants (checked by validate()): samples are non-negative and finite,
/// sample_period > 0. Gaps never survive loading; index i is at time
/// start_epoch + i * sample_period.
struct PowerTrace {
  double start_epoch = 0.0;    // seconds since Unix epoch, UTC
  double sample_period = 1.0;  // seconds between consecutive samples
  std::vector<double> samples; // watts

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double operator[](std::size_t i) const { return samples[i]; }
  double& operator[](std::size_t i) { return samples[i]; }

  /// Seconds covered by the trace (size * sample_period).
  double duration_seconds() const { return static_cast<double>(samples.size()) * sample_period; }

  /// Copy with the same timebase but different samples.
  PowerTrace with_samples(std::vector<double> s) const {
    return PowerTrace{start_epoch, sample_period, std::move(s)};
  }

  /// Throws on invariant violation (negative/non-finite sample, bad period).
  void validate() const;
};

/// Trace of identical timebase filled with a constant level.
PowerTrace constant_trace(std::size_t n, double watts, double sample_period = 1.0,
                          double start_epoch = 0.0);

}  // namespace nilm
