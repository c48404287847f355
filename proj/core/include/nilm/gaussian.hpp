#pragma once

#include <cstddef>

namespace nilm {

/// Sigma floors applied when a distribution has too few observations to
/// estimate spread (or a degenerate one). Power stats are in watts,
/// duration stats in minutes.
inline constexpr double kPowerSigmaFloorW = 5.0;
inline constexpr double kDurationSigmaFloorMin = 0.5;

/// Online mean/variance accumulator (Welford's single-pass update).
///
/// variance() is the sample variance m2/(count-1), defined for count >= 2.
/// sigma_eff(floor) never returns less than the floor, so densities and
/// distances stay usable from the very first observation.
struct GaussianStat {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;  // running sum of squared deviations

  void update(double x);

  double variance() const;                 // 0 when count < 2
  double sigma_eff(double floor) const;    // max(sqrt(variance), floor)
  double pdf(double x, double floor) const;  // N(x; mean, sigma_eff^2); throws EmptyStat when count == 0

  bool empty() const { return count == 0; }
};

}  // namespace nilm
