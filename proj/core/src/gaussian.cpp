#include "nilm/gaussian.hpp"

#include <cmath>

#include "nilm/error.hpp"

namespace nilm {

namespace {
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
}

void GaussianStat::update(double x) {
  if (!std::isfinite(x)) raise(Errc::empty_stat, "observation must be finite");
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
  if (m2 < 0.0) m2 = 0.0;  // guard against round-off
}

double GaussianStat::variance() const {
  if (count < 2) return 0.0;
  return m2 / static_cast<double>(count - 1);
}

double GaussianStat::sigma_eff(double floor) const {
  const double s = std::sqrt(variance());
  return s > floor ? s : floor;
}

double GaussianStat::pdf(double x, double floor) const {
  if (count == 0) raise(Errc::empty_stat, "pdf of a stat with no observations");
  const double s = sigma_eff(floor);
  const double z = (x - mean) / s;
  return kInvSqrt2Pi / s * std::exp(-0.5 * z * z);
}

}  // namespace nilm
