#include "nilm/power_trace.hpp"

#include <cmath>
#include <string>

#include "nilm/error.hpp"

namespace nilm {

void PowerTrace::validate() const {
  if (!(sample_period > 0.0) || !std::isfinite(sample_period))
    raise(Errc::malformed_row, "sample_period must be positive and finite");
  if (!std::isfinite(start_epoch))
    raise(Errc::malformed_row, "start_epoch must be finite");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double w = samples[i];
    if (!std::isfinite(w) || w < 0.0)
      raise(Errc::malformed_row,
            "sample " + std::to_string(i) + " = " + std::to_string(w) + " W is not a valid power");
  }
}

PowerTrace constant_trace(std::size_t n, double watts, double sample_period, double start_epoch) {
  return PowerTrace{start_epoch, sample_period, std::vector<double>(n, watts)};
}

}  // namespace nilm
