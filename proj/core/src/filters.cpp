#include "nilm/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nilm/error.hpp"

namespace nilm {

namespace {

// Edge-inclusive mirror: -1 -> 0, -2 -> 1, n -> n-1, ...
std::size_t reflect(long idx, std::size_t n) {
  const long size = static_cast<long>(n);
  while (idx < 0 || idx >= size) {
    if (idx < 0) idx = -idx - 1;
    if (idx >= size) idx = 2 * size - idx - 1;
  }
  return static_cast<std::size_t>(idx);
}

void require_sigma(double sigma, const char* name) {
  if (!(sigma > 0.0)) raise(Errc::invalid_sigma, std::string(name) + " must be > 0");
}

}  // namespace

void FilterConfig::validate() const {
  if (median_window % 2 == 0) raise(Errc::even_window, "median_window must be odd");
  if (median_window < 3) raise(Errc::invalid_config, "median_window must be >= 3");
  require_sigma(bilateral_sigma_spatial, "bilateral_sigma_spatial");
  require_sigma(bilateral_sigma_range, "bilateral_sigma_range");
  if (bilateral_window < 1) raise(Errc::invalid_config, "bilateral_window must be >= 1");
  require_sigma(aniso_kappa, "aniso_kappa");
  if (!(aniso_lambda > 0.0) || aniso_lambda > 0.25)
    raise(Errc::invalid_lambda, "aniso_lambda must be in (0, 0.25]");
  if (aniso_iters < 1) raise(Errc::invalid_config, "aniso_iters must be >= 1");
  require_sigma(dt_sigma_spatial, "dt_sigma_spatial");
  require_sigma(dt_sigma_range, "dt_sigma_range");
  if (dt_iters < 1) raise(Errc::invalid_config, "dt_iters must be >= 1");
  if (!(sharpen_slope_min > 0.0)) raise(Errc::invalid_config, "sharpen_slope_min must be > 0");
  if (sharpen_max_ramp < 1) raise(Errc::invalid_config, "sharpen_max_ramp must be >= 1");
}

PowerTrace median_filter(const PowerTrace& signal, int window) {
  if (window % 2 == 0) raise(Errc::even_window, "median window must be odd");
  if (window < 1 || static_cast<std::size_t>(window) > signal.size())
    raise(Errc::window_too_large,
          "median window " + std::to_string(window) + " exceeds signal length");

  const std::size_t n = signal.size();
  const long radius = window / 2;
  std::vector<double> out(n);
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(window));
  for (std::size_t i = 0; i < n; ++i) {
    const long h = std::min<long>({radius, static_cast<long>(i), static_cast<long>(n - 1 - i)});
    buf.assign(signal.samples.begin() + (static_cast<long>(i) - h),
               signal.samples.begin() + (static_cast<long>(i) + h + 1));
    auto mid = buf.begin() + h;
    std::nth_element(buf.begin(), mid, buf.end());
    out[i] = *mid;
  }
  return signal.with_samples(std::move(out));
}

PowerTrace bilateral_filter(const PowerTrace& signal, double sigma_spatial, double sigma_range,
                            int window) {
  require_sigma(sigma_spatial, "sigma_spatial");
  require_sigma(sigma_range, "sigma_range");
  if (window < 1) raise(Errc::invalid_config, "bilateral window must be >= 1");

  const std::size_t n = signal.size();
  const long radius = window / 2;
  const double space_coeff = -0.5 / (sigma_spatial * sigma_spatial);
  const double range_coeff = -0.5 / (sigma_range * sigma_range);

  std::vector<double> space_w(static_cast<std::size_t>(2 * radius + 1));
  for (long k = -radius; k <= radius; ++k)
    space_w[static_cast<std::size_t>(k + radius)] = std::exp(space_coeff * static_cast<double>(k * k));

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double center = signal.samples[i];
    double acc = 0.0, norm = 0.0;
    for (long k = -radius; k <= radius; ++k) {
      const double v = signal.samples[reflect(static_cast<long>(i) + k, n)];
      const double dv = v - center;
      const double w = space_w[static_cast<std::size_t>(k + radius)] * std::exp(range_coeff * dv * dv);
      acc += w * v;
      norm += w;
    }
    out[i] = acc / norm;
  }
  return signal.with_samples(std::move(out));
}

PowerTrace anisotropic_diffusion(const PowerTrace& signal, double kappa, double lambda, int iters) {
  require_sigma(kappa, "kappa");
  if (!(lambda > 0.0) || lambda > 0.25) raise(Errc::invalid_lambda, "lambda must be in (0, 0.25]");
  if (iters < 1) raise(Errc::invalid_config, "iters must be >= 1");

  const std::size_t n = signal.size();
  std::vector<double> cur = signal.samples;
  if (n < 2) return signal.with_samples(std::move(cur));

  const double inv_k2 = 1.0 / (kappa * kappa);
  std::vector<double> next(n);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      // Zero-flux boundaries: the missing neighbour mirrors the sample itself.
      const double east = (i + 1 < n) ? cur[i + 1] - cur[i] : 0.0;
      const double west = (i > 0) ? cur[i - 1] - cur[i] : 0.0;
      const double g_east = std::exp(-east * east * inv_k2);
      const double g_west = std::exp(-west * west * inv_k2);
      next[i] = cur[i] + lambda * (g_east * east + g_west * west);
    }
    cur.swap(next);
  }
  return signal.with_samples(std::move(cur));
}

PowerTrace domain_transform_filter(const PowerTrace& signal, double sigma_spatial,
                                   double sigma_range, int iters) {
  require_sigma(sigma_spatial, "sigma_spatial");
  require_sigma(sigma_range, "sigma_range");
  if (iters < 1) raise(Errc::invalid_config, "iters must be >= 1");

  const std::size_t n = signal.size();
  std::vector<double> cur = signal.samples;
  if (n < 2) return signal.with_samples(std::move(cur));

  // Domain distances between neighbours, fixed by the input signal.
  const double ratio = sigma_spatial / sigma_range;
  std::vector<double> dist(n);
  dist[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    dist[i] = 1.0 + ratio * std::abs(signal.samples[i] - signal.samples[i - 1]);

  const double denom = std::sqrt(std::pow(4.0, iters) - 1.0);
  std::vector<double> weight(n);
  for (int k = 1; k <= iters; ++k) {
    const double sigma_k = sigma_spatial * std::sqrt(3.0) * std::pow(2.0, iters - k) / denom;
    const double log_a = -std::sqrt(2.0) / sigma_k;  // a = exp(log_a), a^d = exp(log_a * d)
    for (std::size_t i = 1; i < n; ++i) weight[i] = std::exp(log_a * dist[i]);

    for (std::size_t i = 1; i < n; ++i) cur[i] += weight[i] * (cur[i - 1] - cur[i]);
    for (std::size_t i = n - 1; i-- > 0;) cur[i] += weight[i + 1] * (cur[i + 1] - cur[i]);
  }
  return signal.with_samples(std::move(cur));
}

PowerTrace edge_sharpen(const PowerTrace& signal, double slope_min, int max_ramp) {
  if (!(slope_min > 0.0)) raise(Errc::invalid_config, "slope_min must be > 0");
  if (max_ramp < 1) raise(Errc::invalid_config, "max_ramp must be >= 1");

  const std::size_t n = signal.size();
  std::vector<double> out = signal.samples;
  if (n < 3) return signal.with_samples(std::move(out));

  std::size_t i = 1;  // index of the first delta in a candidate run is i-1 -> i
  while (i < n) {
    const double d0 = out[i] - out[i - 1];
    if (std::abs(d0) < slope_min) {
      ++i;
      continue;
    }
    const double sign = d0 > 0 ? 1.0 : -1.0;
    std::size_t run_end = i;  // run covers deltas (run_start-1..run_end)
    while (run_end + 1 < n) {
      const double d = out[run_end + 1] - out[run_end];
      if (std::abs(d) < slope_min || d * sign <= 0.0) break;
      ++run_end;
    }
    const std::size_t run_len = run_end - i + 1;  // number of deltas
    if (run_len >= 2 && run_len <= static_cast<std::size_t>(max_ramp)) {
      // Replace the ramp interior with an ideal step; split chosen so the
      // region sum moves by at most one sample of the step height.
      const std::size_t lo = i - 1, hi = run_end;  // region samples lo..hi (anchors fixed)
      const double v_lo = out[lo], v_hi = out[hi];
      const long interior = static_cast<long>(hi - lo - 1);
      if (interior > 0) {
        double sum_int = 0.0;
        for (std::size_t j = lo + 1; j < hi; ++j) sum_int += out[j];
        const double step = v_hi - v_lo;
        long k = std::lround((sum_int - static_cast<double>(interior) * v_lo) / step);
        k = std::clamp<long>(k, 0, interior);
        for (long j = 0; j < interior; ++j)
          out[lo + 1 + static_cast<std::size_t>(j)] = (j < interior - k) ? v_lo : v_hi;
      }
    }
    i = run_end + 1;
  }
  return signal.with_samples(std::move(out));
}

PowerTrace run_pipeline(const PowerTrace& signal, const FilterConfig& config,
                        const StageMask& stages) {
  config.validate();
  PowerTrace y = signal;
  if (stages.median) y = median_filter(y, config.median_window);
  if (stages.bilateral)
    y = bilateral_filter(y, config.bilateral_sigma_spatial, config.bilateral_sigma_range,
                         config.bilateral_window);
  if (stages.anisotropic)
    y = anisotropic_diffusion(y, config.aniso_kappa, config.aniso_lambda, config.aniso_iters);
  if (stages.domain_transform)
    y = domain_transform_filter(y, config.dt_sigma_spatial, config.dt_sigma_range, config.dt_iters);
  if (stages.sharpen) y = edge_sharpen(y, config.sharpen_slope_min, config.sharpen_max_ramp);
  return y;
}

}  // namespace nilm
