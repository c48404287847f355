#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nilm {

/// Seeded generator with a pinned mapping from raw mt19937_64 output to
/// doubles, so sequences are reproducible from the seed alone rather than
/// depending on a standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (static_cast<double>(hi) - lo + 1.0));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Box-Muller; the paired second deviate is cached.
  double normal(double mean = 0.0, double sigma = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sigma * spare_;
    }
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return mean + sigma * r * std::cos(theta);
  }

  /// Gaussian draw clipped to mean +/- 3 sigma.
  double truncated_normal(double mean, double sigma) {
    double v = normal(mean, sigma);
    if (v < mean - 3.0 * sigma) v = mean - 3.0 * sigma;
    if (v > mean + 3.0 * sigma) v = mean + 3.0 * sigma;
    return v;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace nilm
