#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nilm/filters.hpp"

#include "test_util.hpp"

using namespace nilm;
using testutil::make_trace;
using testutil::steps_trace;

namespace {

// --- direct-evaluation oracles -------------------------------------------
// Deliberately naive re-statements of each filter's definition, written
// independently of the library code paths.

std::size_t mirror(long idx, long n) {
  while (idx < 0 || idx >= n) {
    if (idx < 0) idx = -idx - 1;
    if (idx >= n) idx = 2 * n - idx - 1;
  }
  return static_cast<std::size_t>(idx);
}

std::vector<double> oracle_median(const std::vector<double>& x, int window) {
  const long n = static_cast<long>(x.size());
  const long radius = window / 2;
  std::vector<double> out(x.size());
  for (long i = 0; i < n; ++i) {
    const long h = std::min({radius, i, n - 1 - i});
    std::vector<double> buf(x.begin() + (i - h), x.begin() + (i + h + 1));
    std::sort(buf.begin(), buf.end());
    out[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(h)];
  }
  return out;
}

std::vector<double> oracle_bilateral(const std::vector<double>& x, double ss, double sr,
                                     int window) {
  const long n = static_cast<long>(x.size());
  const long radius = window / 2;
  std::vector<double> out(x.size());
  for (long i = 0; i < n; ++i) {
    double acc = 0.0, norm = 0.0;
    for (long k = -radius; k <= radius; ++k) {
      const double v = x[mirror(i + k, n)];
      const double w = std::exp(-0.5 * k * k / (ss * ss)) *
                       std::exp(-0.5 * (v - x[static_cast<std::size_t>(i)]) *
                                (v - x[static_cast<std::size_t>(i)]) / (sr * sr));
      acc += w * v;
      norm += w;
    }
    out[static_cast<std::size_t>(i)] = acc / norm;
  }
  return out;
}

std::vector<double> oracle_aniso(std::vector<double> x, double kappa, double lambda, int iters) {
  const std::size_t n = x.size();
  auto g = [&](double d) { return std::exp(-(d / kappa) * (d / kappa)); };
  for (int it = 0; it < iters; ++it) {
    std::vector<double> next = x;
    for (std::size_t i = 0; i < n; ++i) {
      const double east = (i + 1 < n) ? x[i + 1] - x[i] : 0.0;
      const double west = (i > 0) ? x[i - 1] - x[i] : 0.0;
      next[i] = x[i] + lambda * (g(east) * east + g(west) * west);
    }
    x = std::move(next);
  }
  return x;
}

std::vector<double> oracle_domain_transform(const std::vector<double>& input, double ss, double sr,
                                            int iters) {
  const std::size_t n = input.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    d[i] = 1.0 + (ss / sr) * std::abs(input[i] - input[i - 1]);

  std::vector<double> y = input;
  for (int k = 1; k <= iters; ++k) {
    const double sigma_k =
        ss * std::sqrt(3.0) * std::pow(2.0, iters - k) / std::sqrt(std::pow(4.0, iters) - 1.0);
    const double a = std::exp(-std::sqrt(2.0) / sigma_k);
    for (std::size_t i = 1; i < n; ++i)
      y[i] = y[i] + std::pow(a, d[i]) * (y[i - 1] - y[i]);
    for (std::size_t i = n - 1; i-- > 0;)
      y[i] = y[i] + std::pow(a, d[i + 1]) * (y[i + 1] - y[i]);
  }
  return y;
}

std::vector<double> random_signal(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> level(0.0, 3000.0);
  std::uniform_real_distribution<double> jitter(-25.0, 25.0);
  std::uniform_int_distribution<int> run(1, 40);
  std::vector<double> out;
  while (out.size() < n) {
    const double base = level(gen);
    for (int k = run(gen); k > 0 && out.size() < n; --k)
      out.push_back(std::max(0.0, base + jitter(gen)));
  }
  return out;
}

void check_close(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double scale = std::max(1.0, std::abs(want[i]));
    worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
  }
  CHECK(worst <= tol);
}

}  // namespace

TEST_SUITE("filters") {

TEST_CASE("median removes an isolated spike") {
  const auto out = median_filter(make_trace({100, 100, 5000, 100, 100}), 3);
  CHECK(out.samples == std::vector<double>{100, 100, 100, 100, 100});
}

TEST_CASE("median of a constant is the constant") {
  const auto out = median_filter(testutil::steps_trace({{250.0, 64}}), 7);
  for (double v : out.samples) CHECK(v == 250.0);
}

TEST_CASE("median matches the sort-and-middle oracle") {
  std::mt19937_64 gen(11);
  for (int window : {3, 5, 9}) {
    const auto x = random_signal(gen, 256);
    const auto out = median_filter(make_trace(x), window);
    CHECK(out.samples == oracle_median(x, window));
  }
}

TEST_CASE("median rejects even and oversized windows") {
  CHECK_RAISES(Errc::even_window, median_filter(make_trace({1, 2, 3, 4}), 4));
  CHECK_RAISES(Errc::window_too_large, median_filter(make_trace({1, 2, 3}), 5));
}

TEST_CASE("bilateral leaves a constant unchanged") {
  const auto out = bilateral_filter(testutil::steps_trace({{440.0, 50}}), 3.0, 30.0, 15);
  for (double v : out.samples) CHECK(v == doctest::Approx(440.0).epsilon(1e-12));
}

TEST_CASE("bilateral with tiny range sigma is near-identity across a huge step") {
  const auto out = bilateral_filter(make_trace({0.0, 1000.0}), 3.0, 1.0, 15);
  CHECK(std::abs(out[0] - 0.0) < 1.0);
  CHECK(std::abs(out[1] - 1000.0) < 1.0);
}

TEST_CASE("bilateral matches the double-loop oracle") {
  std::mt19937_64 gen(12);
  const auto x = random_signal(gen, 256);
  const auto out = bilateral_filter(make_trace(x), 3.0, 30.0, 15);
  check_close(out.samples, oracle_bilateral(x, 3.0, 30.0, 15), 1e-6);
}

TEST_CASE("bilateral preserves a 500 W step under sigma=10 noise") {
  std::mt19937_64 gen(13);
  std::normal_distribution<double> noise(0.0, 10.0);
  std::vector<double> x(400);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i < 200 ? 0.0 : 500.0) + noise(gen);

  const auto out = bilateral_filter(make_trace(x), 3.0, 30.0, 15);
  check_close(out.samples, oracle_bilateral(x, 3.0, 30.0, 15), 1e-6);
  // The single-sample amplitude estimate keeps sigma ~5 W of plateau noise
  // (one bilateral pass only averages ~8 effective samples per side), so
  // allow 3 sigma. A blurred edge would read ~340 W here, far outside.
  const double amplitude = out[203] - out[196];
  CHECK(std::abs(amplitude - 500.0) <= 20.0);
  // Averaging 30 samples per plateau squeezes the noise to ~2 W.
  double lo = 0.0, hi = 0.0;
  for (int i = 160; i < 190; ++i) lo += out[i];
  for (int i = 210; i < 240; ++i) hi += out[i];
  CHECK(std::abs((hi - lo) / 30.0 - 500.0) <= 7.0);
}

TEST_CASE("bilateral rejects non-positive sigmas") {
  CHECK_RAISES(Errc::invalid_sigma, bilateral_filter(make_trace({1, 2}), 0.0, 30.0, 15));
  CHECK_RAISES(Errc::invalid_sigma, bilateral_filter(make_trace({1, 2}), 3.0, -1.0, 15));
}

TEST_CASE("diffusion leaves a constant unchanged") {
  const auto out = anisotropic_diffusion(testutil::steps_trace({{123.0, 40}}), 30.0, 0.1, 25);
  for (double v : out.samples) CHECK(v == doctest::Approx(123.0).epsilon(1e-12));
}

TEST_CASE("diffusion conserves the signal sum") {
  std::mt19937_64 gen(14);
  const auto x = random_signal(gen, 256);
  double before = 0.0;
  for (double v : x) before += v;
  const auto out = anisotropic_diffusion(make_trace(x), 30.0, 0.1, 20);
  double after = 0.0;
  for (double v : out.samples) after += v;
  CHECK(std::abs(after - before) <= 1e-6 * std::abs(before));
}

TEST_CASE("diffusion keeps a 500 W step midpoint in place") {
  const auto out = anisotropic_diffusion(steps_trace({{0.0, 64}, {500.0, 64}}), 50.0, 0.1, 20);
  std::size_t crossing = 0;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] >= 250.0) {
      crossing = i;
      break;
    }
  const long shift = static_cast<long>(crossing) - 64;
  CHECK(std::abs(shift) <= 1);
}

TEST_CASE("diffusion matches the explicit-scheme oracle") {
  std::mt19937_64 gen(15);
  const auto x = random_signal(gen, 256);
  const auto out = anisotropic_diffusion(make_trace(x), 30.0, 0.1, 20);
  check_close(out.samples, oracle_aniso(x, 30.0, 0.1, 20), 1e-6);
}

TEST_CASE("diffusion rejects out-of-range lambda") {
  CHECK_RAISES(Errc::invalid_lambda, anisotropic_diffusion(make_trace({1, 2}), 30.0, 0.3, 5));
  CHECK_RAISES(Errc::invalid_lambda, anisotropic_diffusion(make_trace({1, 2}), 30.0, 0.0, 5));
}

TEST_CASE("domain transform leaves a constant unchanged") {
  const auto out = domain_transform_filter(testutil::steps_trace({{75.0, 64}}), 60.0, 25.0, 3);
  for (double v : out.samples) CHECK(v == doctest::Approx(75.0).epsilon(1e-12));
}

TEST_CASE("domain transform keeps plateaus flat around a 500 W step") {
  const auto out = domain_transform_filter(steps_trace({{0.0, 128}, {500.0, 128}}), 60.0, 40.0, 3);
  double lo_min = 1e9, lo_max = -1e9, hi_min = 1e9, hi_max = -1e9;
  for (std::size_t i = 5; i < 123; ++i) {
    lo_min = std::min(lo_min, out[i]);
    lo_max = std::max(lo_max, out[i]);
  }
  for (std::size_t i = 133; i < 251; ++i) {
    hi_min = std::min(hi_min, out[i]);
    hi_max = std::max(hi_max, out[i]);
  }
  CHECK(lo_max - lo_min <= 2.0);
  CHECK(hi_max - hi_min <= 2.0);
}

TEST_CASE("domain transform with huge range sigma degenerates to plain recursive smoothing") {
  std::mt19937_64 gen(16);
  std::normal_distribution<double> noise(0.0, 10.0);
  std::vector<double> x(200);
  for (double& v : x) v = 300.0 + noise(gen);

  const auto out = domain_transform_filter(make_trace(x), 60.0, 1e12, 3);

  // Same recursion with every domain distance collapsed to 1.
  std::vector<double> plain = x;
  for (int k = 1; k <= 3; ++k) {
    const double sigma_k =
        60.0 * std::sqrt(3.0) * std::pow(2.0, 3 - k) / std::sqrt(std::pow(4.0, 3) - 1.0);
    const double a = std::exp(-std::sqrt(2.0) / sigma_k);
    for (std::size_t i = 1; i < plain.size(); ++i) plain[i] += a * (plain[i - 1] - plain[i]);
    for (std::size_t i = plain.size() - 1; i-- > 0;) plain[i] += a * (plain[i + 1] - plain[i]);
  }
  check_close(out.samples, plain, 1e-9);
}

TEST_CASE("domain transform matches the recursive-pass oracle") {
  std::mt19937_64 gen(17);
  const auto x = random_signal(gen, 256);
  const auto out = domain_transform_filter(make_trace(x), 60.0, 25.0, 3);
  check_close(out.samples, oracle_domain_transform(x, 60.0, 25.0, 3), 1e-6);
}

TEST_CASE("sharpening is a no-op on an ideal step") {
  const auto in = steps_trace({{0.0, 10}, {500.0, 10}});
  CHECK(edge_sharpen(in, 20.0, 10).samples == in.samples);
}

TEST_CASE("sharpening collapses a linear ramp into one step, preserving the sum") {
  const auto in = make_trace({0, 0, 0, 100, 200, 300, 400, 400, 400});
  const auto out = edge_sharpen(in, 20.0, 10);

  double before = 0.0, after = 0.0;
  for (double v : in.samples) before += v;
  for (double v : out.samples) after += v;
  CHECK(std::abs(after - before) <= 400.0);  // one sample's worth of the step

  // Exactly one 0 -> 400 transition left.
  int transitions = 0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    CHECK((out[i] == 0.0 || out[i] == 400.0));
    if (out[i] != out[i - 1]) ++transitions;
  }
  CHECK(transitions == 1);
}

TEST_CASE("sharpening ignores sub-threshold wiggle") {
  const auto in = make_trace({100, 110, 95, 108, 92, 104});
  CHECK(edge_sharpen(in, 20.0, 10).samples == in.samples);
}

TEST_CASE("sharpening leaves ramps longer than max_ramp alone") {
  std::vector<double> ramp;
  for (int i = 0; i <= 12; ++i) ramp.push_back(50.0 * i);
  const auto in = make_trace(ramp);
  CHECK(edge_sharpen(in, 20.0, 10).samples == in.samples);  // 12 deltas > max_ramp
}

TEST_CASE("pipeline output length equals input length") {
  std::mt19937_64 gen(18);
  for (std::size_t n : {16u, 100u, 1001u}) {
    const auto x = random_signal(gen, n);
    CHECK(run_pipeline(make_trace(x), FilterConfig{}).size() == n);
  }
}

TEST_CASE("pipeline is the identity on constants") {
  const auto out = run_pipeline(testutil::steps_trace({{321.0, 120}}), FilterConfig{});
  for (double v : out.samples) CHECK(v == doctest::Approx(321.0).epsilon(1e-9));
}

TEST_CASE("ideal signals with steps >= 60 W pass the full pipeline within 5 W") {
  // The hardest fixed case: 60 W steps in both directions at low and high level.
  const auto hard = steps_trace({{0, 120}, {60, 120}, {0, 120}, {500, 120}, {560, 120},
                                 {60, 120}, {4560, 120}, {4500, 120}, {0, 120}, {80, 120},
                                 {0, 120}});
  const auto filtered = run_pipeline(hard, FilterConfig{});
  CHECK(testutil::max_abs_diff(filtered.samples, hard.samples) <= 5.0);

  // Randomized piecewise-constant signals, steady-state-length plateaus.
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> step(60.0, 1500.0);
  std::uniform_int_distribution<int> run(40, 200);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<std::pair<double, std::size_t>> blocks;
    double level = 0.0;
    for (int b = 0; b < 8; ++b) {
      blocks.emplace_back(level, static_cast<std::size_t>(run(gen)));
      const double delta = step(gen);
      if (level < delta || coin(gen)) level += delta;
      else level = std::max(0.0, level - delta);
    }
    const auto sig = steps_trace(blocks);
    const auto out = run_pipeline(sig, FilterConfig{});
    CHECK(testutil::max_abs_diff(out.samples, sig.samples) <= 5.0);
  }
}

TEST_CASE("pipeline energy drift stays within 2 percent when spikes are rare") {
  std::mt19937_64 gen(20);
  std::normal_distribution<double> noise(0.0, 10.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ideal, noisy;
  for (std::size_t i = 0; i < 3000; ++i) {
    const double base = (i / 600) % 2 ? 800.0 : 200.0;
    ideal.push_back(base);
    double v = std::max(0.0, base + noise(gen));
    if (u(gen) < 0.002) v += 5000.0;  // spikes carry well under 1% of energy
    noisy.push_back(v);
  }
  const auto out = run_pipeline(make_trace(noisy), FilterConfig{});
  double e_ideal = 0.0, e_out = 0.0;
  for (double v : ideal) e_ideal += v;
  for (double v : out.samples) e_out += v;
  CHECK(std::abs(e_out - e_ideal) <= 0.02 * e_ideal);
}

TEST_CASE("config validation rejects each out-of-range knob") {
  FilterConfig bad;
  bad.median_window = 4;
  CHECK_RAISES(Errc::even_window, bad.validate());

  bad = FilterConfig{};
  bad.aniso_lambda = 0.3;
  CHECK_RAISES(Errc::invalid_lambda, bad.validate());

  bad = FilterConfig{};
  bad.dt_sigma_range = 0.0;
  CHECK_RAISES(Errc::invalid_sigma, bad.validate());

  bad = FilterConfig{};
  bad.sharpen_max_ramp = 0;
  CHECK_RAISES(Errc::invalid_config, bad.validate());
}

}  // TEST_SUITE
