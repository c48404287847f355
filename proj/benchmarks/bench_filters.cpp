#include <benchmark/benchmark.h>

#include <cstddef>

#include "nilm/filters.hpp"
#include "nilm/rng.hpp"

namespace {

using namespace nilm;

// 90 minutes at 1 Hz: a 4-level load profile with Gaussian plateau noise
// and sparse 1-sample spikes, the shape the pipeline is tuned for.
PowerTrace noisy_profile(std::size_t n = 5400) {
  Rng rng(77);
  PowerTrace trace;
  trace.samples.resize(n);
  const double levels[] = {40.0, 540.0, 640.0, 140.0};
  for (std::size_t t = 0; t < n; ++t) {
    double v = levels[(t / 900) % 4] + rng.normal(0.0, 8.0);
    if (rng.bernoulli(0.005)) v += 900.0;
    trace.samples[t] = v < 0.0 ? 0.0 : v;
  }
  return trace;
}

void filter_median(benchmark::State& state) {
  const PowerTrace in = noisy_profile();
  const FilterConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(median_filter(in, cfg.median_window));
  state.SetItemsProcessed(state.iterations() * in.size());
}
BENCHMARK(filter_median);

void filter_bilateral(benchmark::State& state) {
  const PowerTrace in = noisy_profile();
  const FilterConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(bilateral_filter(in, cfg.bilateral_sigma_spatial,
                                              cfg.bilateral_sigma_range,
                                              cfg.bilateral_window));
  state.SetItemsProcessed(state.iterations() * in.size());
}
BENCHMARK(filter_bilateral);

void filter_anisotropic(benchmark::State& state) {
  const PowerTrace in = noisy_profile();
  const FilterConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        anisotropic_diffusion(in, cfg.aniso_kappa, cfg.aniso_lambda, cfg.aniso_iters));
  state.SetItemsProcessed(state.iterations() * in.size());
}
BENCHMARK(filter_anisotropic);

void filter_domain_transform(benchmark::State& state) {
  const PowerTrace in = noisy_profile();
  const FilterConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(domain_transform_filter(in, cfg.dt_sigma_spatial,
                                                     cfg.dt_sigma_range, cfg.dt_iters));
  state.SetItemsProcessed(state.iterations() * in.size());
}
BENCHMARK(filter_domain_transform);

void filter_sharpen(benchmark::State& state) {
  // Sharpening runs on already-smoothed input in the real pipeline.
  const FilterConfig cfg;
  StageMask no_sharpen;
  no_sharpen.sharpen = false;
  const PowerTrace in = run_pipeline(noisy_profile(), cfg, no_sharpen);
  for (auto _ : state)
    benchmark::DoNotOptimize(edge_sharpen(in, cfg.sharpen_slope_min, cfg.sharpen_max_ramp));
  state.SetItemsProcessed(state.iterations() * in.size());
}
BENCHMARK(filter_sharpen);

void filter_full_pipeline(benchmark::State& state) {
  const PowerTrace in = noisy_profile(static_cast<std::size_t>(state.range(0)));
  const FilterConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_pipeline(in, cfg));
  state.SetItemsProcessed(state.iterations() * in.size());
}
BENCHMARK(filter_full_pipeline)->Arg(1350)->Arg(5400)->Arg(21600);

}  // namespace

BENCHMARK_MAIN();
