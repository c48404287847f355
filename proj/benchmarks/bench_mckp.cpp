#include <benchmark/benchmark.h>

#include <cstddef>

#include "nilm/appliance.hpp"
#include "nilm/mckp.hpp"
#include "nilm/rng.hpp"

namespace {

using namespace nilm;

// A database of n OFF appliances with well-separated learned ON powers,
// the situation build_instance sees when a large ON step arrives.
ApplianceDb learned_db(int n) {
  Rng rng(19);
  ApplianceDb db;
  for (int i = 0; i < n; ++i) {
    ApplianceModel a;
    a.id = i + 1;
    a.state = ApplianceState::off;
    a.p_on.count = 12;
    a.p_on.mean = 80.0 + 140.0 * i + rng.uniform(-10.0, 10.0);
    a.p_on.m2 = 11.0 * 36.0;  // sigma ~ 6 W
    db.appliances.push_back(a);
  }
  return db;
}

void mckp_build_instance(benchmark::State& state) {
  const ApplianceDb db = learned_db(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(build_instance(600.0, db, EventDirection::on));
}
BENCHMARK(mckp_build_instance)->Arg(2)->Arg(6)->Arg(12);

void mckp_solve(benchmark::State& state) {
  const ApplianceDb db = learned_db(static_cast<int>(state.range(0)));
  // Capacity near the sum of the two largest means keeps the DP honest:
  // several classes stay candidates instead of being pruned by weight.
  const double delta = db.appliances.back().p_on.mean +
                       db.appliances[db.size() - 2].p_on.mean;
  const MckpInstance instance = build_instance(delta, db, EventDirection::on);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve(instance));
  state.SetLabel("capacity=" + std::to_string(instance.capacity));
}
BENCHMARK(mckp_solve)->Arg(2)->Arg(6)->Arg(12);

void mckp_brute_force(benchmark::State& state) {
  const ApplianceDb db = learned_db(static_cast<int>(state.range(0)));
  const double delta = db.appliances.back().p_on.mean +
                       db.appliances[db.size() - 2].p_on.mean;
  const MckpInstance instance = build_instance(delta, db, EventDirection::on);
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force(instance));
}
BENCHMARK(mckp_brute_force)->Arg(2)->Arg(4);

void mckp_event_burst(benchmark::State& state) {
  // End-to-end cost of one tracked ON event's assignment query, repeated
  // over a spread of step sizes as a day of events would produce.
  const ApplianceDb db = learned_db(8);
  Rng rng(23);
  std::vector<double> deltas;
  for (int i = 0; i < 64; ++i) deltas.push_back(rng.uniform(60.0, 1200.0));
  for (auto _ : state) {
    for (double d : deltas)
      benchmark::DoNotOptimize(solve(build_instance(d, db, EventDirection::on)));
  }
  state.SetItemsProcessed(state.iterations() * deltas.size());
}
BENCHMARK(mckp_event_burst);

}  // namespace
