#include <doctest.h>

#include <cmath>
#include <random>

#include "nilm/mckp.hpp"

#include "test_util.hpp"

using namespace nilm;

namespace {

MckpInstance instance(int capacity, std::vector<MckpClass> classes) {
  return MckpInstance{capacity, std::move(classes)};
}

MckpClass cls(int id, std::vector<MckpItem> items) { return MckpClass{id, std::move(items)}; }

ApplianceDb db_with_off_appliance(double mean, double m2, std::size_t count) {
  ApplianceDb db;
  db.add_new(mean, 0);
  auto& a = db.appliances[0];
  a.state = ApplianceState::off;
  a.current_power = 0.0;
  a.p_on.count = count;
  a.p_on.mean = mean;
  a.p_on.m2 = m2;
  return db;
}

MckpInstance random_instance(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> n_classes(0, 5);
  std::uniform_int_distribution<int> n_items(1, 31);
  std::uniform_int_distribution<int> weight(1, 1200);
  std::uniform_int_distribution<int> capacity(1, 5000);
  std::uniform_real_distribution<double> profit(0.0, 100.0);

  MckpInstance inst;
  inst.capacity = capacity(gen);
  const int m = n_classes(gen);
  // Cap the joint enumeration size so the exhaustive reference stays cheap.
  long long combos = 1;
  for (int c = 0; c < m; ++c) {
    MckpClass k;
    k.appliance_id = c + 1;
    int items = n_items(gen);
    while (items > 1 && combos * (items + 1) > 200000) items /= 2;
    if (combos * (items + 1) > 200000) break;
    combos *= items + 1;
    for (int j = 0; j < items; ++j) k.items.push_back({weight(gen), profit(gen)});
    inst.classes.push_back(std::move(k));
  }
  return inst;
}

void check_same_solution(const MckpSolution& a, const MckpSolution& b) {
  CHECK(a.objective == b.objective);
  CHECK(a.profit == b.profit);
  CHECK(a.selected_ids == b.selected_ids);
  CHECK(a.chosen_weights == b.chosen_weights);
}

}  // namespace

TEST_SUITE("mckp") {

TEST_CASE("an empty database builds an empty instance") {
  ApplianceDb db;
  const auto inst = build_instance(600.0, db, EventDirection::on);
  CHECK(inst.classes.empty());
  CHECK(inst.capacity == 600);
}

TEST_CASE("instance items carry the Gaussian kernel profits") {
  const auto db = db_with_off_appliance(500.0, 0.0, 1);  // floor sigma 5
  const auto inst = build_instance(600.0, db, EventDirection::on);
  REQUIRE(inst.classes.size() == 1);
  REQUIRE(inst.classes[0].items.size() == 31);

  double peak_profit = 0.0;
  int peak_weight = 0;
  for (const auto& it : inst.classes[0].items) {
    if (it.profit > peak_profit) {
      peak_profit = it.profit;
      peak_weight = it.weight;
    }
    if (it.weight == 515)  // mean + 3 sigma
      CHECK(it.profit == doctest::Approx(100.0 * std::exp(-4.5)).epsilon(1e-9));
  }
  CHECK(peak_weight == 500);
  CHECK(peak_profit == doctest::Approx(100.0));
}

TEST_CASE("eligibility follows the event direction") {
  auto db = db_with_off_appliance(500.0, 0.0, 1);
  db.add_new(200.0, 5);  // second appliance, ON

  const auto on_inst = build_instance(600.0, db, EventDirection::on);
  REQUIRE(on_inst.classes.size() == 1);  // only the OFF appliance
  CHECK(on_inst.classes[0].appliance_id == 1);

  const auto off_inst = build_instance(600.0, db, EventDirection::off);
  REQUIRE(off_inst.classes.size() == 1);  // only the ON appliance
  CHECK(off_inst.classes[0].appliance_id == 2);
}

TEST_CASE("a perfect fill earns profit 100") {
  const auto sol = solve(instance(600, {cls(1, {{600, 100.0}})}));
  CHECK(sol.selects(1));
  CHECK(sol.profit == 100.0);
  CHECK(sol.total_weight() == 600);
}

TEST_CASE("two classes can jointly fill the capacity") {
  const auto inst = instance(600, {cls(1, {{500, 100.0}}), cls(2, {{100, 100.0}})});
  const auto sol = solve(inst);
  CHECK(sol.selects(1));
  CHECK(sol.selects(2));
  CHECK(sol.profit == 100.0);
  check_same_solution(sol, brute_force(inst));
}

TEST_CASE("a partial fill reports the explained fraction") {
  const auto inst = instance(600, {cls(1, {{500, 100.0}})});
  const auto sol = solve(inst);
  CHECK(sol.selects(1));
  CHECK(sol.profit == doctest::Approx(100.0 * 500.0 / 600.0));  // ~83.3, below the 90 gate
  check_same_solution(sol, brute_force(inst));
}

TEST_CASE("ties break toward larger weight, then lower appliance id") {
  // Classes 1 and 2 offer the same single item; only one fits.
  const auto inst = instance(300, {cls(1, {{300, 50.0}}), cls(2, {{300, 50.0}})});
  const auto sol = solve(inst);
  CHECK(sol.selected_ids == std::vector<int>{1});
  check_same_solution(sol, brute_force(inst));

  // Equal-objective choice between one heavy and one light item.
  const auto inst2 = instance(400, {cls(1, {{100, 60.0}, {350, 60.0}})});
  const auto sol2 = solve(inst2);
  CHECK(sol2.chosen_weights == std::vector<int>{350});
  check_same_solution(sol2, brute_force(inst2));
}

TEST_CASE("infeasible items force the skip choice") {
  const auto inst = instance(100, {cls(1, {{500, 90.0}}), cls(2, {{101, 99.0}})});
  const auto sol = solve(inst);
  CHECK(sol.selected_ids.empty());
  CHECK(sol.profit == 0.0);
  CHECK(sol.objective == 0.0);
  check_same_solution(sol, brute_force(inst));
}

TEST_CASE("zero classes solve to the empty selection") {
  const auto sol = solve(instance(500, {}));
  CHECK(sol.selected_ids.empty());
  CHECK(sol.profit == 0.0);
}

TEST_CASE("solver agrees with brute force on random instances") {
  std::mt19937_64 gen(41);
  for (int rep = 0; rep < 200; ++rep) {
    const auto inst = random_instance(gen);
    const auto fast = solve(inst);
    const auto slow = brute_force(inst);
    check_same_solution(fast, slow);
    CHECK(fast.total_weight() <= inst.capacity);
    CHECK(fast.profit >= 0.0);
    CHECK(fast.profit <= 100.0);
    // Full fill if and only if profit is exactly 100.
    CHECK((fast.profit == 100.0) == (fast.total_weight() == inst.capacity));
  }
}

TEST_CASE("adding a class never hurts the objective") {
  std::mt19937_64 gen(42);
  for (int rep = 0; rep < 50; ++rep) {
    auto inst = random_instance(gen);
    const double before = solve(inst).objective;
    MckpClass extra;
    extra.appliance_id = 99;
    extra.items.push_back({std::uniform_int_distribution<int>(1, 1200)(gen),
                           std::uniform_real_distribution<double>(0.0, 100.0)(gen)});
    inst.classes.push_back(extra);
    CHECK(solve(inst).objective >= before);
  }
}

TEST_CASE("brute force refuses oversized instances") {
  MckpInstance inst;
  inst.capacity = 1000;
  for (int c = 0; c < 8; ++c) {  // 32^8 selections
    MckpClass k;
    k.appliance_id = c + 1;
    for (int j = 0; j < 31; ++j) k.items.push_back({j + 1, 1.0});
    inst.classes.push_back(std::move(k));
  }
  CHECK_RAISES(Errc::instance_too_large, brute_force(inst));
}

TEST_CASE("instance files round-trip") {
  testutil::TempDir dir("mckp");
  const auto inst = instance(640, {cls(3, {{500, 99.5}, {510, 62.25}}), cls(7, {{100, 100.0}})});
  save_instance(inst, dir.file("i.txt"));
  const auto back = load_instance(dir.file("i.txt"));
  CHECK(back.capacity == inst.capacity);
  REQUIRE(back.classes.size() == inst.classes.size());
  for (std::size_t c = 0; c < inst.classes.size(); ++c) {
    CHECK(back.classes[c].appliance_id == inst.classes[c].appliance_id);
    REQUIRE(back.classes[c].items.size() == inst.classes[c].items.size());
    for (std::size_t j = 0; j < inst.classes[c].items.size(); ++j) {
      CHECK(back.classes[c].items[j].weight == inst.classes[c].items[j].weight);
      CHECK(back.classes[c].items[j].profit == inst.classes[c].items[j].profit);
    }
  }
}

}  // TEST_SUITE
