#include "nilm/mckp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nilm/error.hpp"

namespace nilm {

const char* event_direction_name(EventDirection direction) {
  return direction == EventDirection::on ? "on" : "off";
}

int MckpSolution::total_weight() const {
  return std::accumulate(chosen_weights.begin(), chosen_weights.end(), 0);
}

bool MckpSolution::selects(int appliance_id) const {
  return std::find(selected_ids.begin(), selected_ids.end(), appliance_id) !=
         selected_ids.end();
}

namespace {

// Profits live in [0,100]; micro-units keep every sum exactly representable
// in int64 so DP and enumeration agree bit-for-bit.
std::int64_t to_micro(double profit) {
  return std::llround(profit * 1e6);
}

void validate(const MckpInstance& instance) {
  if (instance.capacity < 1)
    raise(Errc::invalid_config, "mckp capacity must be >= 1, got " +
                                    std::to_string(instance.capacity));
  for (const auto& cls : instance.classes)
    for (const auto& item : cls.items) {
      if (item.weight < 1)
        raise(Errc::invalid_config,
              "mckp item weight must be >= 1 in class " + std::to_string(cls.appliance_id));
      if (!(item.profit >= 0.0) || !(item.profit <= 100.0))
        raise(Errc::invalid_config,
              "mckp item profit outside [0,100] in class " + std::to_string(cls.appliance_id));
    }
}

double explained_fraction(int total_weight, int capacity) {
  const double p = 100.0 * static_cast<double>(total_weight) / capacity;
  return std::clamp(p, 0.0, 100.0);
}

}  // namespace

MckpInstance build_instance(double delta_abs, const ApplianceDb& db,
                            EventDirection direction) {
  MckpInstance inst;
  inst.capacity = std::max(1, static_cast<int>(std::lround(std::abs(delta_abs))));
  const ApplianceState wanted =
      direction == EventDirection::on ? ApplianceState::off : ApplianceState::on;
  for (const auto& a : db.appliances) {
    if (a.state != wanted || a.p_on.empty()) continue;
    MckpClass cls;
    cls.appliance_id = a.id;
    const double mu = a.p_on.mean;
    const double sigma = a.p_on.sigma_eff(kPowerSigmaFloorW);
    for (int w : a.candidate_powers()) {
      const double z = (w - mu) / sigma;
      cls.items.push_back({w, 100.0 * std::exp(-0.5 * z * z)});
    }
    inst.classes.push_back(std::move(cls));
  }
  return inst;
}

MckpSolution solve(const MckpInstance& instance) {
  validate(instance);
  const std::size_t m = instance.classes.size();
  const std::size_t cols = static_cast<std::size_t>(instance.capacity) + 1;

  // Suffix DP: row i holds, per residual budget, the lexicographic maximum
  // of (micro objective, total weight) achievable with classes i..m-1.
  std::vector<std::int64_t> obj((m + 1) * cols, 0);
  std::vector<int> wt((m + 1) * cols, 0);
  for (std::size_t i = m; i-- > 0;) {
    const auto* next_obj = obj.data() + (i + 1) * cols;
    const auto* next_wt = wt.data() + (i + 1) * cols;
    auto* row_obj = obj.data() + i * cols;
    auto* row_wt = wt.data() + i * cols;
    for (std::size_t r = 0; r < cols; ++r) {
      std::int64_t best_obj = next_obj[r];  // the skip item
      int best_wt = next_wt[r];
      for (const auto& item : instance.classes[i].items) {
        const auto w = static_cast<std::size_t>(item.weight);
        if (w > r) continue;
        const std::int64_t o = to_micro(item.profit) + next_obj[r - w];
        const int t = item.weight + next_wt[r - w];
        if (o > best_obj || (o == best_obj && t > best_wt)) {
          best_obj = o;
          best_wt = t;
        }
      }
      row_obj[r] = best_obj;
      row_wt[r] = best_wt;
    }
  }

  // Forward reconstruction: at each class take the heaviest item that still
  // reaches the table's optimum pair. Skips only win when no item does,
  // which realizes the "larger weight, then lower appliance id" tie-break.
  MckpSolution sol;
  std::size_t r = cols - 1;
  for (std::size_t i = 0; i < m; ++i) {
    const auto* row_obj = obj.data() + i * cols;
    const auto* row_wt = wt.data() + i * cols;
    const auto* next_obj = obj.data() + (i + 1) * cols;
    const auto* next_wt = wt.data() + (i + 1) * cols;
    int pick = 0;  // weight 0 = skip
    for (const auto& item : instance.classes[i].items) {
      const auto w = static_cast<std::size_t>(item.weight);
      if (w > r || item.weight <= pick) continue;
      if (to_micro(item.profit) + next_obj[r - w] == row_obj[r] &&
          item.weight + next_wt[r - w] == row_wt[r])
        pick = item.weight;
    }
    if (pick > 0) {
      sol.selected_ids.push_back(instance.classes[i].appliance_id);
      sol.chosen_weights.push_back(pick);
      r -= static_cast<std::size_t>(pick);
    }
  }

  sol.objective = static_cast<double>(obj[cols - 1]) / 1e6;
  sol.profit = explained_fraction(sol.total_weight(), instance.capacity);
  return sol;
}

MckpSolution brute_force(const MckpInstance& instance) {
  validate(instance);
  double combos = 1.0;
  for (const auto& cls : instance.classes) combos *= static_cast<double>(cls.items.size() + 1);
  if (combos > 1e7)
    raise(Errc::instance_too_large,
          "brute force over " + std::to_string(combos) + " selections");

  const std::size_t m = instance.classes.size();
  std::vector<int> cur(m, 0), best(m, 0);
  std::int64_t best_obj = -1;
  int best_wt = -1;

  // Depth-first over one choice per class, keeping the winner under the
  // same (objective, weight, weight-vector) order the DP realizes.
  auto consider = [&](std::int64_t o, int w) {
    if (o != best_obj ? o > best_obj
                      : (w != best_wt ? w > best_wt
                                      : std::lexicographical_compare(
                                            best.begin(), best.end(), cur.begin(), cur.end()))) {
      best_obj = o;
      best_wt = w;
      best = cur;
    }
  };
  auto walk = [&](auto&& self, std::size_t i, std::int64_t o, int w) -> void {
    if (i == m) {
      consider(o, w);
      return;
    }
    cur[i] = 0;
    self(self, i + 1, o, w);
    for (const auto& item : instance.classes[i].items) {
      if (item.weight > instance.capacity - w) continue;
      cur[i] = item.weight;
      self(self, i + 1, o + to_micro(item.profit), w + item.weight);
    }
    cur[i] = 0;
  };
  walk(walk, 0, 0, 0);

  MckpSolution sol;
  for (std::size_t i = 0; i < m; ++i)
    if (best[i] > 0) {
      sol.selected_ids.push_back(instance.classes[i].appliance_id);
      sol.chosen_weights.push_back(best[i]);
    }
  sol.objective = static_cast<double>(std::max<std::int64_t>(best_obj, 0)) / 1e6;
  sol.profit = explained_fraction(sol.total_weight(), instance.capacity);
  return sol;
}

MckpInstance load_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) raise(Errc::io_error, "cannot open " + path);
  MckpInstance inst;
  std::string line;
  std::size_t lineno = 0;
  bool have_capacity = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first) || first[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (first == "capacity") {
      if (!(ss >> inst.capacity)) raise(Errc::malformed_row, "bad capacity at " + where);
      have_capacity = true;
    } else if (first == "class") {
      MckpClass cls;
      if (!(ss >> cls.appliance_id)) raise(Errc::malformed_row, "bad class id at " + where);
      inst.classes.push_back(std::move(cls));
    } else {
      if (inst.classes.empty())
        raise(Errc::malformed_row, "item before any class at " + where);
      MckpItem item;
      auto [p, ec] = std::from_chars(first.data(), first.data() + first.size(), item.weight);
      if (ec != std::errc{} || p != first.data() + first.size() || !(ss >> item.profit))
        raise(Errc::malformed_row, "bad item line at " + where);
      inst.classes.back().items.push_back(item);
    }
  }
  if (!have_capacity) raise(Errc::malformed_row, "no capacity line in " + path);
  validate(inst);
  return inst;
}

void save_instance(const MckpInstance& instance, const std::string& path) {
  std::ofstream os(path);
  if (!os) raise(Errc::io_error, "cannot open " + path + " for writing");
  os << "# mckp-instance v1\n";
  os << "capacity " << instance.capacity << '\n';
  char buf[40];
  for (const auto& cls : instance.classes) {
    os << "class " << cls.appliance_id << '\n';
    for (const auto& item : cls.items) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, item.profit);
      os << item.weight << ' ' << std::string_view(buf, static_cast<std::size_t>(p - buf))
         << '\n';
    }
  }
  if (!os) raise(Errc::io_error, "write failed for " + path);
}

}  // namespace nilm
