#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilm/appliance.hpp"

namespace nilm {

enum class EventDirection { on, off };

struct MckpItem {
  int weight = 0;      // watts
  double profit = 0.0; // 0..100 Gaussian-kernel score
};

struct MckpClass {
  int appliance_id = 0;
  std::vector<MckpItem> items;  // the skip item (0, 0) is implicit
};

/// Multiple-choice knapsack: pick at most one item per class so that total
/// weight stays within capacity and total item profit is maximal.
struct MckpInstance {
  int capacity = 0;  // watts, c = |delta y|
  std::vector<MckpClass> classes;
};

struct MckpSolution {
  std::vector<int> selected_ids;    // appliance ids with a non-skip choice
  std::vector<int> chosen_weights;  // watts, aligned with selected_ids
  double objective = 0.0;           // sum of chosen item profits
  double profit = 0.0;              // 100 * explained fraction of capacity

  int total_weight() const;
  bool selects(int appliance_id) const;
};

/// Builds the per-event instance: one class per appliance in the opposite
/// state of the event direction, items from candidate_powers() scored by
/// the appliance's ON-power Gaussian kernel,
///   p_ij = 100 * exp(-(w - mu)^2 / (2 sigma_eff^2)).
MckpInstance build_instance(double delta_abs, const ApplianceDb& db,
                            EventDirection direction);

/// Exact optimum by dynamic programming over integer capacity.
///
/// Item profits are quantized to integer micro-units before summation so
/// the DP objective is order-independent and comparable to brute_force
/// without floating-point slack. Ties are broken toward larger total
/// weight, then toward the selection whose per-class weight vector is
/// lexicographically largest in class order (earlier classes carry lower
/// appliance ids, so lower ids win remaining ties).
///
/// The returned profit field is the explained fraction of capacity,
/// 100 * total_weight / capacity, clamped to [0, 100]; the kernel sum the
/// DP maximized is reported separately as objective.
MckpSolution solve(const MckpInstance& instance);

/// Exhaustive reference solver with the identical objective and tie-break.
/// Refuses instances whose selection count (including skips) exceeds 1e7.
MckpSolution brute_force(const MckpInstance& instance);

/// Text round-trip for the debug CLI: `capacity <w>`, then per class a
/// `class <id>` line followed by `<weight> <profit>` item lines.
MckpInstance load_instance(const std::string& path);
void save_instance(const MckpInstance& instance, const std::string& path);

const char* event_direction_name(EventDirection direction);

}  // namespace nilm
