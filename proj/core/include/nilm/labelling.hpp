#pragma once

#include <map>
#include <string>
#include <vector>

#include "nilm/tracker.hpp"

namespace nilm {

inline constexpr const char* kUnknownLabel = "unknown";

/// Half-open rectangle [d_min,d_max) minutes x [p_min,p_max) watts mapping
/// to an appliance label and display colour.
struct PartitionCell {
  double d_min = 0.0, d_max = 0.0;  // minutes
  double p_min = 0.0, p_max = 0.0;  // watts
  std::string label;
  std::string color;
  bool contains(double duration_min, double power_w) const {
    return duration_min >= d_min && duration_min < d_max && power_w >= p_min &&
           power_w < p_max;
  }
  bool overlaps(const PartitionCell& other) const {
    return d_min < other.d_max && other.d_min < d_max && p_min < other.p_max &&
           other.p_min < p_max;
  }
};

struct PartitionMap {
  std::string region;
  std::vector<PartitionCell> cells;
};

/// Checks cell well-formedness and pairwise non-overlap. Raises
/// OverlappingCells / MalformedCell.
void validate_map(const PartitionMap& map);

/// Loads the cells of one region from a text map file with lines
/// `region,d_min,d_max,p_min,p_max,label,color`. Raises UnknownRegion when
/// the region has no rows at all.
PartitionMap load_partition_map(const std::string& path, const std::string& region);

/// The unique cell containing the point, or nullptr.
const PartitionCell* lookup_cell(const PartitionMap& map, double duration_min,
                                 double power_w);

/// Label of the containing cell, or "unknown".
std::string lookup(const PartitionMap& map, double duration_min, double power_w);

/// Every appliance mapped to exactly one label via its mean ON duration and
/// mean ON power; appliances without a completed cycle stay "unknown".
struct LabelAssignment {
  std::map<std::string, std::vector<int>> members;  // label -> appliance ids
  std::map<int, std::string> label_of;              // appliance id -> label
  std::map<int, std::string> color_of;              // empty string for unknown
};

LabelAssignment assign_labels(const ApplianceDb& db, const PartitionMap& map);

/// Collapses appliances sharing a non-"unknown" label into one appliance
/// (the smallest id survives): traces are summed per sample and the four
/// Gaussian stats are count-weighted pooled, so attributed energy is
/// conserved. Unlabelled appliances are never merged.
DisaggregationResult merge_same_label(const DisaggregationResult& result,
                                      const LabelAssignment& assignment);

}  // namespace nilm
