#pragma once

#include <string>

#include "nilm/filters.hpp"
#include "nilm/tracker.hpp"

namespace nilm {

/// Every tunable of the processing chain in one place; defaults reproduce
/// the documented constants (s=60 W, profit gate 90, Mahalanobis gate 20).
struct PipelineConfig {
  FilterConfig filter;
  TrackerConfig tracker;
  void validate() const;
};

/// Flat `key = value` file; unknown keys are rejected so typos surface.
PipelineConfig load_config(const std::string& path);
void save_config(const PipelineConfig& config, const std::string& path);

}  // namespace nilm
