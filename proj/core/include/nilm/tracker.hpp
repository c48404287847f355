#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "nilm/appliance.hpp"
#include "nilm/events.hpp"
#include "nilm/power_trace.hpp"

namespace nilm {

struct TrackerConfig {
  double threshold_s = kDefaultEventThresholdW;  // watts
  double profit_gate = 90.0;                     // MCKP acceptance, strict >
  double mahalanobis_gate = 20.0;                // sigma units, strict <
  void validate() const;
};

/// Which branch of the per-event decision tree fired.
enum class DecisionPath { mckp, mahalanobis, new_appliance, fallback, ignored };

struct EventDecision {
  std::size_t index = 0;
  double delta = 0.0;
  DecisionPath path = DecisionPath::ignored;
  double profit = 0.0;            // MCKP explained fraction when one was solved
  std::vector<int> appliance_ids; // appliances switched (or created) by this event
};

struct DisaggregationResult {
  ApplianceDb db;
  std::map<int, PowerTrace> per_appliance_traces;
  PowerTrace residual_trace;   // y_t - attributed - min-ON power
  PowerTrace min_power_trace;  // running minimum observed power per sample
  std::vector<EventDecision> decisions;
};

/// Runs the event-driven tracking loop over a filtered trace: detect events
/// at threshold_s, then per event either attribute it via MCKP (profit above
/// the gate), match a single appliance by Mahalanobis distance (ON events)
/// or Gaussian-density argmax (OFF events), or grow the database. Every
/// appliance's trace carries its current power at each sample.
DisaggregationResult track(const PowerTrace& y, const TrackerConfig& config = {});

/// Same decision logic driven by a precomputed, index-ordered event list
/// over `length` samples. When `y` is given, the running minimum power and
/// the residual are computed from it; otherwise both stay zero.
DisaggregationResult replay_events(const std::vector<Event>& events, ApplianceDb db,
                                   const TrackerConfig& config, std::size_t length,
                                   const PowerTrace* y = nullptr);

const char* decision_path_name(DecisionPath path);

}  // namespace nilm
