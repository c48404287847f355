#pragma once

#include <cstddef>
#include <vector>

#include "nilm/power_trace.hpp"

namespace nilm {

inline constexpr double kDefaultEventThresholdW = 60.0;

enum class EventKind { on, off };

/// A super-threshold step in the filtered signal. `index` is the sample
/// where the new level starts; `delta` is signed and |delta| >= threshold.
struct Event {
  std::size_t index = 0;
  double time = 0.0;  // seconds from trace start
  double delta = 0.0; // watts
  EventKind kind = EventKind::on;
};

/// Thresholded-derivative event detector. One event per sample whose delta
/// magnitude reaches the threshold; same-direction super-threshold deltas
/// within two samples of each other are coalesced into a single event with
/// the summed delta (edge sharpening can leave one physical switch split
/// across two samples).
std::vector<Event> detect_events(const PowerTrace& y, double threshold = kDefaultEventThresholdW);

const char* event_kind_name(EventKind kind);

}  // namespace nilm
