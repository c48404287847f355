#include "nilm/events.hpp"

#include <cmath>

#include "nilm/error.hpp"

namespace nilm {

const char* event_kind_name(EventKind kind) { return kind == EventKind::on ? "ON" : "OFF"; }

std::vector<Event> detect_events(const PowerTrace& y, double threshold) {
  if (!(threshold > 0.0)) raise(Errc::invalid_config, "event threshold must be > 0");
  if (y.size() < 2) raise(Errc::trace_too_short, "need at least 2 samples to differentiate");

  std::vector<Event> out;
  std::size_t group_tail = 0;  // index of the last delta folded into out.back()
  for (std::size_t t = 1; t < y.size(); ++t) {
    const double delta = y.samples[t] - y.samples[t - 1];
    if (std::abs(delta) < threshold) continue;

    const EventKind kind = delta > 0 ? EventKind::on : EventKind::off;
    if (!out.empty() && out.back().kind == kind && t - group_tail <= 2) {
      // One physical switch split across nearby samples: sum into one event.
      out.back().delta += delta;
      group_tail = t;
      continue;
    }
    out.push_back(Event{t, static_cast<double>(t) * y.sample_period, delta, kind});
    group_tail = t;
  }
  return out;
}

}  // namespace nilm
