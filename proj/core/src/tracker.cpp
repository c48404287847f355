#include "nilm/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nilm/error.hpp"
#include "nilm/mckp.hpp"

namespace nilm {

void TrackerConfig::validate() const {
  if (!(threshold_s > 0.0))
    raise(Errc::invalid_config, "threshold_s must be positive");
  if (!(profit_gate > 0.0) || profit_gate > 100.0)
    raise(Errc::invalid_config, "profit_gate must be in (0,100]");
  if (!(mahalanobis_gate > 0.0))
    raise(Errc::invalid_config, "mahalanobis_gate must be positive");
}

const char* decision_path_name(DecisionPath path) {
  switch (path) {
    case DecisionPath::mckp: return "MCKP";
    case DecisionPath::mahalanobis: return "MAHALANOBIS";
    case DecisionPath::new_appliance: return "NEW";
    case DecisionPath::fallback: return "FALLBACK";
    case DecisionPath::ignored: return "IGNORED";
  }
  return "?";
}

namespace {

EventDecision decide_off(ApplianceDb& db, const Event& ev, const TrackerConfig& cfg) {
  EventDecision dec{ev.index, ev.delta, DecisionPath::ignored, 0.0, {}};
  bool any_on = false;
  for (const auto& a : db.appliances) any_on |= a.is_on();
  if (!any_on) return dec;  // nothing to switch off; logged as anomaly

  const double magnitude = std::abs(ev.delta);
  const MckpSolution sol = solve(build_instance(magnitude, db, EventDirection::off));
  dec.profit = sol.profit;
  if (sol.profit > cfg.profit_gate && !sol.selected_ids.empty()) {
    dec.path = DecisionPath::mckp;
    for (int id : sol.selected_ids) {
      db.find(id)->turn_off(ev.index, magnitude, db.sample_period);
      dec.appliance_ids.push_back(id);
    }
    return dec;
  }

  // Fallback: the single ON appliance whose power model makes the observed
  // magnitude most likely. Ties resolve to the lowest id via scan order.
  const ApplianceModel* best = nullptr;
  double best_density = -1.0;
  for (const auto& a : db.appliances) {
    if (!a.is_on()) continue;
    const double d = a.p_on.pdf(magnitude, kPowerSigmaFloorW);
    if (d > best_density) {
      best_density = d;
      best = &a;
    }
  }
  dec.path = DecisionPath::fallback;
  db.find(best->id)->turn_off(ev.index, magnitude, db.sample_period);
  dec.appliance_ids.push_back(best->id);
  return dec;
}

EventDecision decide_on(ApplianceDb& db, const Event& ev, const TrackerConfig& cfg) {
  EventDecision dec{ev.index, ev.delta, DecisionPath::new_appliance, 0.0, {}};
  bool any_off = false;
  for (const auto& a : db.appliances) any_off |= !a.is_on();

  if (any_off) {
    const MckpSolution sol = solve(build_instance(ev.delta, db, EventDirection::on));
    dec.profit = sol.profit;
    if (sol.profit > cfg.profit_gate && !sol.selected_ids.empty()) {
      dec.path = DecisionPath::mckp;
      for (std::size_t k = 0; k < sol.selected_ids.size(); ++k) {
        db.find(sol.selected_ids[k])
            ->turn_on(ev.index, sol.chosen_weights[k], db.sample_period);
        dec.appliance_ids.push_back(sol.selected_ids[k]);
      }
      return dec;
    }
    const ApplianceModel* best = nullptr;
    double best_dist = 0.0;
    for (const auto& a : db.appliances) {
      if (a.is_on()) continue;
      const double d = a.mahalanobis(ev.delta);
      if (!best || d < best_dist) {
        best_dist = d;
        best = &a;
      }
    }
    if (best_dist < cfg.mahalanobis_gate) {
      // Matched a known appliance; take the observed step as its power so
      // the reconstruction follows the actual signal rather than the mean.
      dec.path = DecisionPath::mahalanobis;
      db.find(best->id)->turn_on(ev.index, ev.delta, db.sample_period);
      dec.appliance_ids.push_back(best->id);
      return dec;
    }
  }

  dec.appliance_ids.push_back(db.add_new(ev.delta, ev.index));
  return dec;
}

DisaggregationResult run_engine(const std::vector<Event>& events, ApplianceDb db,
                                const TrackerConfig& cfg, std::size_t length,
                                const PowerTrace* y) {
  cfg.validate();
  if (y) {
    if (y->size() != length)
      raise(Errc::invalid_config, "trace length does not match replay length");
    db.sample_period = y->sample_period;
  }
  for (std::size_t k = 0; k < events.size(); ++k) {
    if (events[k].index >= length)
      raise(Errc::invalid_config,
            "event index " + std::to_string(events[k].index) + " beyond trace");
    if (k > 0 && events[k].index <= events[k - 1].index)
      raise(Errc::invalid_config, "events not ordered by index");
  }

  DisaggregationResult out;
  out.residual_trace.sample_period = db.sample_period;
  out.min_power_trace.sample_period = db.sample_period;
  if (y) {
    out.residual_trace.start_epoch = y->start_epoch;
    out.min_power_trace.start_epoch = y->start_epoch;
  }
  out.residual_trace.samples.resize(length, 0.0);
  out.min_power_trace.samples.resize(length, 0.0);

  std::size_t next_event = 0;
  for (std::size_t t = 0; t < length; ++t) {
    while (next_event < events.size() && events[next_event].index == t) {
      const Event& ev = events[next_event++];
      out.decisions.push_back(ev.kind == EventKind::off ? decide_off(db, ev, cfg)
                                                        : decide_on(db, ev, cfg));
    }
    double attributed = 0.0;
    for (auto& a : db.appliances) {
      if (a.trace.size() < t) a.trace.resize(t, 0.0);  // born mid-trace
      a.trace.push_back(a.current_power);
      attributed += a.current_power;
    }
    if (y) {
      const double yt = (*y)[t];
      db.update_min_power(yt);
      const double floor = db.min_power_or(0.0);
      out.min_power_trace.samples[t] = floor;
      out.residual_trace.samples[t] = yt - attributed - floor;
    }
  }

  for (const auto& a : db.appliances) {
    PowerTrace tr;
    tr.sample_period = db.sample_period;
    tr.start_epoch = out.residual_trace.start_epoch;
    tr.samples = a.trace;
    out.per_appliance_traces.emplace(a.id, std::move(tr));
  }
  out.db = std::move(db);
  return out;
}

}  // namespace

DisaggregationResult track(const PowerTrace& y, const TrackerConfig& config) {
  config.validate();
  const std::vector<Event> events = detect_events(y, config.threshold_s);
  ApplianceDb db;
  db.sample_period = y.sample_period;
  return run_engine(events, std::move(db), config, y.size(), &y);
}

DisaggregationResult replay_events(const std::vector<Event>& events, ApplianceDb db,
                                   const TrackerConfig& config, std::size_t length,
                                   const PowerTrace* y) {
  return run_engine(events, std::move(db), config, length, y);
}

}  // namespace nilm
