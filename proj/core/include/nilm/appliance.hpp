#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nilm/gaussian.hpp"

namespace nilm {

enum class ApplianceState { off, on };

/// One discovered appliance: its state machine, learned Gaussian models and
/// per-sample power trace.
///
/// p_on learns the ON step magnitude: it is seeded when the appliance is
/// first seen and updated at every cycle close with the activation's power.
/// p_off is accumulated but never read by the tracker. Durations are kept
/// in minutes.
struct ApplianceModel {
  int id = 0;
  ApplianceState state = ApplianceState::off;

  GaussianStat p_on;   // ON power, watts
  GaussianStat p_off;  // standby power, watts (stored, unused by tracking)
  GaussianStat d_on;   // ON duration, minutes
  GaussianStat d_off;  // OFF duration, minutes

  std::vector<double> trace;   // watts per processed sample
  double current_power = 0.0;  // watts while ON, 0 while OFF
  std::optional<std::size_t> last_transition_index;

  /// OFF -> ON. Records the elapsed OFF duration when a prior transition
  /// exists. Throws AlreadyOn if the appliance is already running.
  void turn_on(std::size_t index, double delta_watts, double sample_period);

  /// ON -> OFF. Folds the activation's power into p_on and the elapsed ON
  /// minutes into d_on. The observed step magnitude is accepted for
  /// symmetry with turn_on but the stats use the stored activation power.
  /// Throws AlreadyOff when not running.
  void turn_off(std::size_t index, double delta_watts, double sample_period);

  /// |delta - mean(p_on)| / sigma_eff, the one-dimensional distance of an
  /// observed step from this appliance's ON-power model.
  double mahalanobis(double delta) const;

  /// Integer candidate watt values covering mean(p_on) +/- 3 sigma_eff,
  /// clipped to be at least 1 W.
  std::vector<int> candidate_powers() const;

  bool is_on() const { return state == ApplianceState::on; }
};

/// The growing database of appliances plus the running minimum power, the
/// share of the aggregate attributed to constantly-ON loads.
struct ApplianceDb {
  std::vector<ApplianceModel> appliances;
  std::optional<double> min_on_power;  // watts; unset until the first sample
  double sample_period = 1.0;          // seconds

  std::size_t size() const { return appliances.size(); }

  /// Appends a freshly discovered appliance, born ON with its power model
  /// seeded by the observed step. Returns the 1-based id.
  int add_new(double delta_watts, std::size_t index);

  void update_min_power(double y_t);
  double min_power_or(double fallback) const { return min_on_power.value_or(fallback); }

  ApplianceModel* find(int id);
  const ApplianceModel* find(int id) const;
};

const char* appliance_state_name(ApplianceState state);

/// Text round-trip of the database, one `appliance` block per model. Traces
/// are not serialized; the dump captures the learned statistics and state.
void save_db(const ApplianceDb& db, const std::string& path);
ApplianceDb load_db(const std::string& path);

}  // namespace nilm
