#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilm/power_trace.hpp"

namespace nilm {

struct ApplianceSpec {
  std::string name;
  double mean_on_power = 0.0;      // watts
  double power_jitter = 0.0;       // per-activation sigma, watts
  double mean_on_minutes = 0.0;    // per cycle
  double mean_off_minutes = 0.0;   // between cycles
  double duty_sigma_minutes = 0.0; // sigma of both durations
};

struct Scenario {
  std::vector<ApplianceSpec> appliances;
  double baseline_watts = 0.0;   // constantly-ON load
  double noise_sigma = 0.0;      // watts, per sample
  double spike_rate = 0.0;       // probability per sample
  double spike_magnitude = 0.0;  // watts, one-sample positive impulse
  std::size_t duration_samples = 0;
  std::uint64_t seed = 1;
  double sample_period = 1.0;  // seconds

  void validate() const;  // raises InvalidScenario
};

struct SynthResult {
  PowerTrace aggregate;                      // baseline + loads + noise + spikes
  std::map<std::string, PowerTrace> truth;   // noise-free per-appliance traces
  std::map<std::string, double> truth_kwh;   // energies of the truth traces
};

/// Simulates each appliance as an independent ON/OFF duty cycle (durations
/// and per-activation power drawn from its spec, clipped to +/-3 sigma) and
/// sums them with baseline, Gaussian noise and one-sample inrush spikes.
/// Fully determined by the scenario seed; each appliance runs on its own
/// sub-generator so schedules are independent of the noise draws.
SynthResult generate(const Scenario& scenario);

/// JSON round-trip of a scenario file.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace nilm
