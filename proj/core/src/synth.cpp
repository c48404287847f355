#include "nilm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "nilm/error.hpp"
#include "nilm/metrics.hpp"
#include "nilm/rng.hpp"

namespace nilm {

void Scenario::validate() const {
  auto bad = [](const std::string& what) { raise(Errc::invalid_scenario, what); };
  if (duration_samples == 0) bad("duration_samples must be positive");
  if (!(sample_period > 0.0)) bad("sample_period must be positive");
  if (baseline_watts < 0.0) bad("baseline_watts must be non-negative");
  if (noise_sigma < 0.0) bad("noise_sigma must be non-negative");
  if (spike_rate < 0.0 || spike_rate > 1.0) bad("spike_rate must be in [0,1]");
  if (spike_magnitude < 0.0) bad("spike_magnitude must be non-negative");
  std::set<std::string> names;
  for (const auto& a : appliances) {
    if (a.name.empty()) bad("appliance name must be non-empty");
    if (!names.insert(a.name).second) bad("duplicate appliance name " + a.name);
    if (!(a.mean_on_power > 0.0)) bad(a.name + ": mean_on_power must be positive");
    if (a.power_jitter < 0.0) bad(a.name + ": power_jitter must be non-negative");
    if (!(a.mean_on_minutes > 0.0)) bad(a.name + ": mean_on_minutes must be positive");
    if (!(a.mean_off_minutes > 0.0)) bad(a.name + ": mean_off_minutes must be positive");
    if (a.duty_sigma_minutes < 0.0) bad(a.name + ": duty_sigma_minutes must be non-negative");
  }
}

namespace {

std::size_t minutes_to_samples(double minutes, double period) {
  const auto n = static_cast<std::size_t>(std::llround(minutes * 60.0 / period));
  return std::max<std::size_t>(n, 3);  // keep cycles long enough to be events, not spikes
}

std::vector<double> simulate_appliance(const ApplianceSpec& spec, std::size_t n,
                                       double period, Rng& rng) {
  std::vector<double> trace(n, 0.0);
  bool on = false;
  // Stagger the first activation so appliances do not all switch at t=0.
  std::size_t remaining = static_cast<std::size_t>(
      1.0 + rng.uniform() * static_cast<double>(minutes_to_samples(
                                spec.mean_off_minutes, period)));
  double level = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (remaining == 0) {
      on = !on;
      if (on) {
        level = std::max(1.0, rng.truncated_normal(spec.mean_on_power, spec.power_jitter));
        remaining = minutes_to_samples(
            rng.truncated_normal(spec.mean_on_minutes, spec.duty_sigma_minutes), period);
      } else {
        level = 0.0;
        remaining = minutes_to_samples(
            rng.truncated_normal(spec.mean_off_minutes, spec.duty_sigma_minutes), period);
      }
    }
    trace[t] = on ? level : 0.0;
    --remaining;
  }
  return trace;
}

}  // namespace

SynthResult generate(const Scenario& scenario) {
  scenario.validate();
  const std::size_t n = scenario.duration_samples;

  SynthResult out;
  out.aggregate.sample_period = scenario.sample_period;
  out.aggregate.samples.assign(n, scenario.baseline_watts);

  for (std::size_t i = 0; i < scenario.appliances.size(); ++i) {
    const auto& spec = scenario.appliances[i];
    Rng sub(scenario.seed * 1000003ULL + i + 1);
    PowerTrace tr;
    tr.sample_period = scenario.sample_period;
    tr.samples = simulate_appliance(spec, n, scenario.sample_period, sub);
    for (std::size_t t = 0; t < n; ++t) out.aggregate.samples[t] += tr.samples[t];
    out.truth_kwh[spec.name] = energy_kwh(tr);
    out.truth.emplace(spec.name, std::move(tr));
  }

  Rng noise(scenario.seed);
  for (std::size_t t = 0; t < n; ++t) {
    double v = out.aggregate.samples[t];
    if (scenario.noise_sigma > 0.0) v += noise.normal(0.0, scenario.noise_sigma);
    if (scenario.spike_rate > 0.0 && noise.bernoulli(scenario.spike_rate))
      v += scenario.spike_magnitude;
    out.aggregate.samples[t] = std::max(v, 0.0);
  }
  return out;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) raise(Errc::io_error, "cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::invalid_scenario, std::string("bad JSON: ") + e.what());
  }
  Scenario s;
  try {
    s.baseline_watts = j.value("baseline_watts", 0.0);
    s.noise_sigma = j.value("noise_sigma", 0.0);
    s.spike_rate = j.value("spike_rate", 0.0);
    s.spike_magnitude = j.value("spike_magnitude", 0.0);
    s.duration_samples = j.value("duration_samples", std::size_t{0});
    s.seed = j.value("seed", std::uint64_t{1});
    s.sample_period = j.value("sample_period", 1.0);
    for (const auto& ja : j.value("appliances", nlohmann::json::array())) {
      ApplianceSpec a;
      a.name = ja.at("name").get<std::string>();
      a.mean_on_power = ja.at("mean_on_power").get<double>();
      a.power_jitter = ja.value("power_jitter", 0.0);
      a.mean_on_minutes = ja.at("mean_on_minutes").get<double>();
      a.mean_off_minutes = ja.at("mean_off_minutes").get<double>();
      a.duty_sigma_minutes = ja.value("duty_sigma_minutes", 0.0);
      s.appliances.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::invalid_scenario, std::string("bad scenario field: ") + e.what());
  }
  s.validate();
  return s;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  nlohmann::json j;
  j["baseline_watts"] = scenario.baseline_watts;
  j["noise_sigma"] = scenario.noise_sigma;
  j["spike_rate"] = scenario.spike_rate;
  j["spike_magnitude"] = scenario.spike_magnitude;
  j["duration_samples"] = scenario.duration_samples;
  j["seed"] = scenario.seed;
  j["sample_period"] = scenario.sample_period;
  j["appliances"] = nlohmann::json::array();
  for (const auto& a : scenario.appliances) {
    j["appliances"].push_back({{"name", a.name},
                               {"mean_on_power", a.mean_on_power},
                               {"power_jitter", a.power_jitter},
                               {"mean_on_minutes", a.mean_on_minutes},
                               {"mean_off_minutes", a.mean_off_minutes},
                               {"duty_sigma_minutes", a.duty_sigma_minutes}});
  }
  std::ofstream os(path);
  if (!os) raise(Errc::io_error, "cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
  if (!os) raise(Errc::io_error, "write failed for " + path);
}

}  // namespace nilm
