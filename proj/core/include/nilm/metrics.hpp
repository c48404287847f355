#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nilm/labelling.hpp"
#include "nilm/power_trace.hpp"
#include "nilm/tracker.hpp"

namespace nilm {

/// Left-Riemann energy integral at the trace's native sample period.
double energy_kwh(const PowerTrace& trace);

/// 100 * estimate / truth, reported raw (can exceed 100). Raises
/// ZeroTruthEnergy when the reference is not positive.
double accuracy(double estimate_kwh, double truth_kwh);
double accuracy(const PowerTrace& estimate, const PowerTrace& truth);

struct EnergyRow {
  std::string label;
  std::optional<double> truth_kwh;
  std::optional<double> filtered_kwh;
  double tracked_kwh = 0.0;
  std::optional<double> accuracy_vs_truth;     // 100 * tracked / truth
  std::optional<double> accuracy_vs_filtered;  // 100 * tracked / filtered
};

/// Per-label energy table plus the aggregate row, where tracked aggregate
/// is the sum of the per-label tracked energies.
struct EnergyReport {
  std::vector<EnergyRow> per_label;
  EnergyRow aggregate;
};

/// Optional reference signals for a report. truth maps label -> sub-metered
/// ground-truth trace; filtered_truth holds the same channels after the
/// filter pipeline, exposing filter drift separately from tracking error.
struct ReportInputs {
  std::map<std::string, PowerTrace> truth;
  std::map<std::string, PowerTrace> filtered_truth;
  std::optional<PowerTrace> raw_aggregate;
  std::optional<PowerTrace> filtered_aggregate;
};

EnergyReport build_report(const ReportInputs& inputs,
                          const DisaggregationResult& result,
                          const LabelAssignment& assignment);

void write_report_csv(const EnergyReport& report, const std::string& path);

/// Aligned columns `index,truth,tracked` for external plotting.
void write_plot_data(const PowerTrace& truth, const PowerTrace& tracked,
                     const std::string& path);

}  // namespace nilm
