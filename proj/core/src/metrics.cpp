#include "nilm/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "nilm/error.hpp"

namespace nilm {

double energy_kwh(const PowerTrace& trace) {
  double watt_seconds = 0.0;
  for (double w : trace.samples) watt_seconds += w;
  return watt_seconds * trace.sample_period / 3600.0 / 1000.0;
}

double accuracy(double estimate_kwh, double truth_kwh) {
  if (!(truth_kwh > 0.0))
    raise(Errc::zero_truth_energy, "reference energy must be positive");
  return 100.0 * estimate_kwh / truth_kwh;
}

double accuracy(const PowerTrace& estimate, const PowerTrace& truth) {
  return accuracy(energy_kwh(estimate), energy_kwh(truth));
}

namespace {

std::string fmt(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string();
}

void fill_accuracies(EnergyRow& row) {
  if (row.truth_kwh && *row.truth_kwh > 0.0)
    row.accuracy_vs_truth = accuracy(row.tracked_kwh, *row.truth_kwh);
  if (row.filtered_kwh && *row.filtered_kwh > 0.0)
    row.accuracy_vs_filtered = accuracy(row.tracked_kwh, *row.filtered_kwh);
}

}  // namespace

EnergyReport build_report(const ReportInputs& inputs,
                          const DisaggregationResult& result,
                          const LabelAssignment& assignment) {
  // Tracked energy per label = sum over that label's appliances.
  std::map<std::string, double> tracked;
  for (const auto& [id, trace] : result.per_appliance_traces) {
    auto it = assignment.label_of.find(id);
    const std::string label =
        it != assignment.label_of.end() ? it->second : std::string(kUnknownLabel);
    tracked[label] += energy_kwh(trace);
  }

  std::set<std::string> labels;
  for (const auto& [label, _] : tracked) labels.insert(label);
  for (const auto& [label, _] : inputs.truth) labels.insert(label);

  EnergyReport report;
  auto add_row = [&](const std::string& label) {
    EnergyRow row;
    row.label = label;
    if (auto it = inputs.truth.find(label); it != inputs.truth.end())
      row.truth_kwh = energy_kwh(it->second);
    if (auto it = inputs.filtered_truth.find(label); it != inputs.filtered_truth.end())
      row.filtered_kwh = energy_kwh(it->second);
    if (auto it = tracked.find(label); it != tracked.end()) row.tracked_kwh = it->second;
    fill_accuracies(row);
    report.per_label.push_back(std::move(row));
  };
  for (const auto& label : labels)
    if (label != kUnknownLabel) add_row(label);
  if (labels.count(kUnknownLabel)) add_row(kUnknownLabel);

  report.aggregate.label = "aggregate";
  for (const auto& row : report.per_label) report.aggregate.tracked_kwh += row.tracked_kwh;
  if (inputs.raw_aggregate) {
    report.aggregate.truth_kwh = energy_kwh(*inputs.raw_aggregate);
  } else if (!inputs.truth.empty()) {
    double sum = 0.0;
    for (const auto& row : report.per_label) sum += row.truth_kwh.value_or(0.0);
    report.aggregate.truth_kwh = sum;
  }
  if (inputs.filtered_aggregate)
    report.aggregate.filtered_kwh = energy_kwh(*inputs.filtered_aggregate);
  fill_accuracies(report.aggregate);
  return report;
}

void write_report_csv(const EnergyReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) raise(Errc::io_error, "cannot open " + path + " for writing");
  os << "label,truth_kwh,filtered_kwh,tracked_kwh,accuracy_vs_truth,accuracy_vs_filtered\n";
  auto emit = [&](const EnergyRow& row) {
    os << row.label << ',' << fmt_opt(row.truth_kwh) << ',' << fmt_opt(row.filtered_kwh)
       << ',' << fmt(row.tracked_kwh) << ',' << fmt_opt(row.accuracy_vs_truth) << ','
       << fmt_opt(row.accuracy_vs_filtered) << '\n';
  };
  for (const auto& row : report.per_label) emit(row);
  emit(report.aggregate);
  if (!os) raise(Errc::io_error, "write failed for " + path);
}

void write_plot_data(const PowerTrace& truth, const PowerTrace& tracked,
                     const std::string& path) {
  std::ofstream os(path);
  if (!os) raise(Errc::io_error, "cannot open " + path + " for writing");
  os << "index,truth,tracked\n";
  const std::size_t n = std::max(truth.size(), tracked.size());
  for (std::size_t t = 0; t < n; ++t) {
    os << t << ',' << fmt(t < truth.size() ? truth[t] : 0.0) << ','
       << fmt(t < tracked.size() ? tracked[t] : 0.0) << '\n';
  }
  if (!os) raise(Errc::io_error, "write failed for " + path);
}

}  // namespace nilm
