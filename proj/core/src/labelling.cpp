#include "nilm/labelling.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nilm/error.hpp"
#include "nilm/gaussian.hpp"

namespace nilm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double cell_number(const std::string& tok, const std::string& where) {
  const std::string t = trim(tok);
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size())
    raise(Errc::malformed_cell, "bad number '" + tok + "' at " + where);
  return v;
}

void check_cell(const PartitionCell& c, const std::string& where) {
  if (!(c.d_min >= 0.0) || !(c.p_min >= 0.0) || !(c.d_min < c.d_max) ||
      !(c.p_min < c.p_max))
    raise(Errc::malformed_cell, "degenerate ranges at " + where);
  if (c.label.empty()) raise(Errc::malformed_cell, "empty label at " + where);
  if (c.label == kUnknownLabel)
    raise(Errc::malformed_cell, "label 'unknown' is reserved, at " + where);
}

/// Pooled Welford state of several stats: count-weighted mean plus the
/// parallel-axis correction folding each part's mean offset into m2.
GaussianStat pool(const GaussianStat& a, const GaussianStat& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  GaussianStat out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
  out.mean = (na * a.mean + nb * b.mean) / (na + nb);
  const double da = a.mean - out.mean, db = b.mean - out.mean;
  out.m2 = a.m2 + b.m2 + na * da * da + nb * db * db;
  return out;
}

}  // namespace

void validate_map(const PartitionMap& map) {
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    check_cell(map.cells[i], "cell " + std::to_string(i) + " of region " + map.region);
    for (std::size_t j = i + 1; j < map.cells.size(); ++j)
      if (map.cells[i].overlaps(map.cells[j]))
        raise(Errc::overlapping_cells,
              "cells " + std::to_string(i) + " and " + std::to_string(j) +
                  " of region " + map.region + " intersect");
  }
}

PartitionMap load_partition_map(const std::string& path, const std::string& region) {
  std::ifstream is(path);
  if (!is) raise(Errc::io_error, "cannot open " + path);
  PartitionMap map;
  map.region = region;
  bool region_seen = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    const std::string where = path + ":" + std::to_string(lineno);
    if (fields.size() != 7)
      raise(Errc::malformed_cell, "expected 7 fields at " + where);
    if (trim(fields[0]) == "region") continue;  // header row
    if (trim(fields[0]) != region) continue;
    region_seen = true;
    PartitionCell c;
    c.d_min = cell_number(fields[1], where);
    c.d_max = cell_number(fields[2], where);
    c.p_min = cell_number(fields[3], where);
    c.p_max = cell_number(fields[4], where);
    c.label = trim(fields[5]);
    c.color = trim(fields[6]);
    check_cell(c, where);
    map.cells.push_back(std::move(c));
  }
  if (!region_seen)
    raise(Errc::unknown_region, "region '" + region + "' not present in " + path);
  validate_map(map);
  return map;
}

const PartitionCell* lookup_cell(const PartitionMap& map, double duration_min,
                                 double power_w) {
  for (const auto& c : map.cells)
    if (c.contains(duration_min, power_w)) return &c;
  return nullptr;
}

std::string lookup(const PartitionMap& map, double duration_min, double power_w) {
  const PartitionCell* c = lookup_cell(map, duration_min, power_w);
  return c ? c->label : kUnknownLabel;
}

LabelAssignment assign_labels(const ApplianceDb& db, const PartitionMap& map) {
  LabelAssignment out;
  for (const auto& a : db.appliances) {
    std::string label = kUnknownLabel;
    std::string color;
    if (a.d_on.count >= 1 && a.p_on.count >= 1) {
      if (const PartitionCell* c = lookup_cell(map, a.d_on.mean, a.p_on.mean)) {
        label = c->label;
        color = c->color;
      }
    }
    out.members[label].push_back(a.id);
    out.label_of[a.id] = label;
    out.color_of[a.id] = color;
  }
  return out;
}

DisaggregationResult merge_same_label(const DisaggregationResult& result,
                                      const LabelAssignment& assignment) {
  DisaggregationResult out;
  out.residual_trace = result.residual_trace;
  out.min_power_trace = result.min_power_trace;
  out.decisions = result.decisions;
  out.db.min_on_power = result.db.min_on_power;
  out.db.sample_period = result.db.sample_period;

  // id -> id of the group representative (smallest member id); identity for
  // unknowns and singleton labels.
  std::map<int, int> rep;
  for (const auto& a : result.db.appliances) rep[a.id] = a.id;
  for (const auto& [label, ids] : assignment.members) {
    if (label == kUnknownLabel || ids.size() < 2) continue;
    const int keep = *std::min_element(ids.begin(), ids.end());
    for (int id : ids) rep[id] = keep;
  }

  for (const auto& a : result.db.appliances) {
    if (rep[a.id] != a.id) continue;
    ApplianceModel merged = a;
    for (const auto& b : result.db.appliances) {
      if (b.id == a.id || rep[b.id] != a.id) continue;
      merged.p_on = pool(merged.p_on, b.p_on);
      merged.p_off = pool(merged.p_off, b.p_off);
      merged.d_on = pool(merged.d_on, b.d_on);
      merged.d_off = pool(merged.d_off, b.d_off);
      merged.current_power += b.current_power;
      if (b.is_on()) merged.state = ApplianceState::on;
      if (b.last_transition_index &&
          (!merged.last_transition_index ||
           *b.last_transition_index > *merged.last_transition_index))
        merged.last_transition_index = b.last_transition_index;
      for (std::size_t t = 0; t < merged.trace.size() && t < b.trace.size(); ++t)
        merged.trace[t] += b.trace[t];
    }
    out.db.appliances.push_back(std::move(merged));
  }

  for (const auto& a : out.db.appliances) {
    PowerTrace tr;
    tr.sample_period = out.db.sample_period;
    tr.start_epoch = result.residual_trace.start_epoch;
    tr.samples = a.trace;
    out.per_appliance_traces.emplace(a.id, std::move(tr));
  }
  return out;
}

}  // namespace nilm
