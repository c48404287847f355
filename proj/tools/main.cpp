// Command-line front end for the disaggregation pipeline: synthetic data,
// filtering, event detection, tracking, labelling and evaluation, plus a
// run-all driver that times every stage into a manifest.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nilm/config.hpp"
#include "nilm/error.hpp"
#include "nilm/events.hpp"
#include "nilm/filters.hpp"
#include "nilm/labelling.hpp"
#include "nilm/mckp.hpp"
#include "nilm/metrics.hpp"
#include "nilm/signal_io.hpp"
#include "nilm/synth.hpp"
#include "nilm/tracker.hpp"

namespace fs = std::filesystem;
using namespace nilm;

namespace {

constexpr int kExitStageFailure = 1;
constexpr int kExitUsage = 2;

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << '\n';
  return kExitUsage;
}

std::string fmt(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, p);
}

// Filesystem-safe token for labels and appliance names.
std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '_';
  return out.empty() ? std::string("_") : out;
}

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(Errc::io_error, "cannot hash " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  char buf[4096];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << v;
  return ss.str();
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) raise(Errc::io_error, "cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os) raise(Errc::io_error, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- synth --

struct SynthOpts {
  std::string scenario;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

int run_synth(const SynthOpts& o) {
  if (!fs::exists(o.scenario)) return usage_error("scenario not found: " + o.scenario);
  Scenario sc = load_scenario(o.scenario);
  if (o.seed) sc.seed = *o.seed;
  const SynthResult r = generate(sc);

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  export_trace(r.aggregate, dir / "aggregate.csv");
  std::ostringstream manifest;
  manifest << "name,file,truth_kwh\n";
  for (const auto& [name, trace] : r.truth) {
    const std::string file = "truth_" + sanitize(name) + ".csv";
    export_trace(trace, dir / file);
    manifest << name << ',' << file << ',' << fmt(r.truth_kwh.at(name)) << '\n';
  }
  write_text_atomic(dir / "energies.csv", manifest.str());

  double total = 0.0;
  for (const auto& [_, kwh] : r.truth_kwh) total += kwh;
  std::cout << "generated " << r.aggregate.size() << " samples, "
            << r.truth.size() << " appliances, " << fmt(total)
            << " kWh appliance energy -> " << o.out_dir << '\n';
  return 0;
}

// --------------------------------------------------------------- filter --

struct FilterOpts {
  std::string in, out;
  std::string config;
  bool skip_median = false, skip_bilateral = false, skip_anisotropic = false;
  bool skip_domain_transform = false, skip_sharpen = false;
};

int run_filter(const FilterOpts& o) {
  if (!fs::exists(o.in)) return usage_error("input not found: " + o.in);
  if (!o.config.empty() && !fs::exists(o.config))
    return usage_error("config not found: " + o.config);
  const PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
  StageMask mask;
  mask.median = !o.skip_median;
  mask.bilateral = !o.skip_bilateral;
  mask.anisotropic = !o.skip_anisotropic;
  mask.domain_transform = !o.skip_domain_transform;
  mask.sharpen = !o.skip_sharpen;

  const PowerTrace z = load_trace(o.in);
  const PowerTrace y = run_pipeline(z, cfg.filter, mask);
  export_trace(y, o.out);
  std::cout << "filtered " << z.size() << " samples -> " << o.out << '\n';
  return 0;
}

// --------------------------------------------------------------- events --

struct EventOpts {
  std::string in;
  double threshold = kDefaultEventThresholdW;
  std::string out;  // empty -> stdout
};

std::string events_csv(const std::vector<Event>& events) {
  std::ostringstream os;
  os << "index,time,delta,kind\n";
  for (const auto& e : events)
    os << e.index << ',' << fmt(e.time) << ',' << fmt(e.delta) << ','
       << event_kind_name(e.kind) << '\n';
  return os.str();
}

int run_events(const EventOpts& o) {
  if (!fs::exists(o.in)) return usage_error("input not found: " + o.in);
  const PowerTrace y = load_trace(o.in);
  const std::vector<Event> events = detect_events(y, o.threshold);
  const std::string csv = events_csv(events);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_text_atomic(o.out, csv);
    std::cout << events.size() << " events -> " << o.out << '\n';
  }
  return 0;
}

// --------------------------------------------------------------- disagg --

struct DisaggOpts {
  std::string in;
  std::string out_dir;
  std::string config;
  std::string dump_db;
  std::optional<double> threshold;
};

std::string decisions_csv(const std::vector<EventDecision>& decisions) {
  std::ostringstream os;
  os << "index,delta,path,profit,appliances\n";
  for (const auto& d : decisions) {
    os << d.index << ',' << fmt(d.delta) << ',' << decision_path_name(d.path) << ','
       << fmt(d.profit) << ',';
    for (std::size_t i = 0; i < d.appliance_ids.size(); ++i)
      os << (i ? "+" : "") << d.appliance_ids[i];
    os << '\n';
  }
  return os.str();
}

void write_result_dir(const DisaggregationResult& res, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [id, trace] : res.per_appliance_traces)
    export_trace(trace, dir / ("appliance_" + std::to_string(id) + ".csv"));
  if (!res.residual_trace.empty())
    export_trace(res.residual_trace, dir / "residual.csv", /*allow_signed=*/true);
  if (!res.min_power_trace.empty())
    export_trace(res.min_power_trace, dir / "min_power.csv");
  write_text_atomic(dir / "decisions.csv", decisions_csv(res.decisions));
}

int run_disagg(const DisaggOpts& o) {
  if (!fs::exists(o.in)) return usage_error("input not found: " + o.in);
  if (!o.config.empty() && !fs::exists(o.config))
    return usage_error("config not found: " + o.config);
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
  if (o.threshold) cfg.tracker.threshold_s = *o.threshold;

  const PowerTrace y = load_trace(o.in);
  const DisaggregationResult res = track(y, cfg.tracker);

  const fs::path dir(o.out_dir);
  write_result_dir(res, dir);
  save_db(res.db, o.dump_db.empty() ? (dir / "db.txt").string() : o.dump_db);
  std::cout << res.decisions.size() << " events, " << res.db.size()
            << " appliances -> " << o.out_dir << '\n';
  return 0;
}

// ---------------------------------------------------------------- label --

struct LabelOpts {
  std::string map, region, db;
  std::string result_dir;  // empty -> directory of the db file
  std::string out_dir;
};

std::string labels_csv(const ApplianceDb& db, const LabelAssignment& assignment) {
  std::ostringstream os;
  os << "appliance_id,label,color\n";
  for (const auto& a : db.appliances)
    os << a.id << ',' << assignment.label_of.at(a.id) << ','
       << assignment.color_of.at(a.id) << '\n';
  return os.str();
}

// Rebuilds a DisaggregationResult from a disagg output directory so the
// merge step can run out of process.
DisaggregationResult load_result_dir(ApplianceDb db, const fs::path& dir) {
  DisaggregationResult res;
  for (auto& a : db.appliances) {
    const fs::path p = dir / ("appliance_" + std::to_string(a.id) + ".csv");
    if (fs::exists(p)) a.trace = load_trace(p).samples;
  }
  if (fs::exists(dir / "residual.csv")) {
    ColumnSpec signed_spec;
    signed_spec.allow_signed = true;
    res.residual_trace = load_trace(dir / "residual.csv", signed_spec);
  }
  if (fs::exists(dir / "min_power.csv"))
    res.min_power_trace = load_trace(dir / "min_power.csv");
  for (const auto& a : db.appliances) {
    PowerTrace tr;
    tr.sample_period = db.sample_period;
    tr.samples = a.trace;
    res.per_appliance_traces.emplace(a.id, std::move(tr));
  }
  res.db = std::move(db);
  return res;
}

void write_label_dir(const DisaggregationResult& merged,
                     const LabelAssignment& assignment, const ApplianceDb& original_db,
                     const fs::path& dir) {
  fs::create_directories(dir);
  write_text_atomic(dir / "labels.csv", labels_csv(original_db, assignment));
  std::ostringstream manifest;
  manifest << "file,appliance_id,label\n";
  for (const auto& [id, trace] : merged.per_appliance_traces) {
    const std::string label = assignment.label_of.count(id)
                                  ? assignment.label_of.at(id)
                                  : std::string(kUnknownLabel);
    const std::string file = "appliance_" + std::to_string(id) + ".csv";
    export_trace(trace, dir / file);
    manifest << file << ',' << id << ',' << label << '\n';
  }
  write_text_atomic(dir / "merged_manifest.csv", manifest.str());
  save_db(merged.db, (dir / "db.txt").string());
  if (!merged.residual_trace.empty())
    export_trace(merged.residual_trace, dir / "residual.csv", /*allow_signed=*/true);
  if (!merged.min_power_trace.empty())
    export_trace(merged.min_power_trace, dir / "min_power.csv");
}

int run_label(const LabelOpts& o) {
  for (const auto& [what, path] :
       {std::pair<const char*, const std::string&>{"map", o.map}, {"db", o.db}})
    if (!fs::exists(path))
      return usage_error(std::string(what) + " not found: " + path);

  ApplianceDb db = load_db(o.db);
  const PartitionMap map = load_partition_map(o.map, o.region);
  const LabelAssignment assignment = assign_labels(db, map);

  const fs::path result_dir =
      o.result_dir.empty() ? fs::path(o.db).parent_path() : fs::path(o.result_dir);
  DisaggregationResult res = load_result_dir(std::move(db), result_dir);
  const ApplianceDb& original_db = res.db;
  const DisaggregationResult merged = merge_same_label(res, assignment);
  write_label_dir(merged, assignment, original_db, fs::path(o.out_dir));

  std::cout << original_db.size() << " appliances -> " << merged.db.size()
            << " after merge -> " << o.out_dir << '\n';
  return 0;
}

// ----------------------------------------------------------------- eval --

struct EvalOpts {
  std::string truth_dir, result_dir;
  std::string report_out, plot_out;  // empty -> inside result_dir
};

// `energies.csv` rows are `name,file,truth_kwh`.
std::map<std::string, PowerTrace> load_truth_channels(const fs::path& dir) {
  std::map<std::string, PowerTrace> out;
  std::ifstream is(dir / "energies.csv");
  if (!is) return out;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string name, file;
    std::getline(ss, name, ',');
    std::getline(ss, file, ',');
    if (!name.empty() && fs::exists(dir / file)) out.emplace(name, load_trace(dir / file));
  }
  return out;
}

int run_eval(const EvalOpts& o) {
  if (!fs::exists(o.truth_dir)) return usage_error("truth dir not found: " + o.truth_dir);
  if (!fs::exists(o.result_dir))
    return usage_error("result dir not found: " + o.result_dir);
  const fs::path truth_dir(o.truth_dir), result_dir(o.result_dir);

  ReportInputs inputs;
  inputs.truth = load_truth_channels(truth_dir);
  if (fs::exists(truth_dir / "aggregate.csv"))
    inputs.raw_aggregate = load_trace(truth_dir / "aggregate.csv");
  for (const auto& dir : {result_dir, truth_dir})
    if (!inputs.filtered_aggregate && fs::exists(dir / "filtered.csv"))
      inputs.filtered_aggregate = load_trace(dir / "filtered.csv");

  DisaggregationResult res;
  LabelAssignment assignment;
  if (fs::exists(result_dir / "merged_manifest.csv")) {
    std::ifstream is(result_dir / "merged_manifest.csv");
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string file, id_str, label;
      std::getline(ss, file, ',');
      std::getline(ss, id_str, ',');
      std::getline(ss, label, ',');
      const int id = std::stoi(id_str);
      res.per_appliance_traces.emplace(id, load_trace(result_dir / file));
      assignment.label_of[id] = label;
      assignment.members[label].push_back(id);
    }
  } else {
    for (const auto& entry : fs::directory_iterator(result_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("appliance_", 0) != 0 || entry.path().extension() != ".csv")
        continue;
      const int id = std::stoi(name.substr(10));
      res.per_appliance_traces.emplace(id, load_trace(entry.path()));
      const std::string label = "appliance_" + std::to_string(id);
      assignment.label_of[id] = label;
      assignment.members[label].push_back(id);
    }
  }
  if (fs::exists(result_dir / "min_power.csv"))
    res.min_power_trace = load_trace(result_dir / "min_power.csv");

  const EnergyReport report = build_report(inputs, res, assignment);
  const fs::path report_path =
      o.report_out.empty() ? result_dir / "report.csv" : fs::path(o.report_out);
  write_report_csv(report, report_path.string());

  // Plot data: reference aggregate vs attributed total (appliances plus the
  // constantly-ON floor).
  PowerTrace truth_total;
  if (inputs.raw_aggregate) {
    truth_total = *inputs.raw_aggregate;
  } else {
    for (const auto& [_, tr] : inputs.truth) {
      if (truth_total.empty()) truth_total = tr;
      else
        for (std::size_t t = 0; t < truth_total.size() && t < tr.size(); ++t)
          truth_total[t] += tr[t];
    }
  }
  PowerTrace tracked_total = res.min_power_trace;
  for (const auto& [_, tr] : res.per_appliance_traces) {
    if (tracked_total.empty()) tracked_total = tr.with_samples(std::vector<double>(tr.size(), 0.0));
    for (std::size_t t = 0; t < tracked_total.size() && t < tr.size(); ++t)
      tracked_total[t] += tr[t];
  }
  const fs::path plot_path =
      o.plot_out.empty() ? result_dir / "plot.csv" : fs::path(o.plot_out);
  write_plot_data(truth_total, tracked_total, plot_path.string());

  auto show = [&](const EnergyRow& row) {
    std::cout << "  " << row.label << ": tracked " << fmt(row.tracked_kwh) << " kWh";
    if (row.truth_kwh) std::cout << ", truth " << fmt(*row.truth_kwh) << " kWh";
    if (row.accuracy_vs_truth)
      std::cout << ", accuracy " << fmt_fixed(*row.accuracy_vs_truth, 1) << "%";
    std::cout << '\n';
  };
  for (const auto& row : report.per_label) show(row);
  show(report.aggregate);
  std::cout << "report -> " << report_path.string() << ", plot -> "
            << plot_path.string() << '\n';
  return 0;
}

// ----------------------------------------------------------------- mckp --

struct MckpOpts {
  std::string instance;
  std::optional<int> capacity;
  bool brute = false;
};

int run_mckp(const MckpOpts& o) {
  if (!fs::exists(o.instance)) return usage_error("instance not found: " + o.instance);
  MckpInstance inst = load_instance(o.instance);
  if (o.capacity) inst.capacity = *o.capacity;

  auto show = [](const char* tag, const MckpSolution& sol) {
    std::cout << tag << ": profit " << fmt(sol.profit) << ", objective "
              << fmt(sol.objective) << ", weight " << sol.total_weight() << ", picks";
    if (sol.selected_ids.empty()) std::cout << " (none)";
    for (std::size_t i = 0; i < sol.selected_ids.size(); ++i)
      std::cout << ' ' << sol.selected_ids[i] << '@' << sol.chosen_weights[i];
    std::cout << '\n';
  };
  const MckpSolution sol = solve(inst);
  show("solve", sol);
  if (o.brute) {
    const MckpSolution ref = brute_force(inst);
    show("brute", ref);
    const bool match = sol.selected_ids == ref.selected_ids &&
                       sol.chosen_weights == ref.chosen_weights &&
                       sol.objective == ref.objective;
    std::cout << (match ? "solvers agree" : "SOLVER MISMATCH") << '\n';
    if (!match) return kExitStageFailure;
  }
  return 0;
}

// -------------------------------------------------------------- run-all --

struct RunAllOpts {
  std::string in, out_dir;
  std::string config;
  std::string map, region = "NA";
};

int run_all(const RunAllOpts& o) {
  if (!fs::exists(o.in)) return usage_error("input not found: " + o.in);
  if (!o.config.empty() && !fs::exists(o.config))
    return usage_error("config not found: " + o.config);
  if (!o.map.empty() && !fs::exists(o.map))
    return usage_error("map not found: " + o.map);
  const PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);

  std::vector<std::pair<std::string, double>> timings;
  std::ostringstream head;
  head << "# run manifest\n";
  head << "# input " << o.in << " fnv1a " << hex64(fnv1a_file(o.in)) << '\n';
  {
    std::ostringstream cfg_text;
    save_config(cfg, (dir / ".config_snapshot.tmp").string());
    std::ifstream snap(dir / ".config_snapshot.tmp");
    std::string line;
    while (std::getline(snap, line)) head << "# config " << line << '\n';
  }
  fs::remove(dir / ".config_snapshot.tmp");

  auto emit_manifest = [&](const std::string& note) {
    std::ostringstream os;
    os << head.str();
    if (!note.empty()) os << "# " << note << '\n';
    os << "stage,seconds\n";
    for (const auto& [stage, sec] : timings)
      os << stage << ',' << fmt_fixed(sec, 6) << '\n';
    write_text_atomic(dir / "manifest.txt", os.str());
  };

  try {
    const PowerTrace z = load_trace(o.in);

    // Filter sub-stages, individually timed; order must mirror run_pipeline.
    PowerTrace cur = z;
    double pipeline_total = 0.0;
    const std::vector<std::pair<std::string, PowerTrace (*)(const PowerTrace&, const FilterConfig&)>>
        stages = {
            {"1a_median",
             [](const PowerTrace& s, const FilterConfig& c) {
               return median_filter(s, c.median_window);
             }},
            {"1b_bilateral",
             [](const PowerTrace& s, const FilterConfig& c) {
               return bilateral_filter(s, c.bilateral_sigma_spatial,
                                       c.bilateral_sigma_range, c.bilateral_window);
             }},
            {"1c_anisotropic",
             [](const PowerTrace& s, const FilterConfig& c) {
               return anisotropic_diffusion(s, c.aniso_kappa, c.aniso_lambda,
                                            c.aniso_iters);
             }},
            {"1d_domain_transform",
             [](const PowerTrace& s, const FilterConfig& c) {
               return domain_transform_filter(s, c.dt_sigma_spatial, c.dt_sigma_range,
                                              c.dt_iters);
             }},
            {"1e_sharpening",
             [](const PowerTrace& s, const FilterConfig& c) {
               return edge_sharpen(s, c.sharpen_slope_min, c.sharpen_max_ramp);
             }},
        };
    for (const auto& [stage_name, fn] : stages) {
      const auto t0 = Clock::now();
      cur = fn(cur, cfg.filter);
      const double sec = seconds_since(t0);
      timings.emplace_back(stage_name, sec);
      pipeline_total += sec;
    }
    timings.emplace_back("1_filter_pipeline", pipeline_total);
    export_trace(cur, dir / "filtered.csv");

    const auto t_track = Clock::now();
    const DisaggregationResult res = track(cur, cfg.tracker);
    timings.emplace_back("2_appliance_tracking", seconds_since(t_track));
    write_result_dir(res, dir / "disagg");
    save_db(res.db, (dir / "disagg" / "db.txt").string());

    const auto t_label = Clock::now();
    PartitionMap map;
    map.region = o.region;
    if (!o.map.empty()) map = load_partition_map(o.map, o.region);
    const LabelAssignment assignment = assign_labels(res.db, map);
    const DisaggregationResult merged = merge_same_label(res, assignment);
    timings.emplace_back("3_appliance_labelling", seconds_since(t_label));
    write_label_dir(merged, assignment, res.db, dir / "labelled");

    emit_manifest("");
    std::cout << res.db.size() << " appliances (" << merged.db.size()
              << " after merge) -> " << o.out_dir << '\n';
    return 0;
  } catch (const std::exception& e) {
    emit_manifest(std::string("aborted: ") + e.what());
    std::cerr << "error: " << e.what() << '\n';
    return kExitStageFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"appliance-level energy disaggregation from one aggregate signal"};
  app.require_subcommand(1);

  SynthOpts synth_opts;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic household trace");
  synth_cmd->add_option("--scenario", synth_opts.scenario, "scenario JSON file")->required();
  synth_cmd->add_option("--seed", synth_opts.seed, "override the scenario seed");
  synth_cmd->add_option("--out-dir", synth_opts.out_dir, "output directory");

  FilterOpts filter_opts;
  auto* filter_cmd = app.add_subcommand("filter", "run the edge-preserving filter pipeline");
  filter_cmd->add_option("--in", filter_opts.in, "input trace CSV")->required();
  filter_cmd->add_option("--out", filter_opts.out, "output trace CSV")->required();
  filter_cmd->add_option("--config", filter_opts.config, "pipeline config file");
  filter_cmd->add_flag("--skip-median", filter_opts.skip_median, "skip the median stage");
  filter_cmd->add_flag("--skip-bilateral", filter_opts.skip_bilateral, "skip the bilateral stage");
  filter_cmd->add_flag("--skip-anisotropic", filter_opts.skip_anisotropic,
                       "skip the anisotropic diffusion stage");
  filter_cmd->add_flag("--skip-domain-transform", filter_opts.skip_domain_transform,
                       "skip the domain transform stage");
  filter_cmd->add_flag("--skip-sharpen", filter_opts.skip_sharpen, "skip edge sharpening");

  EventOpts event_opts;
  auto* events_cmd = app.add_subcommand("events", "detect switching events");
  events_cmd->add_option("--in", event_opts.in, "filtered trace CSV")->required();
  events_cmd->add_option("--threshold", event_opts.threshold, "event threshold, watts");
  events_cmd->add_option("--out", event_opts.out, "output CSV (default stdout)");

  DisaggOpts disagg_opts;
  auto* disagg_cmd = app.add_subcommand("disagg", "track appliances through a filtered trace");
  disagg_cmd->add_option("--in", disagg_opts.in, "filtered trace CSV")->required();
  disagg_cmd->add_option("--out-dir", disagg_opts.out_dir, "result directory")->required();
  disagg_cmd->add_option("--config", disagg_opts.config, "pipeline config file");
  disagg_cmd->add_option("--threshold", disagg_opts.threshold, "event threshold, watts");
  disagg_cmd->add_option("--dump-db", disagg_opts.dump_db,
                         "database dump path (default <out-dir>/db.txt)");

  LabelOpts label_opts;
  auto* label_cmd = app.add_subcommand("label", "label and merge tracked appliances");
  label_cmd->add_option("--map", label_opts.map, "partition map file")->required();
  label_cmd->add_option("--region", label_opts.region, "region code")->required();
  label_cmd->add_option("--db", label_opts.db, "appliance database dump")->required();
  label_cmd->add_option("--result-dir", label_opts.result_dir,
                        "disagg output directory (default: the db's directory)");
  label_cmd->add_option("--out-dir", label_opts.out_dir, "merged output directory")->required();

  EvalOpts eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "energy report against ground truth");
  eval_cmd->add_option("--truth-dir", eval_opts.truth_dir, "directory with truth traces")->required();
  eval_cmd->add_option("--result-dir", eval_opts.result_dir, "tracked result directory")->required();
  eval_cmd->add_option("--report", eval_opts.report_out, "report CSV path");
  eval_cmd->add_option("--plot", eval_opts.plot_out, "plot data CSV path");

  MckpOpts mckp_opts;
  auto* mckp_cmd = app.add_subcommand("mckp", "debug the knapsack solver on an instance file");
  mckp_cmd->add_option("--instance", mckp_opts.instance, "instance file")->required();
  mckp_cmd->add_option("--capacity", mckp_opts.capacity, "override instance capacity");
  mckp_cmd->add_flag("--brute", mckp_opts.brute, "cross-check with the exhaustive solver");

  RunAllOpts run_all_opts;
  auto* run_all_cmd = app.add_subcommand("run-all", "filter, track and label in one go");
  run_all_cmd->add_option("--in", run_all_opts.in, "raw aggregate trace CSV")->required();
  run_all_cmd->add_option("--out-dir", run_all_opts.out_dir, "output directory")->required();
  run_all_cmd->add_option("--config", run_all_opts.config, "pipeline config file");
  run_all_cmd->add_option("--map", run_all_opts.map, "partition map file");
  run_all_cmd->add_option("--region", run_all_opts.region, "region code");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth_opts);
    if (filter_cmd->parsed()) return run_filter(filter_opts);
    if (events_cmd->parsed()) return run_events(event_opts);
    if (disagg_cmd->parsed()) return run_disagg(disagg_opts);
    if (label_cmd->parsed()) return run_label(label_opts);
    if (eval_cmd->parsed()) return run_eval(eval_opts);
    if (mckp_cmd->parsed()) return run_mckp(mckp_opts);
    if (run_all_cmd->parsed()) return run_all(run_all_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStageFailure;
  }
  return kExitUsage;
}
