#include "nilm/config.hpp"

#include <charconv>
#include <fstream>

#include "nilm/error.hpp"

namespace nilm {

void PipelineConfig::validate() const {
  filter.validate();
  tracker.validate();
}

namespace {

template <typename Config, typename Fn>
void for_each_key(Config& c, Fn&& fn) {
  fn("median_window", &c.filter.median_window);
  fn("bilateral_sigma_spatial", &c.filter.bilateral_sigma_spatial);
  fn("bilateral_sigma_range", &c.filter.bilateral_sigma_range);
  fn("bilateral_window", &c.filter.bilateral_window);
  fn("aniso_kappa", &c.filter.aniso_kappa);
  fn("aniso_lambda", &c.filter.aniso_lambda);
  fn("aniso_iters", &c.filter.aniso_iters);
  fn("dt_sigma_spatial", &c.filter.dt_sigma_spatial);
  fn("dt_sigma_range", &c.filter.dt_sigma_range);
  fn("dt_iters", &c.filter.dt_iters);
  fn("sharpen_slope_min", &c.filter.sharpen_slope_min);
  fn("sharpen_max_ramp", &c.filter.sharpen_max_ramp);
  fn("threshold_s", &c.tracker.threshold_s);
  fn("profit_gate", &c.tracker.profit_gate);
  fn("mahalanobis_gate", &c.tracker.mahalanobis_gate);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void assign(int* slot, const std::string& value, const std::string& where) {
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), *slot);
  if (ec != std::errc{} || p != value.data() + value.size())
    raise(Errc::invalid_config, "bad integer '" + value + "' at " + where);
}

void assign(double* slot, const std::string& value, const std::string& where) {
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), *slot);
  if (ec != std::errc{} || p != value.data() + value.size())
    raise(Errc::invalid_config, "bad number '" + value + "' at " + where);
}

std::string render(int v) { return std::to_string(v); }
std::string render(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) raise(Errc::io_error, "cannot open " + path);
  PipelineConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      raise(Errc::invalid_config, "expected 'key = value' at " + where);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    bool matched = false;
    for_each_key(config, [&](const char* name, auto* slot) {
      if (key == name) {
        assign(slot, value, where);
        matched = true;
      }
    });
    if (!matched) raise(Errc::invalid_config, "unknown key '" + key + "' at " + where);
  }
  config.validate();
  return config;
}

void save_config(const PipelineConfig& config, const std::string& path) {
  std::ofstream os(path);
  if (!os) raise(Errc::io_error, "cannot open " + path + " for writing");
  for_each_key(config, [&](const char* name, auto* slot) {
    os << name << " = " << render(*slot) << '\n';
  });
  if (!os) raise(Errc::io_error, "write failed for " + path);
}

}  // namespace nilm
