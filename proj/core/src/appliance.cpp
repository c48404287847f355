#include "nilm/appliance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "nilm/error.hpp"

namespace nilm {

const char* appliance_state_name(ApplianceState state) {
  return state == ApplianceState::on ? "on" : "off";
}

void ApplianceModel::turn_on(std::size_t index, double delta_watts, double sample_period) {
  if (state == ApplianceState::on)
    raise(Errc::already_on, "appliance " + std::to_string(id) + " at sample " + std::to_string(index));
  if (last_transition_index) {
    const double minutes =
        static_cast<double>(index - *last_transition_index) * sample_period / 60.0;
    d_off.update(minutes);
  }
  state = ApplianceState::on;
  current_power = std::abs(delta_watts);
  last_transition_index = index;
}

void ApplianceModel::turn_off(std::size_t index, double delta_watts, double sample_period) {
  (void)delta_watts;  // the stats use the activation's own power
  if (state == ApplianceState::off)
    raise(Errc::already_off, "appliance " + std::to_string(id) + " at sample " + std::to_string(index));
  if (last_transition_index) {
    const double minutes =
        static_cast<double>(index - *last_transition_index) * sample_period / 60.0;
    d_on.update(minutes);
  }
  p_on.update(current_power);
  state = ApplianceState::off;
  current_power = 0.0;
  last_transition_index = index;
}

double ApplianceModel::mahalanobis(double delta) const {
  if (p_on.empty()) raise(Errc::empty_stat, "mahalanobis on appliance " + std::to_string(id));
  return std::abs(delta - p_on.mean) / p_on.sigma_eff(kPowerSigmaFloorW);
}

std::vector<int> ApplianceModel::candidate_powers() const {
  const double sigma = p_on.sigma_eff(kPowerSigmaFloorW);
  int w_lo = static_cast<int>(std::lround(p_on.mean - 3.0 * sigma));
  int w_hi = static_cast<int>(std::lround(p_on.mean + 3.0 * sigma));
  w_lo = std::max(w_lo, 1);
  if (w_hi < w_lo) w_hi = w_lo;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(w_hi - w_lo + 1));
  for (int w = w_lo; w <= w_hi; ++w) out.push_back(w);
  return out;
}

int ApplianceDb::add_new(double delta_watts, std::size_t index) {
  ApplianceModel m;
  m.id = static_cast<int>(appliances.size()) + 1;
  m.state = ApplianceState::on;
  m.current_power = std::abs(delta_watts);
  m.p_on.update(m.current_power);
  m.last_transition_index = index;
  appliances.push_back(std::move(m));
  return appliances.back().id;
}

void ApplianceDb::update_min_power(double y_t) {
  if (!min_on_power || y_t < *min_on_power) min_on_power = y_t;
}

ApplianceModel* ApplianceDb::find(int id) {
  for (auto& a : appliances)
    if (a.id == id) return &a;
  return nullptr;
}

const ApplianceModel* ApplianceDb::find(int id) const {
  for (const auto& a : appliances)
    if (a.id == id) return &a;
  return nullptr;
}

namespace {

std::string fmt_exact(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_stat(std::ostream& os, const char* name, const GaussianStat& s) {
  os << name << ' ' << s.count << ' ' << fmt_exact(s.mean) << ' ' << fmt_exact(s.m2)
     << '\n';
}

double parse_num(const std::string& tok, const std::string& where) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    raise(Errc::malformed_row, "bad number '" + tok + "' in " + where);
  return v;
}

}  // namespace

void save_db(const ApplianceDb& db, const std::string& path) {
  std::ofstream os(path);
  if (!os) raise(Errc::io_error, "cannot open " + path + " for writing");
  os << "# appliance-db v1\n";
  os << "sample_period " << fmt_exact(db.sample_period) << '\n';
  if (db.min_on_power) os << "min_on_power " << fmt_exact(*db.min_on_power) << '\n';
  for (const auto& a : db.appliances) {
    os << "appliance " << a.id << ' ' << appliance_state_name(a.state) << ' '
       << fmt_exact(a.current_power);
    if (a.last_transition_index) os << ' ' << *a.last_transition_index;
    os << '\n';
    write_stat(os, "  p_on", a.p_on);
    write_stat(os, "  p_off", a.p_off);
    write_stat(os, "  d_on", a.d_on);
    write_stat(os, "  d_off", a.d_off);
  }
  if (!os) raise(Errc::io_error, "write failed for " + path);
}

ApplianceDb load_db(const std::string& path) {
  std::ifstream is(path);
  if (!is) raise(Errc::io_error, "cannot open " + path);
  ApplianceDb db;
  std::string line;
  ApplianceModel* cur = nullptr;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key) || key[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (key == "sample_period") {
      std::string v;
      ss >> v;
      db.sample_period = parse_num(v, where);
    } else if (key == "min_on_power") {
      std::string v;
      ss >> v;
      db.min_on_power = parse_num(v, where);
    } else if (key == "appliance") {
      ApplianceModel m;
      std::string state, power, idx;
      ss >> m.id >> state >> power;
      if (ss.fail()) raise(Errc::malformed_row, "truncated appliance record at " + where);
      if (state != "on" && state != "off")
        raise(Errc::malformed_row, "bad state '" + state + "' at " + where);
      m.state = state == "on" ? ApplianceState::on : ApplianceState::off;
      m.current_power = parse_num(power, where);
      if (ss >> idx) m.last_transition_index = static_cast<std::size_t>(parse_num(idx, where));
      db.appliances.push_back(std::move(m));
      cur = &db.appliances.back();
    } else if (key == "p_on" || key == "p_off" || key == "d_on" || key == "d_off") {
      if (!cur) raise(Errc::malformed_row, "stat before any appliance at " + where);
      GaussianStat s;
      std::string mean, m2;
      ss >> s.count >> mean >> m2;
      if (ss.fail()) raise(Errc::malformed_row, "truncated stat at " + where);
      s.mean = parse_num(mean, where);
      s.m2 = parse_num(m2, where);
      if (key == "p_on") cur->p_on = s;
      else if (key == "p_off") cur->p_off = s;
      else if (key == "d_on") cur->d_on = s;
      else cur->d_off = s;
    } else {
      raise(Errc::malformed_row, "unknown key '" + key + "' at " + where);
    }
  }
  return db;
}

}  // namespace nilm
