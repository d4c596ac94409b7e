#include "lagns/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lagns/state.hpp"

namespace lagns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) throw ConfigError("key '" + key + "': not a number: " + value);
  return x;
}

long to_integer(const std::string& key, const std::string& value) {
  long x = 0;
  const auto* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), last, x);
  if (ec != std::errc() || ptr != last) throw ConfigError("key '" + key + "': not an integer: " + value);
  return x;
}

std::size_t to_count(const std::string& key, const std::string& value) {
  const long x = to_integer(key, value);
  if (x < 0) throw ConfigError("key '" + key + "': must be non-negative");
  return static_cast<std::size_t>(x);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) items.push_back(trim(item));
  return items;
}

std::vector<double> to_doubles(const std::string& key, const std::string& value, std::size_t expect = 0) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_double(key, item));
  if (expect != 0 && out.size() != expect)
    throw ConfigError("key '" + key + "': expected " + std::to_string(expect) + " values");
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "': not a boolean: " + value);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "n", "mu", "lambda", "R", "cv", "kappa",
      "X_max", "N", "grading",
      "profile.kind", "profile.amplitudes", "profile.center", "profile.width", "profile.table",
      "t_end", "dt_initial", "dt_fixed", "cfl_fraction", "floors", "max_retries",
      "cadence", "snapshot_cadence", "scheme_order",
      "probe.enabled", "probe.k", "probe.x", "superlevel.a",
      "case", "case.amplitudes", "case.center", "case.width", "case.omega",
      "verify.X_max", "verify.t_end", "verify.scheme_order", "verify.spatial_N",
      "verify.spatial_dt_factor", "verify.temporal_N", "verify.temporal_dt",
      "verify.spatial_window", "verify.temporal_window",
      "sweep.<key>"};
  return keys;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

void apply_setting(Config& c, const std::string& key, const std::string& value) {
  auto& p = c.params;
  auto& r = c.run;
  if (key == "n") p.n = static_cast<int>(to_integer(key, value));
  else if (key == "mu") p.mu = to_double(key, value);
  else if (key == "lambda") p.lambda = to_double(key, value);
  else if (key == "R") p.R = to_double(key, value);
  else if (key == "cv") p.cv = to_double(key, value);
  else if (key == "kappa") p.kappa = to_double(key, value);
  else if (key == "X_max") r.x_max = to_double(key, value);
  else if (key == "N") r.n_cells = to_count(key, value);
  else if (key == "grading") {
    if (value == "uniform") r.grading = Grading::uniform();
    else if (value.rfind("geometric:", 0) == 0) r.grading = Grading::geometric(to_double(key, value.substr(10)));
    else r.grading = Grading::geometric(to_double(key, value));
  } else if (key == "profile.kind") {
    if (value == "equilibrium") r.profile.kind = ProfileKind::equilibrium;
    else if (value == "gaussian" || value == "gaussian-bump" || value == "gaussian_bump")
      r.profile.kind = ProfileKind::gaussian_bump;
    else if (value == "custom" || value == "table") r.profile.kind = ProfileKind::custom_table;
    else throw ConfigError("key 'profile.kind': unknown profile " + value);
  } else if (key == "profile.amplitudes") {
    const auto a = to_doubles(key, value, 3);
    r.profile.amplitudes = {a[0], a[1], a[2]};
  } else if (key == "profile.center") r.profile.center = to_double(key, value);
  else if (key == "profile.width") r.profile.width = to_double(key, value);
  else if (key == "profile.table") {
    try {
      r.profile.table = read_profile_table(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("key 'profile.table': ") + e.what());
    }
  } else if (key == "t_end") r.t_end = to_double(key, value);
  else if (key == "dt_initial") r.dt_initial = to_double(key, value);
  else if (key == "dt_fixed") r.dt_fixed = to_double(key, value);
  else if (key == "cfl_fraction") r.cfl_fraction = to_double(key, value);
  else if (key == "floors") {
    const auto f = to_doubles(key, value, 2);
    r.v_floor = f[0];
    r.theta_floor = f[1];
  } else if (key == "max_retries") r.max_retries = static_cast<int>(to_integer(key, value));
  else if (key == "cadence") r.cadence = to_count(key, value);
  else if (key == "snapshot_cadence") r.snapshot_cadence = to_count(key, value);
  else if (key == "scheme_order") r.scheme_order = static_cast<int>(to_integer(key, value));
  else if (key == "probe.enabled") r.diagnostics.probe_enabled = to_bool(key, value);
  else if (key == "probe.k") {
    r.diagnostics.probe_k = static_cast<int>(to_integer(key, value));
    r.diagnostics.probe_enabled = true;
  } else if (key == "probe.x") {
    r.diagnostics.probe_x = to_double(key, value);
    r.diagnostics.probe_enabled = true;
  } else if (key == "superlevel.a") r.diagnostics.superlevel_a = to_double(key, value);
  else if (key == "case") {
    try {
      c.mcase = manufactured_fixture(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    c.case_name = value;
  } else if (key == "case.amplitudes") {
    const auto a = to_doubles(key, value, 3);
    c.mcase.amplitudes = {a[0], a[1], a[2]};
  } else if (key == "case.center") c.mcase.center = to_double(key, value);
  else if (key == "case.width") c.mcase.width = to_double(key, value);
  else if (key == "case.omega") c.mcase.omega = to_double(key, value);
  else if (key == "verify.X_max") c.verify.x_max = to_double(key, value);
  else if (key == "verify.t_end") c.verify.t_end = to_double(key, value);
  else if (key == "verify.scheme_order") c.verify.scheme_order = static_cast<int>(to_integer(key, value));
  else if (key == "verify.spatial_N") {
    c.verify.spatial_n.clear();
    for (const auto& item : split_list(value)) c.verify.spatial_n.push_back(to_count(key, item));
  } else if (key == "verify.spatial_dt_factor") c.verify.spatial_dt_factor = to_double(key, value);
  else if (key == "verify.temporal_N") c.verify.temporal_n = to_count(key, value);
  else if (key == "verify.temporal_dt") c.verify.temporal_dt = to_doubles(key, value);
  else if (key == "verify.spatial_window") {
    const auto w = to_doubles(key, value, 2);
    c.verify.spatial_window = {w[0], w[1]};
  } else if (key == "verify.temporal_window") {
    const auto w = to_doubles(key, value, 2);
    c.verify.temporal_window = {w[0], w[1]};
  } else if (key.rfind("sweep.", 0) == 0) {
    const std::string target = key.substr(6);
    if (target.empty() || target.rfind("sweep.", 0) == 0) throw ConfigError("bad sweep key: " + key);
    Config probe = c;
    const auto values = split_list(value);
    for (const auto& v : values) apply_setting(probe, target, v);  // validates each value
    c.sweep.emplace_back(target, values);
  } else {
    throw ConfigError("unknown configuration key: " + key);
  }
}

Config parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  Config c;
  for (const auto& [k, v] : parse_key_values(text)) apply_setting(c, k, v);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be KEY=VALUE: " + o);
    apply_setting(c, trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
  return c;
}

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace lagns
