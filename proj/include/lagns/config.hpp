#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lagns/oracle.hpp"
#include "lagns/params.hpp"
#include "lagns/solver.hpp"

namespace lagns {

/// Malformed configuration text: bad syntax, unknown key or unparsable value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Refinement plan of the `verify` command.
struct VerifyPlan {
  double x_max = 10.0;
  double t_end = 0.5;
  int scheme_order = 1;
  std::vector<std::size_t> spatial_n{100, 200, 400};
  double spatial_dt_factor = 0.1;  // dt = factor * dx^2
  std::size_t temporal_n = 4000;
  std::vector<double> temporal_dt{0.004, 0.002, 0.001};
  std::array<double, 2> spatial_window{1.8, 2.2};
  std::array<double, 2> temporal_window{0.9, 1.1};
};

struct Config {
  PhysParams params;
  RunConfig run;
  std::string case_name;  // manufactured fixture, empty for plain runs
  ManufacturedCase mcase;
  VerifyPlan verify;
  /// sweep.KEY = a,b,c entries in file order
  std::vector<std::pair<std::string, std::vector<std::string>>> sweep;
};

/// Flat key=value text, one per line, '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

/// Applies one key. Throws ConfigError for unknown keys or bad values.
void apply_setting(Config& config, const std::string& key, const std::string& value);

Config parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
Config load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// The documented key list.
const std::vector<std::string>& config_keys();

}  // namespace lagns
