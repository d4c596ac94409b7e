#include "lagns/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lagns {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return x;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_snapshot(const std::string& path, const FlowState& state, const PhysParams& params) {
  auto out = open_out(path);
  out << "# t=" << format_double(state.t()) << " n=" << params.n << " mu=" << format_double(params.mu)
      << " lambda=" << format_double(params.lambda) << " R=" << format_double(params.R)
      << " cv=" << format_double(params.cv) << " kappa=" << format_double(params.kappa) << '\n';
  out << "x,v,u,theta,r\n";
  const auto& grid = state.grid();
  for (std::size_t i = 0; i < grid.edges(); ++i) {
    out << format_double(grid.edge(i)) << ',';
    if (i < grid.cells()) out << format_double(state.v()[i]);
    out << ',' << format_double(state.u()[i]) << ',';
    if (i < grid.cells()) out << format_double(state.theta()[i]);
    out << ',' << format_double(state.r()[i]) << '\n';
  }
}

std::pair<FlowState, PhysParams> read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read snapshot " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("# ", 0) != 0) throw std::invalid_argument("snapshot header missing in " + path);
  std::map<std::string, std::string> header;
  std::istringstream hs(line.substr(2));
  std::string item;
  while (hs >> item) {
    const auto eq = item.find('=');
    if (eq != std::string::npos) header[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto get = [&](const char* key) {
    auto it = header.find(key);
    if (it == header.end()) throw std::invalid_argument(std::string("snapshot header lacks ") + key);
    return it->second;
  };
  PhysParams params;
  params.n = std::stoi(get("n"));
  params.mu = parse_double(get("mu"));
  params.lambda = parse_double(get("lambda"));
  params.R = parse_double(get("R"));
  params.cv = parse_double(get("cv"));
  params.kappa = parse_double(get("kappa"));
  const double t = parse_double(get("t"));

  std::getline(in, line);
  if (line != "x,v,u,theta,r") throw std::invalid_argument("unexpected snapshot columns in " + path);
  std::vector<double> x, v, u, theta, r;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw std::invalid_argument("malformed snapshot row: " + line);
    x.push_back(parse_double(f[0]));
    u.push_back(parse_double(f[2]));
    r.push_back(parse_double(f[4]));
    if (!f[1].empty()) v.push_back(parse_double(f[1]));
    if (!f[3].empty()) theta.push_back(parse_double(f[3]));
  }
  auto grid = std::make_shared<const MassGrid>(std::move(x));
  FlowState state(grid, params.n, t, std::move(v), std::move(u), std::move(theta));
  for (std::size_t i = 0; i < r.size(); ++i)
    if (std::abs(r[i] - state.r()[i]) > 1e-14 * state.r()[i])
      throw std::invalid_argument("stored radius disagrees with the volume field in " + path);
  return {std::move(state), params};
}

void write_diagnostics_csv(const std::string& path, const DiagnosticsSeries& series) {
  auto out = open_out(path);
  const auto& cols = diagnostics_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& s : series) {
    const auto row = diagnostics_row(s);
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

DiagnosticsSeries read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read diagnostics " + path);
  std::string line;
  std::getline(in, line);
  const auto& cols = diagnostics_columns();
  if (split(line, ',') != cols) throw std::invalid_argument("unexpected diagnostics columns in " + path);
  DiagnosticsSeries series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split(line, ',')) row.push_back(parse_double(f));
    series.push_back(diagnostics_from_row(row));
  }
  return series;
}

void write_representation_csv(const std::string& path, const RepresentationResult& repr) {
  auto out = open_out(path);
  out << "t,B,Y,v_repr,v\n";
  for (std::size_t i = 0; i < repr.t.size(); ++i)
    out << format_double(repr.t[i]) << ',' << format_double(repr.B[i]) << ',' << format_double(repr.Y[i])
        << ',' << format_double(repr.v_repr[i]) << ',' << format_double(repr.v_solved[i]) << '\n';
}

void write_summary_json(const std::string& path, const RunSummary& s, const PhysParams& params) {
  nlohmann::json j;
  j["params"] = {{"n", params.n}, {"mu", params.mu},   {"lambda", params.lambda},
                 {"R", params.R}, {"cv", params.cv},   {"kappa", params.kappa}};
  j["t_end"] = s.t_end;
  j["steps"] = s.steps;
  j["samples"] = s.samples;
  j["rejections"] = s.rejections;
  j["extremes"] = {{"v_min", s.v_min}, {"v_max", s.v_max}, {"theta_min", s.theta_min},
                   {"theta_max", s.theta_max}, {"r_min", s.r_min}};
  j["energy"] = {{"initial", s.energy_initial}, {"final", s.energy_final}, {"max", s.energy_max}};
  j["sup_norm"] = {{"initial", s.sup_initial}, {"final", s.sup_final}};
  j["balance_residual"] = s.balance_residual;
  j["repr_residual"] = s.repr_residual;
  j["max_step_change"] = s.max_step_change;
  j["max_r_shadow_gap"] = s.max_r_shadow_gap;
  auto& inv = j["invariants"];
  inv = nlohmann::json::object();
  for (const auto& f : s.invariants) inv[f.name] = {{"passed", f.passed}, {"worst", f.worst}};
  j["all_passed"] = s.all_passed();
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace lagns
