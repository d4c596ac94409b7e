#include "lagns/state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lagns {

FlowState::FlowState(std::shared_ptr<const MassGrid> grid, int n, double t, std::vector<double> v,
                     std::vector<double> u, std::vector<double> theta)
    : grid_(std::move(grid)), n_(n), t_(t), v_(std::move(v)), u_(std::move(u)),
      theta_(std::move(theta)) {
  if (!grid_) throw std::invalid_argument("flow state needs a grid");
  if (v_.size() != grid_->cells() || theta_.size() != grid_->cells() ||
      u_.size() != grid_->edges())
    throw std::invalid_argument("flow state field sizes do not match the grid");
  for (double th : theta_)
    if (!(th > 0.0)) throw std::domain_error("temperature must be positive");
  r_ = radius_from_volume(*grid_, v_, n_);
}

double FlowState::r_center(std::size_t j) const {
  const double a = std::pow(r_[j], n_);
  const double b = std::pow(r_[j + 1], n_);
  return std::pow(0.5 * (a + b), 1.0 / n_);
}

bool FlowState::satisfies_boundary() const {
  return u_.front() == 0.0 && u_.back() == 0.0 && v_.back() == 1.0 && theta_.back() == 1.0;
}

FlowState FlowState::with_time(double t) const {
  FlowState copy = *this;
  copy.t_ = t;
  return copy;
}

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x,
                   double beyond) {
  if (xs.empty() || x > xs.back()) return beyond;
  if (x <= xs.front()) return ys.front();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(std::distance(xs.begin(), it));
  const double s = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + s * (ys[i] - ys[i - 1]);
}

}  // namespace

std::array<double, 3> InitProfile::evaluate(double x) const {
  switch (kind) {
    case ProfileKind::equilibrium:
      return {1.0, 0.0, 1.0};
    case ProfileKind::gaussian_bump: {
      const double g_right = std::exp(-std::pow((x - center) / width, 2));
      const double g_left = std::exp(-std::pow((x + center) / width, 2));
      const double even = g_right + g_left;
      const double odd = g_right - g_left;
      return {1.0 + amplitudes[0] * even, amplitudes[1] * odd, 1.0 + amplitudes[2] * even};
    }
    case ProfileKind::custom_table:
      return {interpolate(table.x, table.v, x, 1.0), interpolate(table.x, table.u, x, 0.0),
              interpolate(table.x, table.theta, x, 1.0)};
  }
  return {1.0, 0.0, 1.0};
}

InitProfile::Table read_profile_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open profile table " + path);
  InitProfile::Table table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos) continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, v, u, th;
    if (!(row >> x >> v >> u >> th)) throw std::invalid_argument("malformed profile table row: " + line);
    if (!table.x.empty() && !(x > table.x.back()))
      throw std::invalid_argument("profile table x must be strictly increasing");
    table.x.push_back(x);
    table.v.push_back(v);
    table.u.push_back(u);
    table.theta.push_back(th);
  }
  if (table.x.size() < 2) throw std::invalid_argument("profile table needs at least two rows");
  return table;
}

FlowState make_initial_data(std::shared_ptr<const MassGrid> grid, const InitProfile& profile,
                            const PhysParams& params) {
  params.validate();
  if (profile.kind == ProfileKind::gaussian_bump) {
    if (!(profile.width > 0.0)) throw std::invalid_argument("bump width must be positive");
    // continuous minima of the even extension: 1 + a (1 + G(2c)) for a < 0
    const double peak = 1.0 + std::exp(-std::pow(2.0 * profile.center / profile.width, 2));
    if (1.0 + std::min(profile.amplitudes[0], 0.0) * peak <= 0.0)
      throw std::invalid_argument("initial specific volume amplitude reaches zero");
    if (1.0 + std::min(profile.amplitudes[2], 0.0) * peak <= 0.0)
      throw std::invalid_argument("initial temperature amplitude reaches zero");
  }

  if (profile.kind == ProfileKind::custom_table && profile.table.x.empty())
    throw std::invalid_argument("custom profile needs a table");

  const std::size_t n_cells = grid->cells();
  std::vector<double> v(n_cells), u(grid->edges()), theta(n_cells);
  for (std::size_t j = 0; j < n_cells; ++j) {
    const auto s = profile.evaluate(grid->center(j));
    v[j] = s[0];
    theta[j] = s[2];
    if (!(v[j] > 0.0)) throw std::invalid_argument("initial specific volume must be positive");
    if (!(theta[j] > 0.0)) throw std::invalid_argument("initial temperature must be positive");
  }
  for (std::size_t i = 0; i < grid->edges(); ++i) u[i] = profile.evaluate(grid->edge(i))[1];

  constexpr double far_field_tol = 1e-6;
  const double deviation = std::max({std::abs(v.back() - 1.0), std::abs(theta.back() - 1.0),
                                     std::abs(u.back()), std::abs(u[u.size() - 2])});
  if (deviation > far_field_tol)
    throw std::invalid_argument("initial profile has not relaxed to (1,0,1) at X_max");

  u.front() = 0.0;
  u.back() = 0.0;
  v.back() = 1.0;
  theta.back() = 1.0;
  return FlowState(std::move(grid), params.n, 0.0, std::move(v), std::move(u), std::move(theta));
}

std::vector<double> stress_sigma(const FlowState& state, const PhysParams& params) {
  const auto& grid = state.grid();
  const auto r = state.r();
  const auto u = state.u();
  const auto v = state.v();
  const auto theta = state.theta();
  const int n = state.dimension();
  const double beta = params.beta();
  std::vector<double> sigma(grid.cells());
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double flux_x =
        (std::pow(r[j + 1], n - 1) * u[j + 1] - std::pow(r[j], n - 1) * u[j]) / grid.width(j);
    sigma[j] = beta * flux_x / v[j] - params.R * theta[j] / v[j];
  }
  return sigma;
}

Gradients discrete_gradients(const FlowState& state) {
  const auto& grid = state.grid();
  const auto r = state.r();
  const auto u = state.u();
  const auto v = state.v();
  const auto theta = state.theta();
  const int n = state.dimension();
  const std::size_t cells = grid.cells();
  const std::size_t edges = grid.edges();

  Gradients g;
  g.v_x.assign(edges, 0.0);
  g.theta_x.assign(edges, 0.0);
  for (std::size_t i = 1; i < cells; ++i) {
    const double h = grid.dual_width(i);
    g.v_x[i] = (v[i] - v[i - 1]) / h;
    g.theta_x[i] = (theta[i] - theta[i - 1]) / h;
  }
  // the theta ghost mirrors the first cell, so theta_x(0) = 0 exactly
  g.v_x[0] = g.v_x[1];
  g.v_x[cells] = g.v_x[cells - 1];
  g.theta_x[cells] = g.theta_x[cells - 1];

  g.u_x.resize(cells);
  g.flux_x.resize(cells);
  g.r_pow_u_x.resize(cells);
  g.geom_vu.resize(cells);
  g.kinetic_x.resize(cells);
  g.kinetic_split.resize(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const double dx = grid.width(j);
    const double rc = state.r_center(j);
    const double uc = 0.5 * (u[j] + u[j + 1]);
    g.u_x[j] = (u[j + 1] - u[j]) / dx;
    g.flux_x[j] = (std::pow(r[j + 1], n - 1) * u[j + 1] - std::pow(r[j], n - 1) * u[j]) / dx;
    g.r_pow_u_x[j] = std::pow(rc, n - 1) * g.u_x[j];
    g.geom_vu[j] = (n - 1) * v[j] * uc / rc;
    g.kinetic_x[j] = (std::pow(r[j + 1], n - 2) * u[j + 1] * u[j + 1] -
                      std::pow(r[j], n - 2) * u[j] * u[j]) / dx;
    g.kinetic_split[j] = 2.0 * uc * g.flux_x[j] / rc - n * uc * uc * v[j] / (rc * rc);
  }
  return g;
}

}  // namespace lagns
