#include "lagns/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace lagns {

ManufacturedCase ManufacturedCase::equilibrium() {
  ManufacturedCase c;
  c.name = "equilibrium";
  c.amplitudes = {0.0, 0.0, 0.0};
  return c;
}

double ManufacturedCase::amplitude(int field, double t) const {
  return amplitudes[field] * (1.0 + 0.5 * std::sin(omega * t + phases[field]));
}

double ManufacturedCase::amplitude_rate(int field, double t) const {
  return amplitudes[field] * 0.5 * omega * std::cos(omega * t + phases[field]);
}

Jet ManufacturedCase::even_shape(double x) const {
  const Jet xj = Jet::variable(x);
  const Jet tr = tanh((1.0 / width) * (xj - Jet::constant(center)));
  const Jet tl = tanh((1.0 / width) * (xj + Jet::constant(center)));
  return (1.0 + (-1.0) * (tr * tr)) + (1.0 + (-1.0) * (tl * tl));
}

Jet ManufacturedCase::odd_shape(double x) const {
  const Jet xj = Jet::variable(x);
  const Jet tr = tanh((1.0 / width) * (xj - Jet::constant(center)));
  const Jet tl = tanh((1.0 / width) * (xj + Jet::constant(center)));
  return (tl * tl) - (tr * tr);
}

Jet ManufacturedCase::even_antiderivative(double x) const {
  // int_0^x sech^2((y-c)/w) + sech^2((y+c)/w) dy = w [tanh((x-c)/w) + tanh((x+c)/w)]
  const Jet xj = Jet::variable(x);
  return width * (tanh((1.0 / width) * (xj - Jet::constant(center))) +
                  tanh((1.0 / width) * (xj + Jet::constant(center))));
}

std::array<double, 3> ManufacturedCase::exact(double x, double t) const {
  const double e = even_shape(x).f;
  return {1.0 + amplitude(0, t) * e, amplitude(1, t) * odd_shape(x).f, 1.0 + amplitude(2, t) * e};
}

double ManufacturedCase::radius(double x, double t, int n) const {
  return std::pow(1.0 + n * (x + amplitude(0, t) * even_antiderivative(x).f), 1.0 / n);
}

std::array<double, 3> manufactured_source(const ManufacturedCase& mc, const PhysParams& params,
                                          double x, double t) {
  const int n = params.n;
  const Jet even = mc.even_shape(x);
  const Jet odd = mc.odd_shape(x);
  const Jet v = 1.0 + mc.amplitude(0, t) * even;
  const Jet u = mc.amplitude(1, t) * odd;
  const Jet theta = 1.0 + mc.amplitude(2, t) * even;
  const Jet rn = 1.0 + n * (Jet::variable(x) + mc.amplitude(0, t) * mc.even_antiderivative(x));
  const Jet r = pow(rn, 1.0 / n);

  const double v_t = mc.amplitude_rate(0, t) * even.f;
  const double u_t = mc.amplitude_rate(1, t) * odd.f;
  const double theta_t = mc.amplitude_rate(2, t) * even.f;

  const Jet r_pow = pow(r, n - 1.0);
  const Jet flux = r_pow * u;                  // r^{n-1} u
  const Jet flux_x = flux.derivative();
  const Jet sigma = (params.beta() * flux_x - params.R * theta) / v;
  const Jet conduction = pow(r, 2.0 * (n - 1)) * theta.derivative() / v;
  const Jet kinetic = pow(r, n - 2.0) * u * u;

  const double s_v = v_t - flux_x.f;
  const double s_u = u_t - r_pow.f * sigma.d1;
  const double s_theta = params.cv * theta_t - params.kappa * conduction.d1 - flux_x.f * sigma.f +
                         2.0 * params.mu * (n - 1) * kinetic.d1;
  return {s_v, s_u, s_theta};
}

Forcing make_forcing(const ManufacturedCase& mcase, const PhysParams& params) {
  return [mcase, params](double x, double t) { return manufactured_source(mcase, params, x, t); };
}

FlowState sample_manufactured(const ManufacturedCase& mcase, std::shared_ptr<const MassGrid> grid,
                              const PhysParams& params, double t) {
  std::vector<double> v(grid->cells()), u(grid->edges()), theta(grid->cells());
  for (std::size_t j = 0; j < grid->cells(); ++j) {
    const auto e = mcase.exact(grid->center(j), t);
    v[j] = e[0];
    theta[j] = e[2];
  }
  for (std::size_t i = 0; i < grid->edges(); ++i) u[i] = mcase.exact(grid->edge(i), t)[1];
  u.front() = 0.0;
  u.back() = 0.0;
  v.back() = 1.0;
  theta.back() = 1.0;
  return FlowState(std::move(grid), params.n, t, std::move(v), std::move(u), std::move(theta));
}

double loglog_slope(const std::vector<double>& steps, const std::vector<double>& errors) {
  const std::size_t m = steps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(steps[i]);
    const double ly = std::log(errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double md = static_cast<double>(m);
  return (md * sxy - sx * sy) / (md * sxx - sx * sx);
}

ConvergenceResult convergence_order(const ManufacturedCase& mcase, const PhysParams& params,
                                    const StudySetup& setup) {
  if (setup.resolutions.size() < 3) throw std::invalid_argument("a convergence study needs >= 3 resolutions");
  const Forcing forcing = make_forcing(mcase, params);

  ConvergenceResult out;
  out.kind = setup.kind;
  for (const auto& res : setup.resolutions) {
    RunConfig cfg;
    cfg.x_max = setup.x_max;
    cfg.n_cells = res.n_cells;
    cfg.t_end = setup.t_end;
    cfg.dt_fixed = res.dt;
    cfg.dt_initial = res.dt;
    cfg.scheme_order = setup.scheme_order;
    cfg.cadence = std::numeric_limits<std::size_t>::max();

    auto grid = std::make_shared<const MassGrid>(build_mass_grid(cfg.x_max, cfg.n_cells));
    auto result = run_from(sample_manufactured(mcase, grid, params, 0.0), cfg, params, &forcing);
    const FlowState& end = result.snapshots.back();

    std::array<double, 3> err{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < grid->cells(); ++j) {
      const auto e = mcase.exact(grid->center(j), end.t());
      err[0] = std::max(err[0], std::abs(end.v()[j] - e[0]));
      err[2] = std::max(err[2], std::abs(end.theta()[j] - e[2]));
    }
    for (std::size_t i = 0; i < grid->edges(); ++i)
      err[1] = std::max(err[1], std::abs(end.u()[i] - mcase.exact(grid->edge(i), end.t())[1]));
    out.errors.push_back(err);
    out.step_sizes.push_back(setup.kind == StudyKind::spatial ? setup.x_max / res.n_cells : res.dt);
  }

  // stiff implicit solves amplify rounding to ~1e-11 on fine grids
  constexpr double floor_level = 1e-10;
  for (int f = 0; f < 3; ++f) {
    std::vector<double> e;
    for (const auto& err : out.errors) e.push_back(err[f]);
    out.floor[f] = *std::max_element(e.begin(), e.end()) < floor_level;
    out.monotone[f] = true;
    for (std::size_t i = 1; i < e.size(); ++i)
      if (!(e[i] < e[i - 1])) out.monotone[f] = false;
    out.orders[f] = out.floor[f] ? 0.0 : loglog_slope(out.step_sizes, e);
  }
  return out;
}

ManufacturedCase manufactured_fixture(const std::string& name) {
  if (name == "equilibrium") return ManufacturedCase::equilibrium();
  if (name == "tanh_bump") return ManufacturedCase{};
  throw std::invalid_argument("unknown manufactured case: " + name);
}

}  // namespace lagns
