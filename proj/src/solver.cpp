#include "lagns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lagns/tridiagonal.hpp"

namespace lagns {

void RunConfig::validate() const {
  if (!(x_max > 0.0)) throw std::invalid_argument("X_max must be positive");
  if (n_cells < 4) throw std::invalid_argument("a run needs N >= 4 cells");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(dt_initial > 0.0)) throw std::invalid_argument("dt_initial must be positive");
  if (!(cfl_fraction > 0.0 && cfl_fraction <= 1.0))
    throw std::invalid_argument("cfl_fraction must lie in (0, 1]");
  if (dt_fixed < 0.0) throw std::invalid_argument("dt_fixed must be non-negative");
  if (!(v_floor > 0.0) || !(theta_floor > 0.0)) throw std::invalid_argument("floors must be positive");
  if (scheme_order != 1 && scheme_order != 2) throw std::invalid_argument("scheme_order must be 1 or 2");
  if (cadence == 0) throw std::invalid_argument("cadence must be positive");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be non-negative");
  if (!(diagnostics.superlevel_a > 1.0)) throw std::invalid_argument("superlevel.a must exceed 1");
}

FlowState apply_boundary(const FlowState& state) {
  std::vector<double> v(state.v().begin(), state.v().end());
  std::vector<double> u(state.u().begin(), state.u().end());
  std::vector<double> theta(state.theta().begin(), state.theta().end());
  u.front() = 0.0;
  u.back() = 0.0;
  v.back() = 1.0;
  theta.back() = 1.0;
  return FlowState(state.grid_ptr(), state.dimension(), state.t(), std::move(v), std::move(u),
                   std::move(theta));
}

double select_dt(const FlowState& state, const PhysParams& params, const RunConfig& config) {
  const auto& grid = state.grid();
  const auto v = state.v();
  const auto theta = state.theta();
  const auto r = state.r();
  const int n = state.dimension();
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double speed = std::pow(r[j + 1], n - 1) * std::sqrt(params.R * theta[j] * params.gamma());
    dt = std::min(dt, grid.width(j) * v[j] / speed);
  }
  return std::min(config.cfl_fraction * dt, config.dt_initial);
}

namespace {

// Frozen coefficients of one sub-update: geometry, volume and pressure of a
// reference state.
struct Frozen {
  std::vector<double> r;       // edges
  std::vector<double> r_pow;   // r^{n-1} at edges
  std::vector<double> r_kin;   // r^{n-2} at edges
  std::vector<double> v;       // centers
  std::vector<double> pressure;  // R theta / v at centers

  Frozen(const FlowState& s, const PhysParams& params)
      : r(s.r().begin(), s.r().end()), r_pow(s.grid().edges()), r_kin(s.grid().edges()), v(s.v().begin(), s.v().end()),
        pressure(s.grid().cells()) {
    const int n = s.dimension();
    for (std::size_t i = 0; i < r_pow.size(); ++i) {
      r_pow[i] = std::pow(s.r()[i], n - 1);
      r_kin[i] = std::pow(s.r()[i], n - 2);
    }
    for (std::size_t j = 0; j < v.size(); ++j) pressure[j] = params.R * s.theta()[j] / v[j];
  }
};

// conduction coefficient r^{2(n-1)} / v at interior edges
std::vector<double> conduction_coefficients(const MassGrid& grid, std::span<const double> r,
                                            std::span<const double> v, int n) {
  std::vector<double> k(grid.edges(), 0.0);
  for (std::size_t i = 1; i < grid.cells(); ++i)
    k[i] = std::pow(r[i], 2 * (n - 1)) / (0.5 * (v[i] + v[i - 1]));
  return k;
}

struct SubStep {
  std::vector<double> v, u, theta;
  double momentum_residual = 0.0;
  double energy_residual = 0.0;
};

// One frozen-coefficient update from `base` over dt. `coef` freezes the
// geometry and viscous coefficients, `expl` the pressure. weight = 1 is
// backward Euler in the implicit terms, 1/2 Crank-Nicolson. When
// `conduction_from_new` is set the conduction coefficients use the updated
// v and r instead of `coef`.
SubStep frozen_update(const FlowState& base, const Frozen& coef, const Frozen& expl,
                      const PhysParams& params, double dt, double weight, bool conduction_from_new,
                      const Forcing* forcing, double t_source) {
  const auto& grid = base.grid();
  const std::size_t cells = grid.cells();
  const std::size_t edges = grid.edges();
  const int n = base.dimension();
  const double beta = params.beta();
  const auto u_old = base.u();
  const auto v_old = base.v();
  const auto th_old = base.theta();

  std::vector<std::array<double, 3>> src_c, src_e;
  if (forcing != nullptr) {
    src_c.resize(cells);
    src_e.resize(edges);
    for (std::size_t j = 0; j < cells; ++j) src_c[j] = (*forcing)(grid.center(j), t_source);
    for (std::size_t i = 0; i < edges; ++i) src_e[i] = (*forcing)(grid.edge(i), t_source);
  }

  // viscous coefficients a_j = beta / (dx_j v_j)
  std::vector<double> a(cells);
  for (std::size_t j = 0; j < cells; ++j) a[j] = beta / (grid.width(j) * coef.v[j]);

  // Momentum in the flux unknown W = r^{n-1} u on interior edges 1..N-1:
  // (h / r_pow^2)(W - W_old) = dt [a_i (W_{i+1} - W_i) - a_{i-1} (W_i - W_{i-1})]_weighted
  //                             - dt (p_i - p_{i-1}) + dt h S_u / r_pow
  const std::size_t m = edges - 2;
  std::vector<double> w_old(edges, 0.0);
  for (std::size_t i = 0; i < edges; ++i) w_old[i] = coef.r_pow[i] * u_old[i];
  w_old.front() = 0.0;
  w_old.back() = 0.0;

  Tridiagonal mom(m);
  std::vector<double> rhs(m);
  for (std::size_t row = 0; row < m; ++row) {
    const std::size_t i = row + 1;
    const double h = grid.dual_width(i);
    const double mass = h / (coef.r_pow[i] * coef.r_pow[i]);
    mom.diag[row] = mass + weight * dt * (a[i] + a[i - 1]);
    mom.lower[row] = -weight * dt * a[i - 1];
    mom.upper[row] = -weight * dt * a[i];
    const double explicit_visc =
        a[i] * (w_old[i + 1] - w_old[i]) - a[i - 1] * (w_old[i] - w_old[i - 1]);
    rhs[row] = mass * w_old[i] + (1.0 - weight) * dt * explicit_visc -
               dt * (expl.pressure[i] - expl.pressure[i - 1]);
    if (forcing != nullptr) rhs[row] += dt * h * src_e[i][1] / coef.r_pow[i];
  }
  const auto w_inner = mom.solve(rhs);

  SubStep out;
  out.momentum_residual = mom.residual(w_inner, rhs);
  std::vector<double> w_new(edges, 0.0);
  std::copy(w_inner.begin(), w_inner.end(), w_new.begin() + 1);
  out.u.assign(edges, 0.0);
  for (std::size_t i = 1; i + 1 < edges; ++i) out.u[i] = w_new[i] / coef.r_pow[i];

  // transport velocity and flux used by the mass and energy updates
  std::vector<double> u_w(edges), w_w(edges);
  for (std::size_t i = 0; i < edges; ++i) {
    u_w[i] = weight * out.u[i] + (1.0 - weight) * u_old[i];
    w_w[i] = weight * w_new[i] + (1.0 - weight) * w_old[i];
  }

  out.v.resize(cells);
  std::vector<double> flux_x(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    flux_x[j] = (w_w[j + 1] - w_w[j]) / grid.width(j);
    out.v[j] = v_old[j] + dt * flux_x[j];
    if (forcing != nullptr) out.v[j] += dt * src_c[j][0];
  }
  out.v.back() = 1.0;

  // conduction coefficients
  std::vector<double> kc;
  if (conduction_from_new) {
    bool positive = std::all_of(out.v.begin(), out.v.end(), [](double x) { return x > 0.0; });
    if (!positive) {
      out.theta.assign(cells, std::numeric_limits<double>::quiet_NaN());
      return out;
    }
    const auto r_new = radius_from_volume(grid, out.v, n);
    kc = conduction_coefficients(grid, r_new, out.v, n);
  } else {
    kc = conduction_coefficients(grid, coef.r, coef.v, n);
  }

  // Energy on cells 0..N-2, the last cell is pinned at theta = 1:
  // cv dx (theta - theta_old) = dt kappa [kc_{j+1}(theta_{j+1}-theta_j)/h_{j+1} - kc_j(...)/h_j]
  //                            + dt dx (sigma D - 2 mu (n-1) (r^{n-2} u^2)_x + S_theta)
  const std::size_t me = cells - 1;
  std::vector<double> g(edges, 0.0);  // kappa kc / h at interior edges
  for (std::size_t i = 1; i < cells; ++i) g[i] = params.kappa * kc[i] / grid.dual_width(i);
  Tridiagonal heat(me);
  std::vector<double> erhs(me);
  for (std::size_t j = 0; j < me; ++j) {
    const double dx = grid.width(j);
    const double sigma = beta * flux_x[j] / coef.v[j] - expl.pressure[j];
    const double kinetic_x =
        (coef.r_kin[j + 1] * u_w[j + 1] * u_w[j + 1] - coef.r_kin[j] * u_w[j] * u_w[j]) / dx;
    double source = sigma * flux_x[j] - 2.0 * params.mu * (n - 1) * kinetic_x;
    if (forcing != nullptr) source += src_c[j][2];

    const double left = j == 0 ? 0.0 : g[j];
    const double right = g[j + 1];
    heat.diag[j] = params.cv * dx + weight * dt * (left + right);
    heat.lower[j] = -weight * dt * left;
    heat.upper[j] = -weight * dt * right;
    const double th_left = j == 0 ? th_old[0] : th_old[j - 1];
    const double explicit_cond = right * (th_old[j + 1] - th_old[j]) - left * (th_old[j] - th_left);
    erhs[j] = params.cv * dx * th_old[j] + (1.0 - weight) * dt * explicit_cond + dt * dx * source;
  }
  // pinned far-field cell enters the last row as known data
  erhs[me - 1] += weight * dt * g[me] * 1.0;
  const auto th_inner = heat.solve(erhs);
  out.energy_residual = heat.residual(th_inner, erhs);
  out.theta.assign(th_inner.begin(), th_inner.end());
  out.theta.push_back(1.0);
  return out;
}

bool above_floors(const SubStep& s, const StepOptions& options) {
  auto ok = [](const std::vector<double>& f, double floor) {
    return std::all_of(f.begin(), f.end(), [floor](double x) { return x >= floor; });
  };
  return ok(s.v, options.v_floor) && ok(s.theta, options.theta_floor);
}

}  // namespace

StepResult step(const FlowState& state, const PhysParams& params, double dt, const StepOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  StepResult result;
  result.report.dt = dt;
  const Frozen old_coef(state, params);

  if (options.scheme_order == 1) {
    SubStep s = frozen_update(state, old_coef, old_coef, params, dt, 1.0, true, options.forcing,
                              state.t() + 0.5 * dt);
    result.report.momentum_residual = s.momentum_residual;
    result.report.energy_residual = s.energy_residual;
    if (!above_floors(s, options)) {
      result.report.floor_violated = true;
      return result;
    }
    result.state.emplace(state.grid_ptr(), state.dimension(), state.t() + dt, std::move(s.v),
                         std::move(s.u), std::move(s.theta));
    return result;
  }

  // predictor: half step of the first-order update gives the midpoint state
  SubStep half = frozen_update(state, old_coef, old_coef, params, 0.5 * dt, 1.0, true, options.forcing,
                               state.t() + 0.25 * dt);
  if (!above_floors(half, options)) {
    result.report.floor_violated = true;
    return result;
  }
  const FlowState mid(state.grid_ptr(), state.dimension(), state.t() + 0.5 * dt, std::move(half.v),
                      std::move(half.u), std::move(half.theta));
  const Frozen mid_coef(mid, params);
  SubStep s = frozen_update(state, mid_coef, mid_coef, params, dt, 0.5, false, options.forcing,
                            state.t() + 0.5 * dt);
  result.report.momentum_residual = std::max(half.momentum_residual, s.momentum_residual);
  result.report.energy_residual = std::max(half.energy_residual, s.energy_residual);
  if (!above_floors(s, options)) {
    result.report.floor_violated = true;
    return result;
  }
  result.state.emplace(state.grid_ptr(), state.dimension(), state.t() + dt, std::move(s.v),
                       std::move(s.u), std::move(s.theta));
  return result;
}

std::pair<FlowState, StepReport> advance(const FlowState& state, const PhysParams& params, double dt,
                                         const StepOptions& options, int max_retries) {
  int rejections = 0;
  while (true) {
    StepResult r = step(state, params, dt, options);
    if (r.state) {
      r.report.rejections = rejections;
      return {std::move(*r.state), r.report};
    }
    if (++rejections > max_retries)
      throw PositivityFailure("positivity floors violated after " + std::to_string(max_retries) +
                                  " dt halvings",
                              state.t());
    dt *= 0.5;
  }
}

namespace {

double relative_change(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(b[i] - a[i]) / std::max(1.0, std::abs(a[i])));
  return worst;
}

}  // namespace

RunResult run(const RunConfig& config, const PhysParams& params, const Forcing* forcing,
              const StepObserver& observer) {
  config.validate();
  params.validate();
  auto grid = std::make_shared<const MassGrid>(build_mass_grid(config.x_max, config.n_cells, config.grading));
  return run_from(make_initial_data(grid, config.profile, params), config, params, forcing, observer);
}

RunResult run_from(FlowState initial, const RunConfig& config, const PhysParams& params,
                   const Forcing* forcing, const StepObserver& observer) {
  config.validate();
  params.validate();

  RunResult out;
  DiagnosticsRecorder recorder(params, config.diagnostics);
  FlowState state = std::move(initial);
  std::vector<double> r_shadow(state.r().begin(), state.r().end());

  auto& sum = out.summary;
  auto track_extremes = [&sum](const FlowState& s) {
    const auto v = s.v();
    const auto th = s.theta();
    const auto r = s.r();
    sum.v_min = std::min(sum.v_min, *std::min_element(v.begin(), v.end()));
    sum.v_max = std::max(sum.v_max, *std::max_element(v.begin(), v.end()));
    sum.theta_min = std::min(sum.theta_min, *std::min_element(th.begin(), th.end()));
    sum.theta_max = std::max(sum.theta_max, *std::max_element(th.begin(), th.end()));
    sum.r_min = std::min(sum.r_min, *std::min_element(r.begin(), r.end()));
  };
  sum.v_min = sum.theta_min = sum.r_min = std::numeric_limits<double>::infinity();
  sum.v_max = sum.theta_max = -std::numeric_limits<double>::infinity();
  track_extremes(state);

  recorder.sample(state, 0.0);
  out.snapshots.push_back(state);

  const StepOptions options{config.scheme_order, config.v_floor, config.theta_floor, forcing};
  std::size_t steps = 0;
  const double t_tol = 1e-12 * config.t_end;
  while (state.t() < config.t_end - t_tol) {
    double dt = config.dt_fixed > 0.0 ? config.dt_fixed : select_dt(state, params, config);
    const bool last = state.t() + dt >= config.t_end - t_tol;
    if (last) dt = config.t_end - state.t();

    auto [next, report] = advance(state, params, dt, options, config.max_retries);
    if (last && report.rejections == 0) next = next.with_time(config.t_end);
    ++steps;
    sum.rejections += report.rejections;

    for (std::size_t i = 0; i < r_shadow.size(); ++i)
      r_shadow[i] += report.dt * 0.5 * (state.u()[i] + next.u()[i]);
    double gap = 0.0;
    for (std::size_t i = 0; i < r_shadow.size(); ++i)
      gap = std::max(gap, std::abs(r_shadow[i] - next.r()[i]));
    sum.max_r_shadow_gap = std::max(sum.max_r_shadow_gap, gap);

    sum.max_step_change = std::max({sum.max_step_change, relative_change(state.v(), next.v()),
                                    relative_change(state.u(), next.u()),
                                    relative_change(state.theta(), next.theta())});
    track_extremes(next);
    if (observer) observer(state, next, report);

    state = std::move(next);
    const bool done = state.t() >= config.t_end - t_tol;
    if (done || steps % config.cadence == 0) recorder.sample(state, gap);
    if (done || (config.snapshot_cadence > 0 && steps % config.snapshot_cadence == 0))
      out.snapshots.push_back(state);
  }

  out.series = recorder.series();
  sum.t_end = state.t();
  sum.steps = steps;
  sum.samples = out.series.size();
  sum.energy_initial = out.series.front().energy;
  sum.energy_final = out.series.back().energy;
  sum.energy_max = 0.0;
  for (const auto& s : out.series) sum.energy_max = std::max(sum.energy_max, s.energy);
  sum.sup_initial = out.series.front().sup_all();
  sum.sup_final = out.series.back().sup_all();
  sum.balance_residual = std::abs(out.series.back().balance_defect);
  if (recorder.probe()) {
    sum.repr_residual = recorder.probe()->result().residual;
    out.representation = recorder.probe()->result();
  }
  sum.invariants = recorder.invariants();
  return out;
}

}  // namespace lagns
