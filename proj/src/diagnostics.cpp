#include "lagns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lagns {

namespace {

double entropy_gap(double y) { return y - std::log(y) - 1.0; }

double sq(double x) { return x * x; }

}  // namespace

double energy_functional(const FlowState& state, const PhysParams& params) {
  const auto& grid = state.grid();
  const auto v = state.v();
  const auto u = state.u();
  const auto theta = state.theta();
  double e = 0.0;
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double kinetic = 0.25 * (u[j] * u[j] + u[j + 1] * u[j + 1]);
    e += grid.width(j) *
         (params.R * entropy_gap(v[j]) + kinetic + params.cv * entropy_gap(theta[j]));
  }
  return e;
}

namespace {

// r^{2(n-1)} theta_x^2 / (v theta^2) summed over interior edges with dual widths
double conduction_dissipation(const FlowState& state) {
  const auto& grid = state.grid();
  const auto v = state.v();
  const auto theta = state.theta();
  const auto r = state.r();
  const int n = state.dimension();
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.cells(); ++i) {
    const double h = grid.dual_width(i);
    const double theta_x = (theta[i] - theta[i - 1]) / h;
    const double v_edge = 0.5 * (v[i] + v[i - 1]);
    sum += h * std::pow(r[i], 2 * (n - 1)) * theta_x * theta_x /
           (v_edge * theta[i] * theta[i - 1]);
  }
  return sum;
}

}  // namespace

std::array<double, 4> dissipation_rate(const FlowState& state, const PhysParams& /*params*/) {
  const auto& grid = state.grid();
  const auto v = state.v();
  const auto u = state.u();
  const auto theta = state.theta();
  const auto g = discrete_gradients(state);
  const int n = state.dimension();
  std::array<double, 4> d{0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double dx = grid.width(j);
    const double rc = state.r_center(j);
    const double uc = 0.5 * (u[j] + u[j + 1]);
    const double vt = v[j] * theta[j];
    d[0] += dx * v[j] * uc * uc / (rc * rc * theta[j]);
    d[1] += dx * std::pow(rc, 2 * (n - 1)) * g.u_x[j] * g.u_x[j] / vt;
    d[2] += dx * g.flux_x[j] * g.flux_x[j] / vt;
  }
  d[3] = conduction_dissipation(state);
  return d;
}

double balance_dissipation(const FlowState& state, const PhysParams& params) {
  const auto& grid = state.grid();
  const auto v = state.v();
  const auto theta = state.theta();
  const auto g = discrete_gradients(state);
  const int n = state.dimension();
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    sum += grid.width(j) * (params.beta() * g.flux_x[j] * g.flux_x[j] / (v[j] * theta[j]) -
                            2.0 * params.mu * (n - 1) * g.kinetic_x[j] / theta[j]);
  }
  return sum + params.kappa * conduction_dissipation(state);
}

double energy_balance_defect(std::span<const FlowState> history, const PhysParams& params) {
  if (history.size() < 2) throw std::invalid_argument("energy balance needs at least two samples");
  double integral = 0.0;
  double prev_rate = balance_dissipation(history[0], params);
  for (std::size_t s = 1; s < history.size(); ++s) {
    const double rate = balance_dissipation(history[s], params);
    integral += 0.5 * (history[s].t() - history[s - 1].t()) * (rate + prev_rate);
    prev_rate = rate;
  }
  return energy_functional(history.back(), params) + integral -
         energy_functional(history.front(), params);
}

double viscous_quadratic_form(const PhysParams& params, double a, double b) {
  const double m = params.n - 1.0;
  const double div = a + m * b;
  return params.beta() * div * div - 2.0 * params.mu * m * (2.0 * b * div - params.n * b * b);
}

double viscous_form_gap(const PhysParams& params) {
  params.validate();
  // Q = beta a^2 + 2 (n-1) lambda a b + [beta (n-1)^2 - 2 mu (n-1)(n-2)] b^2
  const double m = params.n - 1.0;
  const double p = params.beta();
  const double q = m * params.lambda;
  const double s = params.beta() * m * m - 2.0 * params.mu * m * (params.n - 2.0);
  const double mean = 0.5 * (p + s);
  const double radius = std::hypot(0.5 * (p - s), q);
  // smaller root via the product of the eigenvalues to avoid cancellation
  const double larger = mean + radius;
  return (p * s - q * q) / larger;
}

double viscous_form_margin(const FlowState& state, const PhysParams& params) {
  const double c_min = viscous_form_gap(params);
  const auto g = discrete_gradients(state);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < state.grid().cells(); ++j) {
    const double a = g.r_pow_u_x[j];
    const double b = g.geom_vu[j] / (params.n - 1.0);
    const double norm = a * a + b * b;
    const double margin = viscous_quadratic_form(params, a, b) - c_min * norm;
    worst = std::min(worst, margin / std::max(1.0, norm));
  }
  return worst;
}

std::pair<double, double> cell_averages(const FlowState& state, int k) {
  const auto& grid = state.grid();
  const double lo = k;
  const double hi = k + 1.0;
  if (k < 0 || hi > grid.x_max() * (1.0 + 1e-14))
    throw std::out_of_range("averaging interval leaves the mass grid");
  const auto v = state.v();
  const auto theta = state.theta();
  double sv = 0.0, st = 0.0, w = 0.0;
  for (std::size_t j = grid.locate(lo); j < grid.cells() && grid.edge(j) < hi; ++j) {
    const double overlap = std::min(hi, grid.edge(j + 1)) - std::max(lo, grid.edge(j));
    if (overlap <= 0.0) continue;
    sv += overlap * v[j];
    st += overlap * theta[j];
    w += overlap;
  }
  return {sv / w, st / w};
}

std::pair<double, double> anchor_roots(double cbar) {
  if (cbar < 0.0) throw std::invalid_argument("anchor level must be non-negative");
  if (cbar == 0.0) return {1.0, 1.0};
  auto bisect = [cbar](double lo, double hi, bool decreasing) {
    // y - ln y - 1 is decreasing on (0, 1] and increasing on [1, inf)
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool above = entropy_gap(mid) > cbar;
      if (above == decreasing) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  // lower root: entropy_gap(y) > cbar for y < alpha1; e^{-cbar-1} undershoots it
  const double lo = std::exp(-cbar - 1.0);
  double hi2 = 2.0;
  while (entropy_gap(hi2) < cbar) hi2 *= 2.0;
  return {bisect(lo, 1.0, true), bisect(1.0, hi2, false)};
}

double superlevel_measure(const FlowState& state, double a) {
  if (!(a > 1.0)) throw std::invalid_argument("superlevel threshold must exceed 1");
  const auto theta = state.theta();
  double m = 0.0;
  for (std::size_t j = 0; j < state.grid().cells(); ++j)
    if (theta[j] > a) m += state.grid().width(j);
  return m;
}

double superlevel_bound(double energy, const PhysParams& params, double a) {
  return energy / (params.cv * entropy_gap(a));
}

double DiagnosticSample::sup_all() const { return std::max({sup[0], sup[1], sup[2]}); }

DiagnosticSample norm_report(const FlowState& state, const FlowState* prev, const PhysParams& params,
                             const DiagnosticsOptions& options) {
  const auto& grid = state.grid();
  const auto v = state.v();
  const auto u = state.u();
  const auto theta = state.theta();
  const auto r = state.r();
  const int n = state.dimension();
  const std::size_t cells = grid.cells();
  const auto g = discrete_gradients(state);

  DiagnosticSample s;
  s.t = state.t();
  s.energy = energy_functional(state, params);
  s.dissipation = dissipation_rate(state, params);
  s.balance_rate = balance_dissipation(state, params);
  s.f = s.dissipation[3];
  s.g = s.dissipation[0] + s.dissipation[1];
  s.omega_measure = superlevel_measure(state, options.superlevel_a);

  s.v_min = *std::min_element(v.begin(), v.end());
  s.v_max = *std::max_element(v.begin(), v.end());
  s.theta_min = *std::min_element(theta.begin(), theta.end());
  s.theta_max = *std::max_element(theta.begin(), theta.end());

  for (std::size_t j = 0; j < cells; ++j) {
    const double dx = grid.width(j);
    const double rc = state.r_center(j);
    s.l2[0] += dx * sq(v[j] - 1.0);
    s.l2[2] += dx * sq(theta[j] - 1.0);
    s.l2_grad[1] += dx * std::pow(rc, 2 * (n - 1)) * sq(g.u_x[j]);
    s.grad_sq[1] += dx * sq(g.u_x[j]);
    s.sup[0] = std::max(s.sup[0], std::abs(v[j] - 1.0));
    s.sup[2] = std::max(s.sup[2], std::abs(theta[j] - 1.0));
    s.theta_u4 += dx * (sq(theta[j] - 1.0) + 0.5 * (std::pow(u[j], 4) + std::pow(u[j + 1], 4)));
  }
  for (std::size_t i = 0; i < grid.edges(); ++i) s.sup[1] = std::max(s.sup[1], std::abs(u[i]));

  for (std::size_t i = 1; i < cells; ++i) {
    const double h = grid.dual_width(i);
    const double r2 = std::pow(r[i], 2 * (n - 1));
    s.l2[1] += h * u[i] * u[i];
    s.l2_grad[0] += h * r2 * sq(g.v_x[i]);
    s.l2_grad[2] += h * r2 * sq(g.theta_x[i]);
    s.grad_sq[0] += h * sq(g.v_x[i]);
    s.grad_sq[2] += h * sq(g.theta_x[i]);
    s.rate_v_x += h * (1.0 + 0.5 * (theta[i] + theta[i - 1])) * sq(g.v_x[i]);
    // three-point second difference of u on the possibly graded grid
    const double u_xx = 2.0 * ((u[i + 1] - u[i]) / grid.width(i) - (u[i] - u[i - 1]) / grid.width(i - 1)) /
                        (grid.width(i) + grid.width(i - 1));
    s.rate_u_xx += h * r2 * u_xx * u_xx;
  }
  for (std::size_t j = 0; j + 1 < cells; ++j) {
    // ghost cell mirrors cell 0 across x = 0
    const double left = j == 0 ? theta[0] : theta[j - 1];
    const double h_left = j == 0 ? grid.width(0) : grid.dual_width(j);
    const double h_right = grid.dual_width(j + 1);
    const double theta_xx =
        2.0 * ((theta[j + 1] - theta[j]) / h_right - (theta[j] - left) / h_left) / (h_left + h_right);
    s.rate_theta_xx += grid.width(j) * std::pow(state.r_center(j), 2 * (n - 1)) * sq(theta_xx);
  }
  for (auto& x : s.l2) x = std::sqrt(x);
  for (auto& x : s.l2_grad) x = std::sqrt(x);

  if (prev != nullptr) {
    if (prev->grid().cells() != cells) throw std::invalid_argument("previous sample uses another grid");
    const double dt = state.t() - prev->t();
    if (dt > 0.0) {
      const auto pu = prev->u();
      const auto pth = prev->theta();
      for (std::size_t i = 1; i < cells; ++i) s.rate_u_t += grid.dual_width(i) * sq((u[i] - pu[i]) / dt);
      for (std::size_t j = 0; j < cells; ++j) s.rate_theta_t += grid.width(j) * sq((theta[j] - pth[j]) / dt);
    }
  }
  return s;
}

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> columns = {
      "t", "E", "D1", "D2", "D3", "D4", "balance_rate", "balance_defect",
      "l2_v", "l2_u", "l2_theta", "l2_rv_x", "l2_ru_x", "l2_rtheta_x",
      "sup_v", "sup_u", "sup_theta", "v_min", "v_max", "theta_min", "theta_max",
      "f", "g", "omega_measure", "theta_u4", "vx_sq", "ux_sq", "thetax_sq",
      "rate_v_x", "rate_u_xx", "rate_theta_xx", "rate_u_t", "rate_theta_t",
      "acc_v_x", "acc_u_xx", "acc_theta_xx", "acc_u_t", "acc_theta_t",
      "tv_vx_sq", "tv_ux_sq", "tv_thetax_sq", "repr_v", "repr_residual", "r_shadow_gap"};
  return columns;
}

std::vector<double> diagnostics_row(const DiagnosticSample& s) {
  std::vector<double> row = {s.t, s.energy};
  row.insert(row.end(), s.dissipation.begin(), s.dissipation.end());
  row.push_back(s.balance_rate);
  row.push_back(s.balance_defect);
  row.insert(row.end(), s.l2.begin(), s.l2.end());
  row.insert(row.end(), s.l2_grad.begin(), s.l2_grad.end());
  row.insert(row.end(), s.sup.begin(), s.sup.end());
  row.insert(row.end(), {s.v_min, s.v_max, s.theta_min, s.theta_max, s.f, s.g, s.omega_measure,
                         s.theta_u4});
  row.insert(row.end(), s.grad_sq.begin(), s.grad_sq.end());
  row.insert(row.end(), {s.rate_v_x, s.rate_u_xx, s.rate_theta_xx, s.rate_u_t, s.rate_theta_t});
  row.insert(row.end(), s.accumulators.begin(), s.accumulators.end());
  row.insert(row.end(), s.total_variation.begin(), s.total_variation.end());
  row.insert(row.end(), {s.repr_v, s.repr_residual, s.r_shadow_gap});
  return row;
}

DiagnosticSample diagnostics_from_row(std::span<const double> row) {
  if (row.size() != diagnostics_columns().size())
    throw std::invalid_argument("diagnostics row has the wrong number of columns");
  DiagnosticSample s;
  std::size_t c = 0;
  auto next = [&] { return row[c++]; };
  s.t = next();
  s.energy = next();
  for (auto& x : s.dissipation) x = next();
  s.balance_rate = next();
  s.balance_defect = next();
  for (auto& x : s.l2) x = next();
  for (auto& x : s.l2_grad) x = next();
  for (auto& x : s.sup) x = next();
  s.v_min = next();
  s.v_max = next();
  s.theta_min = next();
  s.theta_max = next();
  s.f = next();
  s.g = next();
  s.omega_measure = next();
  s.theta_u4 = next();
  for (auto& x : s.grad_sq) x = next();
  s.rate_v_x = next();
  s.rate_u_xx = next();
  s.rate_theta_xx = next();
  s.rate_u_t = next();
  s.rate_theta_t = next();
  for (auto& x : s.accumulators) x = next();
  for (auto& x : s.total_variation) x = next();
  s.repr_v = next();
  s.repr_residual = next();
  s.r_shadow_gap = next();
  return s;
}

bool RunSummary::all_passed() const {
  return std::all_of(invariants.begin(), invariants.end(), [](const auto& f) { return f.passed; });
}

const InvariantFlag* RunSummary::find(const std::string& name) const {
  for (const auto& f : invariants)
    if (f.name == name) return &f;
  return nullptr;
}

DiagnosticsRecorder::DiagnosticsRecorder(const PhysParams& params, DiagnosticsOptions options)
    : params_(params), options_(options) {
  if (options_.probe_enabled) probe_.emplace(params_, options_.probe_k, options_.probe_x);
}

InvariantFlag& DiagnosticsRecorder::flag(const std::string& name) {
  for (auto& f : flags_)
    if (f.name == name) return f;
  flags_.push_back({name, true, std::numeric_limits<double>::infinity()});
  return flags_.back();
}

void DiagnosticsRecorder::check(const std::string& name, double margin, double tol) {
  auto& f = flag(name);
  f.worst = std::min(f.worst, margin);
  if (!(margin >= -tol)) f.passed = false;
}

void DiagnosticsRecorder::sample(const FlowState& state, double r_shadow_gap) {
  const FlowState* prev = prev_ ? &*prev_ : nullptr;
  DiagnosticSample s = norm_report(state, prev, params_, options_);
  s.r_shadow_gap = r_shadow_gap;

  if (series_.empty()) {
    const double cbar = s.energy / std::min(params_.R, params_.cv);
    std::tie(anchor_lo_, anchor_hi_) = anchor_roots(cbar);
  } else {
    const auto& last = series_.back();
    const double dt = s.t - last.t;
    s.balance_defect = last.balance_defect + (s.energy - last.energy) +
                       0.5 * dt * (s.balance_rate + last.balance_rate);
    const std::array<double, 5> trap = {
        0.5 * dt * (s.rate_v_x + last.rate_v_x), 0.5 * dt * (s.rate_u_xx + last.rate_u_xx),
        0.5 * dt * (s.rate_theta_xx + last.rate_theta_xx), dt * s.rate_u_t, dt * s.rate_theta_t};
    for (std::size_t a = 0; a < 5; ++a) s.accumulators[a] = last.accumulators[a] + trap[a];
    for (std::size_t a = 0; a < 3; ++a)
      s.total_variation[a] = last.total_variation[a] + std::abs(s.grad_sq[a] - last.grad_sq[a]);

    const double increment = s.balance_defect - last.balance_defect;
    check("energy_monotone", last.energy + std::abs(increment) - s.energy, 1e-14 * last.energy + 1e-15);
    check("accumulators_monotone",
          *std::min_element(trap.begin(), trap.end()), 0.0);
  }

  if (probe_) {
    probe_->add(state);
    s.repr_v = probe_->result().v_repr.back();
    s.repr_residual = std::abs(s.repr_v - probe_->result().v_solved.back()) /
                      probe_->result().v_solved.back();
  }

  const double tol = options_.check_tol;
  check("energy_nonnegative", s.energy, 0.0);
  check("dissipation_nonnegative", *std::min_element(s.dissipation.begin(), s.dissipation.end()), 0.0);
  check("viscous_form_pointwise", viscous_form_margin(state, params_), 1e-12);
  check("superlevel_bound", superlevel_bound(s.energy, params_, options_.superlevel_a) - s.omega_measure,
        tol);
  const double e0 = series_.empty() ? s.energy : series_.front().energy;
  check("superlevel_bound_initial",
        superlevel_bound(e0, params_, options_.superlevel_a) - s.omega_measure, tol);

  double sandwich = std::numeric_limits<double>::infinity();
  const int k_max = static_cast<int>(std::floor(state.grid().x_max() + 1e-12)) - 1;
  for (int k = 0; k <= k_max; ++k) {
    const auto [vbar, thbar] = cell_averages(state, k);
    sandwich = std::min({sandwich, vbar - anchor_lo_, anchor_hi_ - vbar, thbar - anchor_lo_,
                         anchor_hi_ - thbar});
  }
  if (k_max >= 0) check("anchor_sandwich", sandwich, tol);

  const auto r = state.r();
  check("radius_floor", *std::min_element(r.begin(), r.end()) - 1.0, 0.0);
  check("positivity", std::min(s.v_min, s.theta_min), 0.0);

  series_.push_back(s);
  prev_ = state;
}

}  // namespace lagns
