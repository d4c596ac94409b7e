#include "lagns/representation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lagns {

double cutoff_phi(double x, int k) {
  if (x <= k) return 1.0;
  if (x >= k + 1.0) return 0.0;
  return k + 1.0 - x;
}

namespace {

// value of a center-located field at x, linear between centers, constant past the ends
double center_value(const MassGrid& grid, std::span<const double> f, double x) {
  const auto c = grid.cell_centers();
  if (x <= c.front()) return f.front();
  if (x >= c.back()) return f.back();
  const auto it = std::upper_bound(c.begin(), c.end(), x);
  const auto j = static_cast<std::size_t>(std::distance(c.begin(), it));
  const double s = (x - c[j - 1]) / (c[j] - c[j - 1]);
  return f[j - 1] + s * (f[j] - f[j - 1]);
}

// int_a^b phi(y) F(y) dy with F linear between edges; trapezoid on the merged breakpoints
template <class EdgeValue>
double tail_integral(const MassGrid& grid, double a, double b, int k, EdgeValue edge_value) {
  const auto x = grid.x_edges();
  auto value_at = [&](double y) {
    const std::size_t j = grid.locate(y);
    const double s = (y - x[j]) / (x[j + 1] - x[j]);
    return cutoff_phi(y, k) * ((1.0 - s) * edge_value(j) + s * edge_value(j + 1));
  };
  std::vector<double> pts = {a, b};
  if (k > a && k < b) pts.push_back(k);
  for (double e : x)
    if (e > a && e < b) pts.push_back(e);
  std::sort(pts.begin(), pts.end());
  double sum = 0.0;
  double prev = value_at(pts[0]);
  for (std::size_t p = 1; p < pts.size(); ++p) {
    const double cur = value_at(pts[p]);
    sum += 0.5 * (pts[p] - pts[p - 1]) * (prev + cur);
    prev = cur;
  }
  return sum;
}

// int_0^h g(s) exp(-L(s)) ds with g and L linear from (g0, L0) to (g1, L1)
double exp_fitted_integral(double h, double g0, double g1, double l0, double l1) {
  const double d = l1 - l0;
  double phi1, phi2;
  if (std::abs(d) < 1e-3) {
    phi1 = 1.0 - d / 2.0 + d * d / 6.0 - d * d * d / 24.0 + d * d * d * d / 120.0;
    phi2 = 0.5 - d / 3.0 + d * d / 8.0 - d * d * d / 30.0 + d * d * d * d / 144.0;
  } else {
    const double one_minus = -std::expm1(-d);
    phi1 = one_minus / d;
    phi2 = (one_minus - d * std::exp(-d)) / (d * d);
  }
  return h * std::exp(-l0) * (g0 * phi1 + (g1 - g0) * phi2);
}

}  // namespace

ProbeSample probe_sample(const FlowState& state, const PhysParams& params, int k, double x_probe) {
  const auto& grid = state.grid();
  if (k < 1 || k + 1.0 > grid.x_max() * (1.0 + 1e-14))
    throw std::invalid_argument("representation interval [k, k+1] leaves the grid");
  if (!(x_probe > k - 2.0 && x_probe < k && x_probe >= 0.0))
    throw std::invalid_argument("representation probe must lie in (k-2, k)");

  const auto r = state.r();
  const auto u = state.u();
  const int n = state.dimension();

  ProbeSample s;
  s.t = state.t();
  s.v = center_value(grid, state.v(), x_probe);
  s.theta = center_value(grid, state.theta(), x_probe);
  s.tail_u = tail_integral(grid, x_probe, k + 1.0, k,
                           [&](std::size_t i) { return std::pow(r[i], 1 - n) * u[i]; });
  s.tail_u2 = tail_integral(grid, x_probe, k + 1.0, k,
                            [&](std::size_t i) { return std::pow(r[i], -n) * u[i] * u[i]; });

  const auto sigma = stress_sigma(state, params);
  const double lo = k, hi = k + 1.0;
  for (std::size_t j = grid.locate(lo); j < grid.cells() && grid.edge(j) < hi; ++j) {
    const double overlap = std::min(hi, grid.edge(j + 1)) - std::max(lo, grid.edge(j));
    if (overlap > 0.0) s.stress_avg += overlap * sigma[j];
  }
  return s;
}

RepresentationProbe::RepresentationProbe(const PhysParams& params, int k, double x_probe)
    : params_(params), k_(k), x_(x_probe) {}

void RepresentationProbe::add(const FlowState& state) {
  const ProbeSample s = probe_sample(state, params_, k_, x_);
  const double beta = params_.beta();
  double log_b;
  if (result_.t.empty()) {
    first_ = s;
    log_y_ = 0.0;
    integral_ = 0.0;
    log_b = std::log(s.v);
  } else {
    const double dt = s.t - last_.t;
    log_y_ += (0.5 * dt * (s.stress_avg + last_.stress_avg) -
               (params_.n - 1.0) * 0.5 * dt * (s.tail_u2 + last_.tail_u2)) / beta;
    log_b = std::log(first_.v) + (first_.tail_u - s.tail_u) / beta;
    integral_ += exp_fitted_integral(dt, last_.theta, s.theta, log_by_last_, log_b + log_y_);
  }
  const double log_by = log_b + log_y_;
  const double v_repr = std::exp(log_by) * (1.0 + params_.R / beta * integral_);

  result_.t.push_back(s.t);
  result_.B.push_back(std::exp(log_b));
  result_.Y.push_back(std::exp(log_y_));
  result_.v_repr.push_back(v_repr);
  result_.v_solved.push_back(s.v);
  result_.residual = std::max(result_.residual, std::abs(v_repr - s.v) / s.v);
  last_ = s;
  log_by_last_ = log_by;
}

RepresentationResult local_representation(std::span<const FlowState> history,
                                          const PhysParams& params, int k, double x_probe) {
  if (history.empty()) throw std::invalid_argument("representation needs a non-empty history");
  RepresentationProbe probe(params, k, x_probe);
  for (const auto& s : history) probe.add(s);
  return probe.result();
}

}  // namespace lagns
