#include "lagns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lagns {

MassGrid::MassGrid(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw std::invalid_argument("mass grid needs at least one cell");
  if (edges_.front() != 0.0) throw std::invalid_argument("mass grid must start at x = 0");
  centers_.resize(edges_.size() - 1);
  widths_.resize(edges_.size() - 1);
  for (std::size_t j = 0; j + 1 < edges_.size(); ++j) {
    widths_[j] = edges_[j + 1] - edges_[j];
    if (!(widths_[j] > 0.0)) throw std::invalid_argument("mass grid edges must be strictly increasing");
    centers_[j] = 0.5 * (edges_[j] + edges_[j + 1]);
  }
}

std::size_t MassGrid::locate(double x) const {
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  if (it == edges_.begin()) return 0;
  auto j = static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
  return std::min(j, cells() - 1);
}

MassGrid build_mass_grid(double x_max, std::size_t n_cells, Grading grading) {
  if (!(x_max > 0.0)) throw std::invalid_argument("X_max must be positive");
  if (n_cells < 2) throw std::invalid_argument("mass grid needs at least 2 cells");
  if (!(grading.ratio >= 1.0 && grading.ratio <= 1.2))
    throw std::invalid_argument("geometric grading ratio must lie in [1, 1.2]");

  std::vector<double> edges(n_cells + 1, 0.0);
  if (grading.ratio == 1.0) {
    const double h = x_max / static_cast<double>(n_cells);
    for (std::size_t i = 1; i < n_cells; ++i) edges[i] = h * static_cast<double>(i);
  } else {
    // first width from the geometric sum h0 (q^N - 1) / (q - 1) = X_max
    const double q = grading.ratio;
    const double h0 = x_max * (q - 1.0) / (std::pow(q, static_cast<double>(n_cells)) - 1.0);
    double h = h0;
    for (std::size_t i = 1; i < n_cells; ++i) {
      edges[i] = edges[i - 1] + h;
      h *= q;
    }
  }
  edges[n_cells] = x_max;
  return MassGrid(std::move(edges));
}

std::vector<double> radius_from_volume(const MassGrid& grid, std::span<const double> v, int n) {
  if (v.size() != grid.cells()) throw std::invalid_argument("volume field size does not match grid");
  std::vector<double> r(grid.edges());
  const double nd = static_cast<double>(n);
  double rn = 1.0;
  r[0] = 1.0;
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    if (!(v[j] > 0.0)) throw std::domain_error("specific volume must be positive");
    rn += nd * v[j] * grid.width(j);
    r[j + 1] = std::pow(rn, 1.0 / nd);
  }
  return r;
}

namespace {

double enclosed_mass(const DensityProfile& rho0, double r, int n) {
  if (r <= 1.0) return 0.0;
  auto f = [&](double y) {
    const double rho = rho0.rho(y);
    if (!(rho > 0.0)) throw std::domain_error("initial density must be positive");
    return std::pow(y, n - 1) * rho;
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 1.0, r, 12, 1e-13);
}

}  // namespace

double lagrangian_radius_of_mass(const DensityProfile& rho0, double x, int n, double tol) {
  if (x < 0.0) throw std::domain_error("mass coordinate must be non-negative");
  if (x == 0.0) return 1.0;
  if (!(rho0.rho(1.0) > 0.0)) throw std::domain_error("initial density must be positive");

  double lo = 1.0;
  double hi = 1.0 + x / rho0.rho_min.value_or(rho0.rho(1.0));
  // without a known lower bound the guess may undershoot; expand until bracketed
  int expansions = 0;
  while (enclosed_mass(rho0, hi, n) < x) {
    if (rho0.rho_min || ++expansions > 200)
      throw std::domain_error("could not bracket the Lagrangian radius");
    lo = hi;
    hi = 1.0 + 2.0 * (hi - 1.0);
  }

  // bisection to a narrow bracket, then Newton safeguarded by the bracket
  for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (enclosed_mass(rho0, mid, n) < x ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double residual = enclosed_mass(rho0, r, n) - x;
    if (std::abs(residual) <= tol) return r;
    (residual < 0.0 ? lo : hi) = r;
    double next = r - residual / (std::pow(r, n - 1) * rho0.rho(r));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == r) return r;
    r = next;
  }
  if (std::abs(enclosed_mass(rho0, r, n) - x) <= 10.0 * tol) return r;
  throw std::domain_error("Lagrangian radius root solve did not converge");
}

}  // namespace lagns
