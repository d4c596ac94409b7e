#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "lagns/grid.hpp"
#include "lagns/params.hpp"
#include "lagns/state.hpp"

namespace lagns::testing {

inline std::shared_ptr<const MassGrid> uniform_grid(double x_max, std::size_t n) {
  return std::make_shared<const MassGrid>(build_mass_grid(x_max, n));
}

// builds a state from point functions: v, theta sampled at centers, u at edges
inline FlowState state_from(const std::shared_ptr<const MassGrid>& grid, int n,
                            const std::function<double(double)>& v,
                            const std::function<double(double)>& u,
                            const std::function<double(double)>& theta, double t = 0.0) {
  std::vector<double> vv(grid->cells()), uu(grid->edges()), tt(grid->cells());
  for (std::size_t j = 0; j < grid->cells(); ++j) {
    vv[j] = v(grid->center(j));
    tt[j] = theta(grid->center(j));
  }
  for (std::size_t i = 0; i < grid->edges(); ++i) uu[i] = u(grid->edge(i));
  return FlowState(grid, n, t, std::move(vv), std::move(uu), std::move(tt));
}

inline FlowState equilibrium_state(const std::shared_ptr<const MassGrid>& grid, int n) {
  return state_from(grid, n, [](double) { return 1.0; }, [](double) { return 0.0; },
                    [](double) { return 1.0; });
}

// fine composite Simpson rule, used as a quadrature oracle
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace lagns::testing
