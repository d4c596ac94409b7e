#include "lagns/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lagns {

std::vector<double> Tridiagonal::solve(std::span<const double> rhs) const {
  const std::size_t m = size();
  if (rhs.size() != m) throw std::invalid_argument("tridiagonal rhs size mismatch");
  std::vector<double> c(m), x(m);
  double pivot = diag[0];
  if (pivot == 0.0) throw std::runtime_error("zero pivot in tridiagonal solve");
  c[0] = m > 1 ? upper[0] / pivot : 0.0;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < m; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0) throw std::runtime_error("zero pivot in tridiagonal solve");
    c[i] = i + 1 < m ? upper[i] / pivot : 0.0;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = m - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

double Tridiagonal::residual(std::span<const double> x, std::span<const double> rhs) const {
  const std::size_t m = size();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double ax = diag[i] * x[i];
    if (i > 0) ax += lower[i] * x[i - 1];
    if (i + 1 < m) ax += upper[i] * x[i + 1];
    worst = std::max(worst, std::abs(ax - rhs[i]));
  }
  return worst;
}

}  // namespace lagns
