#pragma once

#include <string>

namespace lagns {

/// Physical constants of a polytropic viscous heat-conducting gas in n
/// space dimensions. `beta` is the effective viscosity of the reduced stress.
struct PhysParams {
  double mu = 1.0;
  double lambda = 0.0;
  double R = 1.0;
  double cv = 1.5;
  double kappa = 1.0;
  int n = 2;

  [[nodiscard]] double beta() const { return 2.0 * mu + lambda; }
  [[nodiscard]] double gamma() const { return 1.0 + R / cv; }

  /// Throws std::invalid_argument unless mu > 0, 2mu + n lambda > 0,
  /// R, cv, kappa > 0 and n >= 2.
  void validate() const;

  [[nodiscard]] std::string describe() const;
};

}  // namespace lagns
