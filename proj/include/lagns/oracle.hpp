#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lagns/params.hpp"
#include "lagns/solver.hpp"

namespace lagns {

/// Second-order Taylor jet in x: value, first and second derivative.
/// Exact arithmetic on derivatives, so manufactured sources carry no
/// differencing error.
struct Jet {
  double f = 0.0, d1 = 0.0, d2 = 0.0;

  static Jet constant(double c) { return {c, 0.0, 0.0}; }
  static Jet variable(double x) { return {x, 1.0, 0.0}; }
  /// Derivative as a jet; its own second derivative is unknown and set to NaN.
  [[nodiscard]] Jet derivative() const { return {d1, d2, std::numeric_limits<double>::quiet_NaN()}; }
};

inline Jet operator+(Jet a, Jet b) { return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(Jet a, Jet b) { return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator*(Jet a, Jet b) {
  return {a.f * b.f, a.d1 * b.f + a.f * b.d1, a.d2 * b.f + 2.0 * a.d1 * b.d1 + a.f * b.d2};
}
inline Jet operator*(double c, Jet a) { return {c * a.f, c * a.d1, c * a.d2}; }
inline Jet operator+(double c, Jet a) { return {c + a.f, a.d1, a.d2}; }
inline Jet operator/(Jet a, Jet b) {
  const double q = a.f / b.f;
  const double q1 = (a.d1 - q * b.d1) / b.f;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.f;
  return {q, q1, q2};
}
/// f(g) from f(g0), f'(g0), f''(g0).
inline Jet compose(Jet g, double f0, double f1, double f2) {
  return {f0, f1 * g.d1, f2 * g.d1 * g.d1 + f1 * g.d2};
}
inline Jet pow(Jet g, double p) {
  return compose(g, std::pow(g.f, p), p * std::pow(g.f, p - 1.0), p * (p - 1.0) * std::pow(g.f, p - 2.0));
}
inline Jet tanh(Jet g) {
  const double t = std::tanh(g.f);
  const double s = 1.0 - t * t;
  return compose(g, t, s, -2.0 * t * s);
}

/// Manufactured solution built from sech^2 = 1 - tanh^2 bumps reflected
/// about x = 0: v* = 1 + A_v(t) E(x), u* = A_u(t) O(x), theta* = 1 + A_theta(t) E(x)
/// with E even and O odd, so u*(0,t) = 0 and theta*_x(0,t) = 0. Amplitudes are
/// A(t) = a (1 + 0.5 sin(omega t + phase)). The radius uses the closed-form
/// antiderivative of E in r^n = 1 + n int_0^x v*.
struct ManufacturedCase {
  std::string name = "tanh_bump";
  std::array<double, 3> amplitudes{0.1, 0.1, 0.1};
  std::array<double, 3> phases{0.0, 1.0, 2.0};
  double center = 3.0;
  double width = 0.7;
  double omega = 1.0;

  static ManufacturedCase equilibrium();

  /// (v*, u*, theta*) at (x, t).
  [[nodiscard]] std::array<double, 3> exact(double x, double t) const;
  [[nodiscard]] double radius(double x, double t, int n) const;

  // building blocks, exposed for the tests
  [[nodiscard]] double amplitude(int field, double t) const;
  [[nodiscard]] double amplitude_rate(int field, double t) const;
  [[nodiscard]] Jet even_shape(double x) const;
  [[nodiscard]] Jet odd_shape(double x) const;
  [[nodiscard]] Jet even_antiderivative(double x) const;
};

/// (S_v, S_u, S_theta): left side minus right side of each reduced equation
/// evaluated on the manufactured fields.
std::array<double, 3> manufactured_source(const ManufacturedCase& mcase, const PhysParams& params,
                                          double x, double t);

Forcing make_forcing(const ManufacturedCase& mcase, const PhysParams& params);

/// Exact manufactured fields sampled onto a grid at time t, boundary values pinned.
FlowState sample_manufactured(const ManufacturedCase& mcase, std::shared_ptr<const MassGrid> grid,
                              const PhysParams& params, double t);

enum class StudyKind { spatial, temporal };

struct Resolution {
  std::size_t n_cells;
  double dt;
};

struct StudySetup {
  double x_max = 10.0;
  double t_end = 0.5;
  int scheme_order = 1;
  StudyKind kind = StudyKind::spatial;
  std::vector<Resolution> resolutions;
};

struct ConvergenceResult {
  StudyKind kind = StudyKind::spatial;
  std::vector<double> step_sizes;                 // dx or dt per resolution
  std::vector<std::array<double, 3>> errors;      // max-norm (v, u, theta)
  std::array<double, 3> orders{};                 // least-squares log-log slopes
  std::array<bool, 3> floor{};                    // errors at the rounding floor
  std::array<bool, 3> monotone{};                 // errors decreased at every refinement
};

/// Least-squares slope of log(error) against log(step).
double loglog_slope(const std::vector<double>& steps, const std::vector<double>& errors);

/// Runs the sourced solver at every resolution and fits the observed order.
/// Throws std::invalid_argument with fewer than three resolutions.
ConvergenceResult convergence_order(const ManufacturedCase& mcase, const PhysParams& params,
                                    const StudySetup& setup);

/// Named fixtures shipped with the project.
ManufacturedCase manufactured_fixture(const std::string& name);

}  // namespace lagns
