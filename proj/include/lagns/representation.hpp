#pragma once

#include <span>
#include <vector>

#include "lagns/params.hpp"
#include "lagns/state.hpp"

namespace lagns {

/// Piecewise-linear localizer: 1 for x <= k, k + 1 - x on [k, k+1], 0 beyond.
double cutoff_phi(double x, int k);

/// Scalars the local representation of v needs from one sample.
struct ProbeSample {
  double t = 0.0;
  double v = 1.0;          // v(x_probe, t)
  double theta = 1.0;      // theta(x_probe, t)
  double tail_u = 0.0;     // int_{x_probe}^inf phi r^{1-n} u
  double tail_u2 = 0.0;    // int_{x_probe}^inf phi r^{-n} u^2
  double stress_avg = 0.0; // int_k^{k+1} sigma
};

ProbeSample probe_sample(const FlowState& state, const PhysParams& params, int k, double x_probe);

/// Per-sample values of the representation
///   v(x,t) = B(x,t) Y(t) + R/beta int_0^t theta(x,tau) B(x,t) Y(t) / (B(x,tau) Y(tau)) dtau.
/// Y carries the tail integral of phi r^{-n} u^2 starting at x_probe, so it is
/// really Y(x_probe, t).
struct RepresentationResult {
  std::vector<double> t, B, Y, v_repr, v_solved;
  double residual = 0.0;  // max_t |v_repr - v| / v
};

/// Accumulates probe samples one at a time. Time integrals use the
/// trapezoid rule; the theta / (B Y) integral is integrated with log(BY)
/// and theta both linear on each sample interval, which is exact when
/// log(BY) is affine in time.
class RepresentationProbe {
 public:
  RepresentationProbe(const PhysParams& params, int k, double x_probe);

  /// Throws std::invalid_argument if the probe or [k, k+1] is not inside the grid.
  void add(const FlowState& state);

  [[nodiscard]] const RepresentationResult& result() const { return result_; }
  [[nodiscard]] bool empty() const { return result_.t.empty(); }
  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] double x_probe() const { return x_; }

 private:
  PhysParams params_;
  int k_;
  double x_;
  ProbeSample first_{}, last_{};
  double log_y_ = 0.0;
  double integral_ = 0.0;  // int_0^t theta / (B Y) dtau
  double log_by_last_ = 0.0;
  RepresentationResult result_;
};

/// Throws std::invalid_argument on an empty history or an out-of-range probe.
RepresentationResult local_representation(std::span<const FlowState> history,
                                          const PhysParams& params, int k, double x_probe);

}  // namespace lagns
