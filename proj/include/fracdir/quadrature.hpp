#pragma once

#include <functional>

namespace fracdir {

enum class Transform { rational_map, log_map, none };

struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 200;
  Transform transform = Transform::rational_map;

  /// Throws DomainError when a field violates its invariant.
  void validate() const;
};

struct QuadResult {
  double value = 0;
  double error_estimate = 0;
  long evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Integrand on (0,1) that receives both q and 1-q, each computed without
/// cancellation near its own endpoint.
using SplitIntegrand = std::function<double(double q, double one_minus_q)>;

/// Adaptive 21-point Gauss-Kronrod bisection with epsilon-algorithm
/// extrapolation over the finite interval [a, b].
QuadResult integrate_interval(const Integrand& f, double a, double b,
                              const QuadSpec& spec = {});

/// Integral over [0, inf) after mapping onto (0,1) with spec.transform.
/// rational_map: y = t/(1-t); log_map: y = -ln(1-t).
QuadResult integrate_semi_infinite(const Integrand& f,
                                   const QuadSpec& spec = {});

/// Integral over (0,1); the interval is split at 1/2 and each half is refined
/// toward its endpoint.
QuadResult integrate_unit_interval(const SplitIntegrand& f,
                                   const QuadSpec& spec = {});
QuadResult integrate_unit_interval(const Integrand& f,
                                   const QuadSpec& spec = {});

}  // namespace fracdir
