#pragma once

#include <functional>

namespace ordstat {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
};

/// Adaptive Gauss-Kronrod 7/15 on a finite interval. The interval with the
/// largest error estimate is bisected until the global estimate meets
/// max(abs_tol, rel_tol * |value|) or the subdivision budget runs out; in
/// the latter case `converged` is false and `error` is the achieved bound.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Same as integrate() but throws QuadratureError when not converged.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts = {});

}  // namespace ordstat
