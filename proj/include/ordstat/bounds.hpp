#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ordstat/distribution.hpp"
#include "ordstat/orlicz.hpp"
#include "ordstat/weights.hpp"

namespace ordstat {

/// Two-sided estimate of an order-statistic expectation together with
/// everything needed to recompute it.
struct BoundReport {
  enum class Kind { kmin, kmin_gaussian_closed, kmax, max1 };

  Kind kind = Kind::kmin;
  double lower = 0.0;
  double upper = 0.0;
  int k = 0;
  BoundConstants constants;
  /// Index attaining the inner maximum: j in [1, k] for the k-min bounds,
  /// ℓ in [0, k0 - 1] for k-max, 0 for max1. Ties go to the smallest index.
  int argmax = 0;
  /// Inner values, one per candidate index (terms[0] is j = 1 or ℓ = 0).
  std::vector<double> terms;
  /// max(terms).
  double inner_max = 0.0;
  /// k-max only.
  int k0 = 0;
  /// k-max: ‖(x_{k+k0}, ..., x_n)‖_M. max1: ‖x‖_M.
  double m_norm = 0.0;
  /// k-max: C_N ln(k+1) inner_max + m_norm, so upper = kmax_upper_c * upper_core.
  double upper_core = 0.0;
  /// False when N failed the convexity check; only the lower bound is then
  /// backed by the theory and upper is +inf.
  bool upper_valid = true;
  /// An empirical constant without a published value entered the result.
  bool empirical_constant = false;
  std::vector<std::string> notes;
};

const char* to_string(BoundReport::Kind kind);

/// E k-min |x_i ξ_i| for ascending x and 1 <= k <= n/2:
///   lower = c1 max_j ‖(1/x_i)_{i=j}^n‖_{N_j}^{-1},
///   upper = 16 e^2 C_N ln(k+1) max_j ‖(1/x_i)_{i=j}^n‖_{N_j}^{-1},
/// with N_j = 2e/(k-j+1) N.
BoundReport kmin_bounds(const Weights& x, const Distribution& model, int k,
                        const BoundConstants& constants = BoundConstants::defaults());

/// Gaussian closed form with inner term (k+1-j) / Σ_{i=j}^n 1/x_i:
/// lower = c0 max_j, upper = 2 sqrt(2π) ln(k+1) max_j.
BoundReport kmin_bounds_gaussian_closed(const Weights& x, int k,
                                        const BoundConstants& constants = BoundConstants::defaults());

/// floor(4(k-1) / F(1)).
int kmax_k0(const Distribution& model, int k);

/// E k-max |x_i ξ_i| for descending x, k > 1 and k + k0 <= n.
BoundReport kmax_bounds(const Weights& x, const Distribution& model, int k,
                        const BoundConstants& constants = BoundConstants::defaults());

/// E max |x_i ξ_i| between max1_low ‖x‖_M and max1_high ‖x‖_M. The model is
/// normalized to E|ξ| = 1 internally and the result rescaled.
BoundReport max1_bounds(const Eigen::VectorXd& x, const Distribution& model,
                        const BoundConstants& constants = BoundConstants::defaults());

/// Lower bound for E (k-min |x_i ξ_i|)^p, 1 <= k <= n:
/// c1 max_j ‖(1/x_i)_{i=j}^n‖_{N_j}^{-p}.
double kmin_moment_lower(const Weights& x, const Distribution& model, int k, double p);

/// Upper bound for E (min |x_i ξ_i|)^p: (1 + Γ(1+p)) ‖(1/x_i)‖_N^{-p}.
/// Requires N convex.
double min_moment_upper(const Weights& x, const Distribution& model, double p);

}  // namespace ordstat
