#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "ordstat/distribution.hpp"
#include "ordstat/weights.hpp"

namespace ordstat {

enum class OrliczKind {
  explicit_fn,      // user callable
  distribution_M,   // M(s) = E(s|ξ| - 1)_+
  distribution_N,   // N(t) = -ln F(t)
  survival_NFk,     // F(1/t) / (4(k-1)); positive and increasing, not convex
  gaussian_H,       // t on [0,1), t^2 beyond
  power,            // t^q, q >= 1
  linear,           // t
};

/// Extended-value function [0, ∞) -> [0, ∞] used as an Orlicz function (or,
/// for survival_NFk and non-convex callables, as the generator of the norm
/// functional). A handle is an immutable value: a base kind plus a positive
/// multiplicative factor, so scaled(M, s) never nests.
class OrliczFunction {
 public:
  static OrliczFunction linear();
  static OrliczFunction power(double q);
  static OrliczFunction gaussian_h();
  /// `fn` must satisfy fn(0) = 0 and be nondecreasing. Values past
  /// `domain_bound` are +inf; at the bound itself fn is evaluated (left limit).
  static OrliczFunction from_callable(std::function<double(double)> fn, std::string name,
                                      bool convex,
                                      double domain_bound = std::numeric_limits<double>::infinity());

  friend OrliczFunction make_M(const Distribution& model);
  friend OrliczFunction make_N(const Distribution& model, bool require_convex);
  friend OrliczFunction make_NFk(const Distribution& model, int k);

  /// Value at t >= 0; +inf is a legitimate result.
  double operator()(double t) const;

  OrliczKind kind() const noexcept { return kind_; }
  double factor() const noexcept { return factor_; }
  bool is_scaled() const noexcept { return factor_ != 1.0; }
  bool convex() const noexcept { return convex_; }
  double domain_bound() const noexcept { return domain_bound_; }
  double exponent() const noexcept { return q_; }
  /// Underlying model for distribution-derived kinds, else nullptr.
  const Distribution* model() const noexcept { return model_ ? &*model_ : nullptr; }
  int order_k() const noexcept { return k_; }

  /// The same function multiplied by s > 0.
  OrliczFunction scaled(double s) const;

  std::string describe() const;

 private:
  OrliczFunction() = default;
  double base(double t) const;

  OrliczKind kind_ = OrliczKind::linear;
  double factor_ = 1.0;
  double q_ = 1.0;
  int k_ = 0;
  bool convex_ = true;
  double domain_bound_ = std::numeric_limits<double>::infinity();
  std::optional<Distribution> model_;
  std::function<double(double)> fn_;
  std::string name_;
};

/// M(s) = ∫_{1/s <= |ξ|} (s|ξ| - 1) dP.
OrliczFunction make_M(const Distribution& model);
/// N(t) = -ln F(t). With require_convex, a model that failed the
/// log-concavity check is rejected with DomainError; otherwise the handle is
/// produced and flagged non-convex.
OrliczFunction make_N(const Distribution& model, bool require_convex = true);
/// N_{F,k}(t) = F(1/t) / (4(k-1)), k >= 2.
OrliczFunction make_NFk(const Distribution& model, int k);
/// H(t) = t for t < 1, t^2 for t >= 1.
double gaussian_H(double t);

/// s * M.
OrliczFunction scale(const OrliczFunction& M, double s);

enum class DualMethod {
  automatic,       // tail inversion for distribution-derived M, numeric otherwise
  numeric,         // golden-section maximization of t s - M(t)
  tail_inversion,  // M*(∫_{t<=|ξ|}|ξ|dP) = P(|ξ| >= t); distribution_M only
};

/// Young conjugate M*(s) = sup_{t >= 0} (t s - M(t)); +inf when unbounded.
/// The numeric route resolves unboundedness from the asymptotic slope of
/// t s - M(t) up to t = 1e8, so s within ~1e-9 of the growth rate of M is
/// reported finite.
double dual(const OrliczFunction& M, double s, DualMethod method = DualMethod::automatic);

struct NormResult {
  double value = 0.0;
  /// Σ M(|x_i| / value) - 1 (<= 0 up to rounding; 0 when value is 0).
  double residual = 0.0;
  /// Width of the final bisection bracket.
  double bracket_width = 0.0;
  int iterations = 0;
  /// False when M is not convex: the functional is then not a norm.
  bool is_norm = true;
  /// The modular sum never exceeded 1 even at x / ρ for ρ = max|x| 2^-200;
  /// value is reported as 0.
  bool infimum_zero = false;
};

/// inf{ρ > 0 : Σ M(|x_i| / ρ) <= 1} over the absolute values in `abs_x`.
NormResult solve_orlicz_norm(std::span<const double> abs_x, const OrliczFunction& M);

template <typename Derived>
NormResult orlicz_norm_result(const Eigen::MatrixBase<Derived>& x, const OrliczFunction& M) {
  const Eigen::VectorXd a = x.template cast<double>().cwiseAbs();
  return solve_orlicz_norm(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())), M);
}

/// ‖x‖_M.
template <typename Derived>
double orlicz_norm(const Eigen::MatrixBase<Derived>& x, const OrliczFunction& M) {
  return orlicz_norm_result(x, M).value;
}

inline double orlicz_norm(const Weights& x, const OrliczFunction& M) {
  return orlicz_norm(x.values(), M);
}

/// Constants appearing in the bound formulas. c_n depends on the model and is
/// filled in by the bound routines; kmax_upper_c and the max1 pair have no
/// published values and are empirical defaults.
struct BoundConstants {
  double c1 = 0.0;             // 1 - 1/sqrt(2π)
  double c_n = 0.0;            // max{N(1), 1/N(1)}
  double upper_kmin = 0.0;     // 16 e^2
  double c0 = 0.0;             // (1 - 1/sqrt(2π)) (1/(2e)) sqrt(π/2)
  double kmax_upper_c = 32.0;
  double max1_low = 0.25;
  double max1_high = 8.0;

  /// Defaults with the closed-form constants filled in.
  static BoundConstants defaults();
  /// C_N for the given model.
  static double c_n_for(const Distribution& model);
};

}  // namespace ordstat
