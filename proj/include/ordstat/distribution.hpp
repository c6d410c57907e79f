#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ordstat/random.hpp"

namespace ordstat {

enum class Family { gaussian, sym_exponential, tabulated };

/// Symmetric-about-zero random variable ξ, described through the survival
/// function of its absolute value, F(t) = P(|ξ| > t).
///
/// Models are immutable values; copies share the (read-only) table of a
/// tabulated model, so they are cheap to pass around and safe to use from
/// several threads at once. Random streams are not shared: each sampler
/// owns its Rng.
class Distribution {
 public:
  static Distribution gaussian();
  static Distribution sym_exponential(double rate = 1.0);

  /// Survival function given on a grid 0 = t_0 < t_1 < ... with F(t_0) = 1
  /// and F strictly decreasing and positive. ln F is interpolated by a
  /// monotone piecewise cubic (Fritsch-Carlson); evaluation past the last
  /// grid point throws TabulationError.
  static Distribution tabulated(std::vector<double> t, std::vector<double> survival);

  /// Two-column `t,F` CSV. An optional non-numeric header row is skipped.
  static Distribution tabulated_csv(std::istream& in);
  static Distribution tabulated_csv(const std::filesystem::path& path);

  Family family() const noexcept { return family_; }
  double rate() const noexcept { return rate_; }
  /// Multiplier applied to the base variable (1 unless scaled()).
  double scale() const noexcept { return scale_; }

  /// Model of factor * ξ.
  Distribution scaled(double factor) const;
  /// Model of ξ / E|ξ|, so that E|ξ| = 1.
  Distribution normalized() const;

  /// P(|ξ| > t).
  double survival(double t) const;
  /// ln P(|ξ| > t) = -N(t); stays finite far into the tail.
  double log_survival(double t) const;
  /// The t with survival(t) == p, for p in (0, 1].
  double quantile(double p) const;
  /// ∫_{|ξ| >= t} |ξ| dP.
  double tail_integral(double t) const;
  /// E|ξ|.
  double mean_abs() const;

  /// Largest t at which survival() is defined (+inf for analytic families).
  double support_limit() const;
  /// Whether N = -ln F passed the convexity check. Always true for the
  /// analytic families; for tables it is the node-slope check.
  bool log_concave() const noexcept { return log_concave_; }

  /// i.i.d. draws of ξ (signed).
  std::vector<double> sample(Rng& rng, std::size_t count) const;
  /// i.i.d. draws of |ξ| written into out.
  void sample_abs(Rng& rng, std::span<double> out) const;

  /// Short spec string: "gaussian", "symexp:<rate>", "table:<n points>".
  std::string describe() const;

  struct Table;

 private:
  Distribution() = default;

  double base_survival(double u) const;
  double base_log_survival(double u) const;
  double base_quantile(double p) const;
  double base_tail(double u) const;

  Family family_ = Family::gaussian;
  double rate_ = 1.0;
  double scale_ = 1.0;
  bool log_concave_ = true;
  std::shared_ptr<const Table> table_;
};

/// Result of the log-concave tail-integral estimate
/// ∫_{|ξ|>=t} |ξ| dP <= (1 + 1/N(t)) t F(t).
struct SubMultCheck {
  double t = 0.0;
  double tail = 0.0;   // left-hand side
  double bound = 0.0;  // right-hand side
  bool holds = false;
};

/// Requires t > 0 and N(t) > 0. Holds when tail <= bound + 1e-9.
SubMultCheck verify_sub_mult(const Distribution& model, double t);

/// Grid checks of the model invariants: F(0) = 1, F strictly decreasing,
/// second differences of N = -ln F >= -1e-9, and quantile(F(t)) == t to
/// relative 1e-8 on the grid interior.
struct InvariantReport {
  bool starts_at_one = false;
  bool strictly_decreasing = false;
  bool convex_log = false;
  bool quantile_roundtrip = false;
  double worst_second_difference = 0.0;
  double worst_quantile_rel_error = 0.0;
  std::size_t grid_points = 0;
  bool ok() const { return starts_at_one && strictly_decreasing && convex_log && quantile_roundtrip; }
};

/// Checks on `points` equally spaced t in [0, t_max], where t_max defaults to
/// the point with F(t) = 1e-12 (or the table end).
InvariantReport check_invariants(const Distribution& model, std::size_t points = 400,
                                 double t_max = 0.0);

/// ln erfc(x) for x >= 0 without underflow.
double log_erfc(double x);

}  // namespace ordstat
