#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ordstat/distribution.hpp"
#include "ordstat/weights.hpp"

namespace ordstat {

enum class Statistic { kmin, kmax, kmin_power };

const char* to_string(Statistic s);

/// z for a two-sided 99% normal interval.
inline constexpr double kZ99 = 2.5758293035489004;

struct MonteCarloEstimate {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // 99% normal approximation
  double std_error = 0.0;
  long replications = 0;
  std::uint64_t seed = 0;
  Statistic statistic = Statistic::kmin;
  int k = 0;
  double p = 1.0;  // exponent for kmin_power
};

struct SimulationOptions {
  long replications = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = default_thread_count()
};

/// Generic replication engine. Each replication fills a buffer with n i.i.d.
/// draws of |ξ| and records per_replication(buffer), which may reorder the
/// buffer. Replications are grouped in fixed blocks, each with its own
/// substream of `seed`, and block results are combined in block order, so
/// the estimate is bit-identical for any thread count. per_replication is
/// called concurrently and must not mutate shared state.
MonteCarloEstimate simulate(const Distribution& model, Eigen::Index n,
                            const std::function<double(std::span<double>)>& per_replication,
                            const SimulationOptions& opts);

/// Vector-valued form: per_replication(buffer, outputs) fills `outputs`
/// (length `outputs`) from one replication, giving one estimate per output
/// from common draws.
std::vector<MonteCarloEstimate> simulate_many(
    const Distribution& model, Eigen::Index n, std::size_t outputs,
    const std::function<void(std::span<double>, std::span<double>)>& per_replication,
    const SimulationOptions& opts);

/// k-th smallest entry (1-based) by partial selection; reorders `values`.
double kth_smallest(std::span<double> values, int k);
/// k-th largest entry (1-based) by partial selection; reorders `values`.
double kth_largest(std::span<double> values, int k);

/// E of k-min |x_i ξ_i|, k-max |x_i ξ_i| or (k-min |x_i ξ_i|)^p.
MonteCarloEstimate estimate_order_stat(const Eigen::VectorXd& x, const Distribution& model, int k,
                                       Statistic statistic, const SimulationOptions& opts,
                                       double p = 1.0);

/// Same statistic for several k from common draws (one sort per replication).
std::vector<MonteCarloEstimate> estimate_order_stats(const Eigen::VectorXd& x, const Distribution& model,
                                                     const std::vector<int>& ks, Statistic statistic,
                                                     const SimulationOptions& opts, double p = 1.0);

/// Outcome of a one-sided inequality check lhs <= rhs (+ margin).
struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // Monte Carlo slack added to rhs, 0 for exact checks
  bool holds = false;
};

/// Σ_{l=k}^n e_l(a) < a^k / ((1 - a) sqrt(2πk)) with a = (e/k) Σ a_i in (0, 1);
/// e_l by the long-double product recurrence.
InequalityCheck check_agmean(const Eigen::VectorXd& a, int k);

/// P{k-min |x_i ξ_i| <= t} <= a^k / ((1 - a) sqrt(2πk)), a = (e/k) Σ G(t / x_i),
/// G = 1 - F. The frequency is compared against rhs + 4 binomial standard
/// errors evaluated at max(rhs, 1/reps). t = 0 (a = 0) is accepted as the
/// degenerate case with rhs 0.
InequalityCheck check_kmin_tail(const Weights& x, const Distribution& model, int k, double t,
                                const SimulationOptions& opts);

/// The t > 0 for which a(t) = (e/k) Σ G(t / x_i) equals `level` in (0, 1).
double kmin_tail_level_threshold(const Weights& x, const Distribution& model, int k, double level);

struct MinProductCheck {
  double frequency_above = 0.0;  // P̂{min |x_i ξ_i| > t}
  double product = 0.0;          // Π F(t / x_i)
  double union_sum = 0.0;        // Σ G(t / x_i)
  double std_error = 0.0;
  bool product_holds = false;    // |P̂ - Π| <= 4 se
  bool union_holds = false;      // 1 - P̂ <= Σ G + 4 se
  bool holds() const { return product_holds && union_holds; }
};

MinProductCheck check_min_product(const Weights& x, const Distribution& model, double t,
                                  const SimulationOptions& opts);

/// k-max |v_i| <= j-min_{i<k+j} |v_i| + max_{i>=k+j} |v_i| for 1 <= j <= n-k.
InequalityCheck check_simcl(const Eigen::VectorXd& values, int k, int j);

struct HlpCheck {
  double lhs = 0.0;     // e_j(a)
  double middle = 0.0;  // C(m, j) (Σ a / m)^j
  double rhs = 0.0;     // (Σ a)^j / j!
  bool holds = false;   // each step within relative 1e-12
};

HlpCheck check_hlp(const Eigen::VectorXd& a, int j);

}  // namespace ordstat
