#include "ordstat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "ordstat/errors.hpp"
#include "ordstat/random.hpp"
#include "ordstat/symmetric.hpp"

namespace ordstat {
namespace {

constexpr long kBlock = 1024;

struct BlockStats {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

// Chan et al. pairwise update
BlockStats merge(const BlockStats& a, const BlockStats& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  BlockStats r;
  r.count = a.count + b.count;
  const double delta = b.mean - a.mean;
  const double nb = static_cast<double>(b.count) / static_cast<double>(r.count);
  r.mean = a.mean + delta * nb;
  r.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.count) * nb;
  return r;
}

BlockStats merge_range(const std::vector<BlockStats>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(merge_range(v, lo, mid), merge_range(v, mid, hi));
}

double complement_survival(const Distribution& model, double t) {
  return -std::expm1(model.log_survival(t));
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("ORDSTAT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

const char* to_string(Statistic s) {
  switch (s) {
    case Statistic::kmin:
      return "kmin";
    case Statistic::kmax:
      return "kmax";
    case Statistic::kmin_power:
      return "kmin_power";
  }
  return "?";
}

std::vector<MonteCarloEstimate> simulate_many(
    const Distribution& model, Eigen::Index n, std::size_t outputs,
    const std::function<void(std::span<double>, std::span<double>)>& per_replication,
    const SimulationOptions& opts) {
  if (n < 1) throw DomainError("simulate: need at least one variable");
  if (outputs < 1) throw DomainError("simulate: need at least one output");
  if (opts.replications < 2) throw DomainError("simulate: need at least two replications");
  const long reps = opts.replications;
  const std::size_t blocks = static_cast<std::size_t>((reps + kBlock - 1) / kBlock);
  // stats[b * outputs + o]
  std::vector<BlockStats> stats(blocks * outputs);

  auto run_blocks = [&](std::size_t first, std::size_t stride) {
    std::vector<double> buffer(static_cast<std::size_t>(n));
    std::vector<double> values(outputs);
    for (std::size_t b = first; b < blocks; b += stride) {
      Rng rng = substream(opts.seed, b);
      const long begin = static_cast<long>(b) * kBlock;
      const long count = std::min(kBlock, reps - begin);
      BlockStats* s = &stats[b * outputs];
      for (long r = 0; r < count; ++r) {
        model.sample_abs(rng, buffer);
        per_replication(buffer, values);
        for (std::size_t o = 0; o < outputs; ++o) {
          const double v = values[o];
          ++s[o].count;
          const double delta = v - s[o].mean;
          s[o].mean += delta / static_cast<double>(s[o].count);
          s[o].m2 += delta * (v - s[o].mean);
        }
      }
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(opts.threads == 0 ? default_thread_count() : opts.threads,
                                      static_cast<unsigned>(blocks)));
  if (threads == 1) {
    run_blocks(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run_blocks, w, threads);
  }

  std::vector<MonteCarloEstimate> out(outputs);
  std::vector<BlockStats> column(blocks);
  for (std::size_t o = 0; o < outputs; ++o) {
    for (std::size_t b = 0; b < blocks; ++b) column[b] = stats[b * outputs + o];
    const BlockStats total = merge_range(column, 0, blocks);
    MonteCarloEstimate& e = out[o];
    e.mean = total.mean;
    e.replications = reps;
    e.seed = opts.seed;
    const double var = total.m2 / static_cast<double>(reps - 1);
    e.std_error = std::sqrt(var / static_cast<double>(reps));
    e.ci_halfwidth = kZ99 * e.std_error;
  }
  return out;
}

MonteCarloEstimate simulate(const Distribution& model, Eigen::Index n,
                            const std::function<double(std::span<double>)>& per_replication,
                            const SimulationOptions& opts) {
  return simulate_many(
      model, n, 1, [&](std::span<double> xi, std::span<double> out) { out[0] = per_replication(xi); },
      opts)[0];
}

double kth_smallest(std::span<double> values, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > values.size()) throw RangeError("kth_smallest: k out of range");
  auto nth = values.begin() + (k - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

double kth_largest(std::span<double> values, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > values.size()) throw RangeError("kth_largest: k out of range");
  return kth_smallest(values, static_cast<int>(values.size()) - k + 1);
}

std::vector<MonteCarloEstimate> estimate_order_stats(const Eigen::VectorXd& x, const Distribution& model,
                                                     const std::vector<int>& ks, Statistic statistic,
                                                     const SimulationOptions& opts, double p) {
  const Eigen::Index n = x.size();
  for (int k : ks) {
    if (k < 1 || k > n) {
      std::ostringstream msg;
      msg << "estimate_order_stat: precondition 1 <= k <= n fails (k = " << k << ", n = " << n << ")";
      throw RangeError(msg.str());
    }
  }
  if (ks.empty()) throw DomainError("estimate_order_stat: no k given");
  if (opts.replications < 100) throw DomainError("estimate_order_stat: need at least 100 replications");
  if (statistic == Statistic::kmin_power && !(p > 0.0)) {
    throw DomainError("estimate_order_stat: exponent must be positive");
  }
  const Eigen::VectorXd ax = x.cwiseAbs();
  auto per_rep = [&](std::span<double> xi, std::span<double> out) {
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] *= ax[static_cast<Eigen::Index>(i)];
    if (ks.size() > 1) std::sort(xi.begin(), xi.end());
    for (std::size_t o = 0; o < ks.size(); ++o) {
      const int k = ks[o];
      double v = 0.0;
      if (ks.size() > 1) {
        v = statistic == Statistic::kmax ? xi[xi.size() - static_cast<std::size_t>(k)]
                                         : xi[static_cast<std::size_t>(k - 1)];
      } else {
        v = statistic == Statistic::kmax ? kth_largest(xi, k) : kth_smallest(xi, k);
      }
      out[o] = statistic == Statistic::kmin_power ? std::pow(v, p) : v;
    }
  };
  std::vector<MonteCarloEstimate> est = simulate_many(model, n, ks.size(), per_rep, opts);
  for (std::size_t o = 0; o < ks.size(); ++o) {
    est[o].statistic = statistic;
    est[o].k = ks[o];
    est[o].p = statistic == Statistic::kmin_power ? p : 1.0;
  }
  return est;
}

MonteCarloEstimate estimate_order_stat(const Eigen::VectorXd& x, const Distribution& model, int k,
                                       Statistic statistic, const SimulationOptions& opts, double p) {
  return estimate_order_stats(x, model, {k}, statistic, opts, p)[0];
}

InequalityCheck check_agmean(const Eigen::VectorXd& a, int k) {
  const Eigen::Index n = a.size();
  if (k < 1 || k > n) throw RangeError("check_agmean: precondition 1 <= k <= n fails");
  if ((a.array() < 0.0).any()) throw DomainError("check_agmean: entries must be nonnegative");
  const long double abar = std::numbers::e_v<long double> / k * static_cast<long double>(a.sum());
  if (!(abar > 0.0L && abar < 1.0L)) {
    std::ostringstream msg;
    msg << "check_agmean: precondition 0 < (e/k) sum a_i < 1 fails (value " << static_cast<double>(abar)
        << ")";
    throw DomainError(msg.str());
  }
  const VectorX<long double> e = elementary_symmetric(a);
  long double lhs = 0.0L;
  for (Eigen::Index l = k; l <= n; ++l) lhs += e[l];
  const long double rhs = std::pow(abar, static_cast<long double>(k)) / (1.0L - abar) /
                          std::sqrt(2.0L * std::numbers::pi_v<long double> * k);
  InequalityCheck c;
  c.lhs = static_cast<double>(lhs);
  c.rhs = static_cast<double>(rhs);
  c.holds = lhs < rhs;
  return c;
}

double kmin_tail_level_threshold(const Weights& x, const Distribution& model, int k, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("kmin_tail_level_threshold: level must be in (0,1)");
  auto a_of = [&](double t) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += complement_survival(model, t / x[i]);
    return std::numbers::e / k * s;
  };
  double lo = 0.0;
  double hi = x.values().maxCoeff();
  while (a_of(hi) < level) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw DomainError("kmin_tail_level_threshold: level not reachable");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (a_of(mid) < level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

InequalityCheck check_kmin_tail(const Weights& x, const Distribution& model, int k, double t,
                                const SimulationOptions& opts) {
  const Eigen::Index n = x.size();
  if (k < 1 || k > n) throw RangeError("check_kmin_tail: precondition 1 <= k <= n fails");
  if (!(t >= 0.0)) throw DomainError("check_kmin_tail: t must be >= 0");
  double g_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) g_sum += complement_survival(model, t / x[i]);
  const double a = std::numbers::e / k * g_sum;
  if (!(a >= 0.0 && a < 1.0)) {
    std::ostringstream msg;
    msg << "check_kmin_tail: precondition 0 < a(t) < 1 fails (a = " << a << ")";
    throw DomainError(msg.str());
  }
  InequalityCheck c;
  c.rhs = a == 0.0 ? 0.0 : std::pow(a, k) / (1.0 - a) / std::sqrt(2.0 * std::numbers::pi * k);

  const Eigen::VectorXd xv = x.values();
  auto indicator = [&](std::span<double> xi) {
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] *= xv[static_cast<Eigen::Index>(i)];
    return kth_smallest(xi, k) <= t ? 1.0 : 0.0;
  };
  c.lhs = simulate(model, n, indicator, opts).mean;
  const double reps = static_cast<double>(opts.replications);
  const double p_ref = std::min(1.0, std::max(c.rhs, 1.0 / reps));
  c.margin = 4.0 * std::sqrt(p_ref * (1.0 - p_ref) / reps);
  c.holds = c.lhs <= c.rhs + c.margin;
  return c;
}

MinProductCheck check_min_product(const Weights& x, const Distribution& model, double t,
                                  const SimulationOptions& opts) {
  if (!(t > 0.0)) throw DomainError("check_min_product: t must be positive");
  const Eigen::Index n = x.size();
  MinProductCheck c;
  double log_prod = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    log_prod += model.log_survival(t / x[i]);
    c.union_sum += complement_survival(model, t / x[i]);
  }
  c.product = std::exp(log_prod);
  const Eigen::VectorXd xv = x.values();
  auto indicator = [&](std::span<double> xi) {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      if (xi[i] * xv[static_cast<Eigen::Index>(i)] <= t) return 0.0;
    }
    return 1.0;
  };
  c.frequency_above = simulate(model, n, indicator, opts).mean;
  const double reps = static_cast<double>(opts.replications);
  const double p_ref = std::clamp(c.product, 1.0 / reps, 1.0 - 1.0 / reps);
  c.std_error = std::sqrt(p_ref * (1.0 - p_ref) / reps);
  c.product_holds = std::abs(c.frequency_above - c.product) <= 4.0 * c.std_error;
  c.union_holds = 1.0 - c.frequency_above <= c.union_sum + 4.0 * c.std_error;
  return c;
}

InequalityCheck check_simcl(const Eigen::VectorXd& values, int k, int j) {
  const Eigen::Index n = values.size();
  if (k < 1 || j < 1 || static_cast<Eigen::Index>(j) > n - k) {
    throw RangeError("check_simcl: precondition 1 <= j <= n - k fails");
  }
  std::vector<double> all(values.size());
  for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = std::abs(values[i]);
  std::vector<double> prefix(all.begin(), all.begin() + (k + j - 1));
  const double suffix_max = *std::max_element(all.begin() + (k + j - 1), all.end());
  InequalityCheck c;
  c.lhs = kth_largest(all, k);
  c.rhs = kth_smallest(prefix, j) + suffix_max;
  c.holds = c.lhs <= c.rhs;
  return c;
}

HlpCheck check_hlp(const Eigen::VectorXd& a, int j) {
  const Eigen::Index m = a.size();
  if (j < 0 || j > m) throw RangeError("check_hlp: precondition 0 <= j <= m fails");
  if ((a.array() < 0.0).any()) throw DomainError("check_hlp: entries must be nonnegative");
  const VectorX<long double> e = elementary_symmetric(a);
  const long double sum = static_cast<long double>(a.sum());
  long double binom = 1.0L;
  long double factorial = 1.0L;
  for (int i = 1; i <= j; ++i) {
    binom = binom * static_cast<long double>(m - j + i) / i;
    factorial *= i;
  }
  HlpCheck c;
  const long double lhs = e[j];
  const long double middle = binom * std::pow(sum / m, static_cast<long double>(j));
  const long double rhs = std::pow(sum, static_cast<long double>(j)) / factorial;
  c.lhs = static_cast<double>(lhs);
  c.middle = static_cast<double>(middle);
  c.rhs = static_cast<double>(rhs);
  c.holds = lhs <= middle * (1.0L + 1e-12L) && middle <= rhs * (1.0L + 1e-12L);
  return c;
}

}  // namespace ordstat
