#include "ordstat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ordstat/errors.hpp"
#include "ordstat/montecarlo.hpp"
#include "ordstat/orlicz.hpp"
#include "ordstat/partition.hpp"
#include "ordstat/random.hpp"
#include "ordstat/weights.hpp"

namespace ordstat {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// splitmix64 finalizer, to derive unrelated seeds for suites and cases
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Context {
  const Distribution& model;
  const SuiteOptions& opts;
  std::uint64_t suite_seed;

  Rng case_rng(int i) const { return substream(suite_seed, static_cast<std::uint64_t>(i)); }
  SimulationOptions sim(int i) const {
    return {opts.replications, mix(suite_seed ^ mix(static_cast<std::uint64_t>(i) + 1)), opts.threads};
  }
};

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Eigen::VectorXd uniform_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (double& e : v) e = uniform(rng, lo, hi);
  return v;
}

template <typename... Ts>
std::string describe(const Ts&... parts) {
  std::ostringstream s;
  s.precision(6);
  (s << ... << parts);
  return s.str();
}

std::vector<CheckRow> suite_agmean(const Context& c) {
  std::vector<CheckRow> rows;
  for (int i = 0; i < c.opts.cases; ++i) {
    Rng rng = c.case_rng(i);
    const int n = uniform_int(rng, 1, 22);
    const int k = uniform_int(rng, 1, n);
    Eigen::VectorXd a = uniform_vector(rng, n, 0.0, 1.0);
    const double target = uniform(rng, 0.01, 0.99);
    a *= target * k / (std::numbers::e * a.sum());
    const InequalityCheck r = check_agmean(a, k);
    rows.push_back({"agmean", i, describe("n=", n, " k=", k, " a=", target), r.lhs, r.rhs, r.holds});
  }
  return rows;
}

std::vector<CheckRow> suite_kmin_tail(const Context& c) {
  std::vector<CheckRow> rows;
  for (int i = 0; i < c.opts.cases; ++i) {
    Rng rng = c.case_rng(i);
    const int n = uniform_int(rng, 5, 40);
    const int k = uniform_int(rng, 1, std::min(n, 6));
    const Weights x = Weights::sorted(uniform_vector(rng, n, 0.5, 5.0), Order::ascending);
    const double level = uniform(rng, 0.05, 0.95);
    const double t = kmin_tail_level_threshold(x, c.model, k, level);
    const InequalityCheck r = check_kmin_tail(x, c.model, k, t, c.sim(i));
    rows.push_back({"kmin-tail", i, describe("n=", n, " k=", k, " a(t)=", level, " t=", t), r.lhs,
                    r.rhs + r.margin, r.holds});
  }
  return rows;
}

std::vector<CheckRow> suite_min_product(const Context& c) {
  std::vector<CheckRow> rows;
  for (int i = 0; i < c.opts.cases; ++i) {
    Rng rng = c.case_rng(i);
    const int n = uniform_int(rng, 1, 10);
    const Weights x = Weights::sorted(uniform_vector(rng, n, 0.5, 5.0), Order::ascending);
    // t with Π F(t / x_i) at a random level in (0.05, 0.95)
    const double log_level = std::log(uniform(rng, 0.05, 0.95));
    auto log_prod = [&](double t) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < x.size(); ++j) s += c.model.log_survival(t / x[j]);
      return s;
    };
    double lo = 0.0;
    double hi = x.values().minCoeff() * c.model.quantile(0.5);
    while (log_prod(hi) > log_level) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_prod(mid) > log_level ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    const MinProductCheck r = check_min_product(x, c.model, t, c.sim(i));
    rows.push_back({"min-product", i, describe("n=", n, " t=", t, " |P-prod|<=4se, 1-P<=sum"),
                    r.frequency_above, r.product, r.holds()});
  }
  return rows;
}

std::vector<CheckRow> suite_simcl(const Context& c) {
  constexpr int kRealizations = 1000;
  std::vector<CheckRow> rows;
  for (int i = 0; i < c.opts.cases; ++i) {
    Rng rng = c.case_rng(i);
    const int n = uniform_int(rng, 2, 50);
    const int k = uniform_int(rng, 1, n - 1);
    const int j = uniform_int(rng, 1, n - k);
    const Eigen::VectorXd x = uniform_vector(rng, n, 0.5, 5.0);
    CheckRow row{"simcl", i, describe("n=", n, " k=", k, " j=", j, " tightest of ", kRealizations), kNaN,
                 kNaN, true};
    double best_slack = std::numeric_limits<double>::infinity();
    Eigen::VectorXd v(n);
    for (int r = 0; r < kRealizations; ++r) {
      c.model.sample_abs(rng, std::span<double>(v.data(), static_cast<std::size_t>(n)));
      v.array() *= x.array();
      const InequalityCheck chk = check_simcl(v, k, j);
      row.pass = row.pass && chk.holds;
      if (chk.rhs - chk.lhs < best_slack) {
        best_slack = chk.rhs - chk.lhs;
        row.lhs = chk.lhs;
        row.rhs = chk.rhs;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CheckRow> suite_hlp(const Context& c) {
  std::vector<CheckRow> rows;
  for (int i = 0; i < c.opts.cases; ++i) {
    Rng rng = c.case_rng(i);
    const int m = uniform_int(rng, 1, 22);
    const int j = uniform_int(rng, 0, m);
    const Eigen::VectorXd a = uniform_vector(rng, m, 0.0, 2.0);
    const HlpCheck r = check_hlp(a, j);
    rows.push_back({"hlp", i, describe("m=", m, " j=", j, " middle=", r.middle), r.lhs, r.rhs, r.holds});
  }
  return rows;
}

std::vector<CheckRow> suite_sub_mult(const Context& c) {
  std::vector<CheckRow> rows;
  double p_min = 1e-8;
  if (std::isfinite(c.model.support_limit())) {
    p_min = std::max(p_min, 1e3 * c.model.survival(c.model.support_limit()));
  }
  for (int i = 0; i < c.opts.cases; ++i) {
    Rng rng = c.case_rng(i);
    const double p = std::exp(uniform(rng, std::log(p_min), std::log(0.99)));
    const double t = c.model.quantile(p);
    const SubMultCheck r = verify_sub_mult(c.model, t);
    rows.push_back({"sub-mult", i, describe("t=", t, " F(t)=", p), r.tail, r.bound, r.holds});
  }
  return rows;
}

std::vector<CheckRow> suite_gaussian_h(const Context&) {
  constexpr int kPoints = 1000;
  const Distribution g = Distribution::gaussian();
  const double lower_c = 1.0 / std::sqrt(2.0 * std::numbers::pi * std::numbers::e);
  const double sqrt_2_pi = std::sqrt(2.0 / std::numbers::pi);
  // worst ratio lhs/rhs of each inequality over the grid
  double r_lower = 0.0, r_upper = 0.0, r_gadi = 0.0, r_gaditri = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double t = 0.01 + (10.0 - 0.01) * i / (kPoints - 1);
    const double n = -g.log_survival(t);
    const double h = gaussian_H(t);
    r_lower = std::max(r_lower, lower_c * h / n);
    r_upper = std::max(r_upper, n / (4.5 * h));
    const double log_f = g.log_survival(t);
    r_gadi = std::max(r_gadi, std::exp(log_f - (std::log(sqrt_2_pi / t) - 0.5 * t * t)));
    const double log_tri = std::log(sqrt_2_pi / (std::numbers::e * t)) - 0.5 * (t * t + 1.0 / (t * t));
    r_gaditri = std::max(r_gaditri, std::exp(log_tri - log_f));
  }
  const char* grid = " worst ratio over 1000 points in [0.01,10]";
  return {
      {"gaussian-h", 0, std::string("H/sqrt(2 pi e) <= N") + grid, r_lower, 1.0, r_lower <= 1.0},
      {"gaussian-h", 1, std::string("N <= 4.5 H") + grid, r_upper, 1.0, r_upper <= 1.0},
      {"gaussian-h", 2, std::string("F <= sqrt(2/pi) exp(-t^2/2)/t") + grid, r_gadi, 1.0, r_gadi <= 1.0},
      {"gaussian-h", 3, std::string("sqrt(2/pi) exp(-(t^2+t^-2)/2)/(e t) <= F") + grid, r_gaditri, 1.0,
       r_gaditri <= 1.0},
  };
}

std::vector<CheckRow> suite_partition(const Context& c) {
  const OrliczFunction candidates[] = {OrliczFunction::linear(), OrliczFunction::power(2.0),
                                       make_N(Distribution::gaussian())};
  const char* names[] = {"linear", "quadratic", "gaussian-N"};
  std::vector<CheckRow> rows;
  for (int i = 0; i < c.opts.cases; ++i) {
    Rng rng = c.case_rng(i);
    const int n = uniform_int(rng, 1, 200);
    const int k = uniform_int(rng, 1, n);
    const int h = uniform_int(rng, 0, 2);
    Eigen::VectorXd raw(n);
    for (double& e : raw) e = std::exp(uniform(rng, std::log(0.01), std::log(100.0)));
    const Weights x = Weights::sorted(raw, Order::ascending);
    CheckRow row{"partition", i, describe("n=", n, " k=", k, " H=", names[h]), kNaN, kNaN, false};
    try {
      const PartitionResult r = build_partition(x, candidates[h], k);
      row.instance += describe(" ", to_string(r.case_taken));
      row.lhs = r.certificate.lhs;
      row.rhs = r.certificate.rhs;
      row.pass = r.certificate.holds && r.blocks.size() == static_cast<std::size_t>(k);
    } catch (const NumericError& e) {
      row.instance += describe(" error: ", e.what());
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CheckRow> suite_duality(const Context& c) {
  const OrliczFunction M = make_M(c.model);
  const double unit = c.model.mean_abs() / std::sqrt(2.0 / std::numbers::pi);
  std::vector<CheckRow> rows;
  int index = 0;
  for (int i = 0; i <= 16; ++i) {
    const double t = 0.25 * i * unit;
    if (t >= c.model.support_limit()) break;
    CheckRow row{"duality", index++, describe("t=", t, " |M*(tail(t)) - F(t)| <= 1e-6"), kNaN,
                 c.model.survival(t), false};
    try {
      row.lhs = dual(M, c.model.tail_integral(t), DualMethod::numeric);
      row.pass = std::abs(row.lhs - row.rhs) <= 1e-6;
    } catch (const Error& e) {
      row.instance += describe(" error: ", e.what());
    }
    rows.push_back(row);
  }
  const double s = c.model.mean_abs() * (1.0 + 1e-6);
  const double v = dual(M, s, DualMethod::numeric);
  rows.push_back({"duality", index, describe("M*(E|xi| (1+1e-6)) = inf"), v,
                  std::numeric_limits<double>::infinity(), std::isinf(v)});
  return rows;
}

using SuiteFn = std::vector<CheckRow> (*)(const Context&);

struct Entry {
  const char* name;
  SuiteFn fn;
};

constexpr Entry kRegistry[] = {
    {"agmean", suite_agmean},       {"kmin-tail", suite_kmin_tail}, {"min-product", suite_min_product},
    {"simcl", suite_simcl},         {"hlp", suite_hlp},             {"sub-mult", suite_sub_mult},
    {"gaussian-h", suite_gaussian_h}, {"partition", suite_partition}, {"duality", suite_duality},
};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Entry& e : kRegistry) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

std::vector<CheckRow> run_suite(std::string_view name, const Distribution& model, const SuiteOptions& opts) {
  if (opts.cases < 0) throw DomainError("run_suite: cases must be >= 0");
  for (std::size_t i = 0; i < std::size(kRegistry); ++i) {
    if (name == kRegistry[i].name) {
      const Context c{model, opts, mix(opts.seed * 0x100000001b3ULL + i)};
      return kRegistry[i].fn(c);
    }
  }
  throw DomainError("run_suite: unknown suite '" + std::string(name) + "'");
}

}  // namespace ordstat
