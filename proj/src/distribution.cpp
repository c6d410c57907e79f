#include "ordstat/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "ordstat/errors.hpp"
#include "ordstat/quadrature.hpp"

namespace ordstat {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

void require_nonneg(double t, const char* what) {
  if (!(t >= 0.0)) {
    std::ostringstream msg;
    msg << what << ": argument must be >= 0, got " << t;
    throw DomainError(msg.str());
  }
}

}  // namespace

double log_erfc(double x) {
  if (x < 20.0) return std::log(std::erfc(x));
  // erfc(x) = exp(-x^2) / (x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 10; ++k) {
    term *= -(2.0 * k - 1.0) * inv;
    series += term;
  }
  return -x * x - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series);
}

// ---------------------------------------------------------------------------
// Tabulated survival: monotone cubic Hermite interpolation of ln F.

struct Distribution::Table {
  std::vector<double> t;
  std::vector<double> log_f;
  std::vector<double> slope;   // d ln F / dt at the nodes
  std::vector<double> suffix;  // ∫_{t_i}^{t_end} F
  double truncation_bound = 0.0;  // bound on ∫_{t_end}^∞ F from log-concavity

  std::size_t segment(double u) const {
    auto it = std::upper_bound(t.begin(), t.end(), u);
    std::size_t i = static_cast<std::size_t>(it - t.begin());
    if (i == 0) return 0;
    return std::min(i - 1, t.size() - 2);
  }

  double log_value(double u) const {
    const std::size_t i = segment(u);
    const double h = t[i + 1] - t[i];
    const double s = (u - t[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * log_f[i] + (s3 - 2 * s2 + s) * h * slope[i] +
           (-2 * s3 + 3 * s2) * log_f[i + 1] + (s3 - s2) * h * slope[i + 1];
  }

  double end() const { return t.back(); }
};

namespace {

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), d(n - 1), m(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = d[0];
    return m;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) continue;
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double v = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (std::signbit(v) != std::signbit(d0)) return 0.0;
    if (std::signbit(d0) != std::signbit(d1) && std::abs(v) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return v;
  };
  m[0] = edge(h[0], h[1], d[0], d[1]);
  m[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

}  // namespace

Distribution Distribution::gaussian() {
  Distribution d;
  d.family_ = Family::gaussian;
  return d;
}

Distribution Distribution::sym_exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("sym_exponential: rate must be positive and finite");
  }
  Distribution d;
  d.family_ = Family::sym_exponential;
  d.rate_ = rate;
  return d;
}

Distribution Distribution::tabulated(std::vector<double> t, std::vector<double> survival) {
  if (t.size() != survival.size()) throw TabulationError("table: column lengths differ");
  if (t.size() < 2) throw TabulationError("table: need at least two rows");
  if (t.front() != 0.0) throw TabulationError("table: first row must have t = 0");
  if (survival.front() != 1.0) throw TabulationError("table: F(0) must equal 1");
  for (std::size_t i = 1; i < t.size(); ++i) {
    std::ostringstream msg;
    if (!(t[i] > t[i - 1]) || !std::isfinite(t[i])) {
      msg << "table: t must be strictly increasing (row " << i + 1 << ")";
      throw TabulationError(msg.str());
    }
    if (!(survival[i] < survival[i - 1]) || !(survival[i] > 0.0)) {
      msg << "table: F must be strictly decreasing and positive (row " << i + 1 << ")";
      throw TabulationError(msg.str());
    }
  }

  auto table = std::make_shared<Table>();
  table->t = std::move(t);
  table->log_f.resize(survival.size());
  std::transform(survival.begin(), survival.end(), table->log_f.begin(),
                 [](double f) { return std::log(f); });
  table->slope = pchip_slopes(table->t, table->log_f);

  // N = -ln F convex <=> secant slopes of ln F nonincreasing.
  bool concave = true;
  for (std::size_t i = 1; i + 1 < table->t.size(); ++i) {
    const double left = (table->log_f[i] - table->log_f[i - 1]) / (table->t[i] - table->t[i - 1]);
    const double right = (table->log_f[i + 1] - table->log_f[i]) / (table->t[i + 1] - table->t[i]);
    if (right > left + 1e-9) concave = false;
  }

  const std::size_t n = table->t.size();
  table->suffix.assign(n, 0.0);
  const Table& tab = *table;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double seg = integrate_or_throw(
        [&tab](double u) { return std::exp(tab.log_value(u)); }, tab.t[i], tab.t[i + 1],
        {1e-14, 1e-12, 200});
    table->suffix[i] = table->suffix[i + 1] + seg;
  }
  const double n_end = -table->log_f.back();
  table->truncation_bound = table->t.back() * survival.back() / n_end;

  Distribution d;
  d.family_ = Family::tabulated;
  d.log_concave_ = concave;
  d.table_ = std::move(table);
  return d;
}

Distribution Distribution::tabulated_csv(std::istream& in) {
  std::vector<double> t, f;
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError("table csv line " + std::to_string(lineno) + ": expected two columns `t,F`",
                       lineno);
    }
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    double tv = 0.0, fv = 0.0;
    std::size_t pa = 0, pb = 0;
    bool ok = true;
    try {
      tv = std::stod(a, &pa);
      fv = std::stod(b, &pb);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok) {
      ok = a.find_first_not_of(" \t", pa) == std::string::npos &&
           b.find_first_not_of(" \t", pb) == std::string::npos;
    }
    if (!ok) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ParseError("table csv line " + std::to_string(lineno) + ": non-numeric value", lineno);
    }
    header_allowed = false;
    if (!t.empty() && !(tv > t.back())) {
      throw ParseError("table csv line " + std::to_string(lineno) + ": t not strictly increasing",
                       lineno);
    }
    if (!f.empty() && !(fv < f.back())) {
      throw ParseError("table csv line " + std::to_string(lineno) + ": F not strictly decreasing",
                       lineno);
    }
    if (t.empty() && (tv != 0.0 || fv != 1.0)) {
      throw ParseError("table csv line " + std::to_string(lineno) + ": first row must be 0,1",
                       lineno);
    }
    if (!(fv > 0.0)) {
      throw ParseError("table csv line " + std::to_string(lineno) + ": F must be positive", lineno);
    }
    t.push_back(tv);
    f.push_back(fv);
  }
  if (t.size() < 2) throw ParseError("table csv: need at least two data rows", lineno);
  return tabulated(std::move(t), std::move(f));
}

Distribution Distribution::tabulated_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file " + path.string(), 0);
  return tabulated_csv(in);
}

Distribution Distribution::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DomainError("Distribution::scaled: factor must be positive and finite");
  }
  Distribution d = *this;
  d.scale_ *= factor;
  return d;
}

Distribution Distribution::normalized() const { return scaled(1.0 / mean_abs()); }

// --- base-variable primitives (scale 1) -------------------------------------

double Distribution::base_survival(double u) const {
  switch (family_) {
    case Family::gaussian:
      return std::erfc(u / std::numbers::sqrt2);
    case Family::sym_exponential:
      return std::exp(-rate_ * u);
    case Family::tabulated:
      return std::exp(base_log_survival(u));
  }
  return 0.0;
}

double Distribution::base_log_survival(double u) const {
  switch (family_) {
    case Family::gaussian:
      return log_erfc(u / std::numbers::sqrt2);
    case Family::sym_exponential:
      return -rate_ * u;
    case Family::tabulated: {
      if (u > table_->end()) {
        std::ostringstream msg;
        msg << "table: t = " << u * scale_ << " beyond tabulated range [0, "
            << table_->end() * scale_ << "]; extrapolation is refused";
        throw TabulationError(msg.str());
      }
      return table_->log_value(u);
    }
  }
  return 0.0;
}

double Distribution::base_quantile(double p) const {
  if (p == 1.0) return 0.0;
  const double target = std::log(p);
  switch (family_) {
    case Family::sym_exponential:
      return -target / rate_;
    case Family::gaussian: {
      // ln F is concave and decreasing, so Newton iterates approach the root
      // monotonically from the right after the first step.
      const double log_c = 0.5 * std::log(2.0 / std::numbers::pi);
      double u = 1.0;
      for (int it = 0; it < 200; ++it) {
        const double lf = log_erfc(u / std::numbers::sqrt2);
        const double hazard = std::exp(log_c - 0.5 * u * u - lf);
        double next = u + (lf - target) / hazard;
        if (next < 0.0) next = 0.5 * u;
        const double step = std::abs(next - u);
        u = next;
        if (step <= 1e-15 * std::max(1.0, u)) break;
      }
      return u;
    }
    case Family::tabulated: {
      const Table& tab = *table_;
      if (target < tab.log_f.back()) {
        std::ostringstream msg;
        msg << "table: quantile level " << p << " below last tabulated F = "
            << std::exp(tab.log_f.back()) << "; extrapolation is refused";
        throw TabulationError(msg.str());
      }
      auto it = std::lower_bound(tab.log_f.begin(), tab.log_f.end(), target, std::greater<>());
      std::size_t i = static_cast<std::size_t>(it - tab.log_f.begin());
      if (i < tab.log_f.size() && tab.log_f[i] == target) return tab.t[i];
      double lo = tab.t[i - 1];
      double hi = tab.t[i];
      for (int k = 0; k < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (tab.log_value(mid) > target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double Distribution::base_tail(double u) const {
  switch (family_) {
    case Family::gaussian:
      return kSqrt2OverPi * std::exp(-0.5 * u * u);
    case Family::sym_exponential:
      return (u + 1.0 / rate_) * std::exp(-rate_ * u);
    case Family::tabulated: {
      const Table& tab = *table_;
      if (tab.truncation_bound > 1e-10) {
        std::ostringstream msg;
        msg << "table: tail beyond t = " << tab.end() * scale_
            << " may carry up to " << tab.truncation_bound * scale_
            << " of E|xi|; extend the table to resolve tail integrals";
        throw TabulationError(msg.str());
      }
      const double fu = std::exp(base_log_survival(u));
      const std::size_t i = tab.segment(u);
      const double partial = integrate_or_throw(
          [&tab](double v) { return std::exp(tab.log_value(v)); }, u, tab.t[i + 1],
          {1e-14, 1e-12, 200});
      return u * fu + partial + tab.suffix[i + 1];
    }
  }
  return 0.0;
}

// --- public, scale-aware ----------------------------------------------------

double Distribution::survival(double t) const {
  require_nonneg(t, "survival");
  if (std::isinf(t)) return 0.0;
  return base_survival(t / scale_);
}

double Distribution::log_survival(double t) const {
  require_nonneg(t, "log_survival");
  if (std::isinf(t)) return -kInf;
  return base_log_survival(t / scale_);
}

double Distribution::quantile(double p) const {
  if (!(p > 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "quantile: level must lie in (0, 1], got " << p;
    throw DomainError(msg.str());
  }
  return scale_ * base_quantile(p);
}

double Distribution::tail_integral(double t) const {
  require_nonneg(t, "tail_integral");
  if (std::isinf(t)) return 0.0;
  return scale_ * base_tail(t / scale_);
}

double Distribution::mean_abs() const { return tail_integral(0.0); }

double Distribution::support_limit() const {
  return family_ == Family::tabulated ? scale_ * table_->end() : kInf;
}

std::vector<double> Distribution::sample(Rng& rng, std::size_t count) const {
  std::vector<double> out(count);
  if (family_ == Family::gaussian) {
    std::normal_distribution<double> normal(0.0, scale_);
    for (double& v : out) v = normal(rng);
    return out;
  }
  sample_abs(rng, out);
  std::bernoulli_distribution coin(0.5);
  for (double& v : out) {
    if (coin(rng)) v = -v;
  }
  return out;
}

void Distribution::sample_abs(Rng& rng, std::span<double> out) const {
  switch (family_) {
    case Family::gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (double& v : out) v = scale_ * std::abs(normal(rng));
      return;
    }
    case Family::sym_exponential: {
      std::exponential_distribution<double> expo(rate_);
      for (double& v : out) v = scale_ * expo(rng);
      return;
    }
    case Family::tabulated: {
      // Draws are conditioned on |ξ| <= table end (a mass of 1 - F(t_end)).
      std::uniform_real_distribution<double> unif(std::exp(table_->log_f.back()), 1.0);
      for (double& v : out) v = scale_ * base_quantile(unif(rng));
      return;
    }
  }
}

std::string Distribution::describe() const {
  std::ostringstream s;
  s << std::setprecision(17);
  switch (family_) {
    case Family::gaussian:
      s << "gaussian";
      break;
    case Family::sym_exponential:
      s << "symexp:" << rate_;
      break;
    case Family::tabulated:
      s << "table:" << table_->t.size() << "pts";
      break;
  }
  if (scale_ != 1.0) s << "*" << scale_;
  return s.str();
}

SubMultCheck verify_sub_mult(const Distribution& model, double t) {
  if (!(t > 0.0)) throw DomainError("verify_sub_mult: t must be positive");
  const double n_t = -model.log_survival(t);
  if (!(n_t > 0.0)) throw DomainError("verify_sub_mult: N(t) must be positive");
  SubMultCheck c;
  c.t = t;
  c.tail = model.tail_integral(t);
  c.bound = (1.0 + 1.0 / n_t) * t * model.survival(t);
  c.holds = c.tail <= c.bound + 1e-9;
  return c;
}

InvariantReport check_invariants(const Distribution& model, std::size_t points, double t_max) {
  if (points < 3) throw DomainError("check_invariants: need at least 3 grid points");
  if (!(t_max > 0.0)) {
    const double limit = model.support_limit();
    t_max = std::isfinite(limit) ? limit : model.quantile(1e-12);
  }
  InvariantReport r;
  r.grid_points = points;
  const double h = t_max / static_cast<double>(points - 1);
  std::vector<double> f(points), n(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = std::min(t_max, h * static_cast<double>(i));
    f[i] = model.survival(t);
    n[i] = -model.log_survival(t);
  }
  r.starts_at_one = f[0] == 1.0;
  r.strictly_decreasing = true;
  for (std::size_t i = 1; i < points; ++i) {
    if (!(n[i] > n[i - 1])) r.strictly_decreasing = false;
  }
  r.worst_second_difference = kInf;
  for (std::size_t i = 1; i + 1 < points; ++i) {
    r.worst_second_difference = std::min(r.worst_second_difference, n[i + 1] - 2.0 * n[i] + n[i - 1]);
  }
  r.convex_log = r.worst_second_difference >= -1e-9;
  r.worst_quantile_rel_error = 0.0;
  for (std::size_t i = 1; i + 1 < points; ++i) {
    const double t = h * static_cast<double>(i);
    const double back = model.quantile(f[i]);
    r.worst_quantile_rel_error = std::max(r.worst_quantile_rel_error, std::abs(back - t) / t);
  }
  r.quantile_roundtrip = r.worst_quantile_rel_error <= 1e-8;
  return r;
}

}  // namespace ordstat
