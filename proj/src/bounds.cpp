#include "ordstat/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ordstat/errors.hpp"

namespace ordstat {
namespace {

constexpr double kE = std::numbers::e;

void require_order(const Weights& x, Order order, const char* who) {
  if (x.order() != order) {
    std::ostringstream msg;
    msg << who << ": weights must be " << to_string(order);
    throw DomainError(msg.str());
  }
}

void require_kmin_range(Eigen::Index n, int k, const char* who) {
  if (k < 1 || 2 * static_cast<Eigen::Index>(k) > n) {
    std::ostringstream msg;
    msg << who << ": precondition 1 <= k <= n/2 fails (k = " << k << ", n = " << n << ")";
    throw RangeError(msg.str());
  }
}

struct InnerMax {
  std::vector<double> terms;
  double value = -1.0;
  int argmax = 0;
};

// terms[j-1] = ‖(1/x_i)_{i=j}^n‖_{2e/(k-j+1) N}^{-1}, j = 1..k
InnerMax kmin_inner(const Eigen::VectorXd& inv_x, const OrliczFunction& N, int k) {
  InnerMax out;
  out.terms.reserve(static_cast<std::size_t>(k));
  const Eigen::Index n = inv_x.size();
  for (int j = 1; j <= k; ++j) {
    const OrliczFunction nj = scale(N, 2.0 * kE / (k - j + 1));
    const double term = 1.0 / orlicz_norm(inv_x.segment(j - 1, n - j + 1), nj);
    out.terms.push_back(term);
    if (term > out.value) {
      out.value = term;
      out.argmax = j;
    }
  }
  return out;
}

}  // namespace

const char* to_string(BoundReport::Kind kind) {
  switch (kind) {
    case BoundReport::Kind::kmin:
      return "kmin";
    case BoundReport::Kind::kmin_gaussian_closed:
      return "kmin_gaussian_closed";
    case BoundReport::Kind::kmax:
      return "kmax";
    case BoundReport::Kind::max1:
      return "max1";
  }
  return "?";
}

BoundReport kmin_bounds(const Weights& x, const Distribution& model, int k,
                        const BoundConstants& constants) {
  require_order(x, Order::ascending, "kmin_bounds");
  require_kmin_range(x.size(), k, "kmin_bounds");

  const OrliczFunction N = make_N(model, /*require_convex=*/false);
  const Eigen::VectorXd inv_x = x.values().cwiseInverse();
  InnerMax inner = kmin_inner(inv_x, N, k);

  BoundReport r;
  r.kind = BoundReport::Kind::kmin;
  r.k = k;
  r.constants = constants;
  r.constants.c_n = BoundConstants::c_n_for(model);
  r.terms = std::move(inner.terms);
  r.inner_max = inner.value;
  r.argmax = inner.argmax;
  r.lower = r.constants.c1 * r.inner_max;
  if (N.convex()) {
    r.upper = r.constants.upper_kmin * r.constants.c_n * std::log(k + 1.0) * r.inner_max;
  } else {
    r.upper = std::numeric_limits<double>::infinity();
    r.upper_valid = false;
    r.notes.push_back("N = -ln F is not convex: lower bound only");
  }
  return r;
}

BoundReport kmin_bounds_gaussian_closed(const Weights& x, int k, const BoundConstants& constants) {
  require_order(x, Order::ascending, "kmin_bounds_gaussian_closed");
  const Eigen::Index n = x.size();
  require_kmin_range(n, k, "kmin_bounds_gaussian_closed");

  // suffix[j] = Σ_{i>=j} 1/x_i (0-based)
  Eigen::VectorXd suffix(n + 1);
  suffix[n] = 0.0;
  for (Eigen::Index i = n; i-- > 0;) suffix[i] = suffix[i + 1] + 1.0 / x[i];

  BoundReport r;
  r.kind = BoundReport::Kind::kmin_gaussian_closed;
  r.k = k;
  r.constants = constants;
  r.constants.c_n = BoundConstants::c_n_for(Distribution::gaussian());
  r.inner_max = -1.0;
  for (int j = 1; j <= k; ++j) {
    const double term = (k + 1.0 - j) / suffix[j - 1];
    r.terms.push_back(term);
    if (term > r.inner_max) {
      r.inner_max = term;
      r.argmax = j;
    }
  }
  r.lower = r.constants.c0 * r.inner_max;
  r.upper = 2.0 * std::sqrt(2.0 * std::numbers::pi) * std::log(k + 1.0) * r.inner_max;
  return r;
}

int kmax_k0(const Distribution& model, int k) {
  return static_cast<int>(std::floor(4.0 * (k - 1) / model.survival(1.0)));
}

BoundReport kmax_bounds(const Weights& x, const Distribution& model, int k,
                        const BoundConstants& constants) {
  require_order(x, Order::descending, "kmax_bounds");
  if (k < 2) {
    throw RangeError("kmax_bounds: requires k > 1; for k = 1 use max1_bounds");
  }
  const Eigen::Index n = x.size();
  const int k0 = kmax_k0(model, k);
  if (static_cast<Eigen::Index>(k) + k0 > n) {
    const std::size_t need = static_cast<std::size_t>(k) + static_cast<std::size_t>(k0);
    std::ostringstream msg;
    msg << "kmax_bounds: k+k0 <= n fails: need n >= " << need << " (k = " << k << ", k0 = " << k0
        << ", n = " << n << ")";
    throw InfeasibleError(msg.str(), need);
  }

  const OrliczFunction N = make_N(model);
  const OrliczFunction M = make_M(model);
  const Eigen::VectorXd inv_x = x.values().cwiseInverse();

  BoundReport r;
  r.kind = BoundReport::Kind::kmax;
  r.k = k;
  r.k0 = k0;
  r.constants = constants;
  r.constants.c_n = BoundConstants::c_n_for(model);
  r.inner_max = -1.0;
  for (int l = 0; l < k0; ++l) {
    const OrliczFunction nl = scale(N, 2.0 * kE / (l + 1));
    const double term = 1.0 / orlicz_norm(inv_x.head(k + l), nl);
    r.terms.push_back(term);
    if (term > r.inner_max) {
      r.inner_max = term;
      r.argmax = l;
    }
  }
  // (x_{k+k0}, ..., x_n), 1-based
  const Eigen::Index start = k + k0 - 1;
  r.m_norm = orlicz_norm(x.values().segment(start, n - start), M);

  const double n1 = N(1.0);
  r.lower = 0.25 * (r.inner_max + r.m_norm / (1.0 + std::log(8.0 * (k - 1)) / n1));
  r.upper_core = r.constants.c_n * std::log(k + 1.0) * r.inner_max + r.m_norm;
  r.upper = r.constants.kmax_upper_c * r.upper_core;
  r.empirical_constant = true;
  r.notes.push_back("upper uses kmax_upper_c, an empirical stand-in for an unspecified absolute constant");
  return r;
}

BoundReport max1_bounds(const Eigen::VectorXd& x, const Distribution& model,
                        const BoundConstants& constants) {
  const double mean = model.mean_abs();
  const Distribution unit = model.normalized();
  const double norm = mean * orlicz_norm(x, make_M(unit));

  BoundReport r;
  r.kind = BoundReport::Kind::max1;
  r.k = 1;
  r.constants = constants;
  r.constants.c_n = BoundConstants::c_n_for(model);
  r.m_norm = norm;
  r.inner_max = norm;
  r.terms = {norm};
  r.lower = constants.max1_low * norm;
  r.upper = constants.max1_high * norm;
  r.empirical_constant = true;
  r.notes.push_back("max1 constants are empirical defaults, not published values");
  return r;
}

double kmin_moment_lower(const Weights& x, const Distribution& model, int k, double p) {
  require_order(x, Order::ascending, "kmin_moment_lower");
  if (!(p > 0.0)) throw DomainError("kmin_moment_lower: p must be positive");
  if (k < 1 || k > x.size()) throw RangeError("kmin_moment_lower: precondition 1 <= k <= n fails");
  const OrliczFunction N = make_N(model, /*require_convex=*/false);
  const InnerMax inner = kmin_inner(x.values().cwiseInverse(), N, k);
  return BoundConstants::defaults().c1 * std::pow(inner.value, p);
}

double min_moment_upper(const Weights& x, const Distribution& model, double p) {
  require_order(x, Order::ascending, "min_moment_upper");
  if (!(p > 0.0)) throw DomainError("min_moment_upper: p must be positive");
  const OrliczFunction N = make_N(model);
  const double norm = orlicz_norm(x.values().cwiseInverse(), N);
  return (1.0 + std::tgamma(1.0 + p)) * std::pow(norm, -p);
}

}  // namespace ordstat
