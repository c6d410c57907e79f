#include "ordstat/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ordstat/errors.hpp"

namespace ordstat {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxExpansions = 200;

}  // namespace

double gaussian_H(double t) {
  if (!(t >= 0.0)) throw DomainError("gaussian_H: t must be >= 0");
  return t < 1.0 ? t : t * t;
}

OrliczFunction OrliczFunction::linear() {
  OrliczFunction f;
  f.kind_ = OrliczKind::linear;
  return f;
}

OrliczFunction OrliczFunction::power(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("power Orlicz function needs q >= 1");
  OrliczFunction f;
  f.kind_ = OrliczKind::power;
  f.q_ = q;
  return f;
}

OrliczFunction OrliczFunction::gaussian_h() {
  OrliczFunction f;
  f.kind_ = OrliczKind::gaussian_H;
  return f;
}

OrliczFunction OrliczFunction::from_callable(std::function<double(double)> fn, std::string name,
                                             bool convex, double domain_bound) {
  if (!fn) throw DomainError("from_callable: empty function");
  if (!(domain_bound > 0.0)) throw DomainError("from_callable: domain bound must be positive");
  OrliczFunction f;
  f.kind_ = OrliczKind::explicit_fn;
  f.fn_ = std::move(fn);
  f.name_ = std::move(name);
  f.convex_ = convex;
  f.domain_bound_ = domain_bound;
  return f;
}

OrliczFunction make_M(const Distribution& model) {
  OrliczFunction f;
  f.kind_ = OrliczKind::distribution_M;
  f.model_ = model;
  return f;
}

OrliczFunction make_N(const Distribution& model, bool require_convex) {
  if (require_convex && !model.log_concave()) {
    throw DomainError("make_N: -ln F fails the convexity check for " + model.describe());
  }
  OrliczFunction f;
  f.kind_ = OrliczKind::distribution_N;
  f.model_ = model;
  f.convex_ = model.log_concave();
  return f;
}

OrliczFunction make_NFk(const Distribution& model, int k) {
  if (k < 2) throw DomainError("make_NFk: k must be >= 2");
  OrliczFunction f;
  f.kind_ = OrliczKind::survival_NFk;
  f.model_ = model;
  f.k_ = k;
  f.convex_ = false;
  return f;
}

OrliczFunction scale(const OrliczFunction& M, double s) { return M.scaled(s); }

OrliczFunction OrliczFunction::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("scale: factor must be positive and finite");
  OrliczFunction f = *this;
  f.factor_ *= s;
  return f;
}

double OrliczFunction::base(double t) const {
  switch (kind_) {
    case OrliczKind::linear:
      return t;
    case OrliczKind::power:
      return std::pow(t, q_);
    case OrliczKind::gaussian_H:
      return t < 1.0 ? t : t * t;
    case OrliczKind::explicit_fn:
      return fn_(t);
    case OrliczKind::distribution_N:
      return -model_->log_survival(t);
    case OrliczKind::distribution_M: {
      if (t == 0.0) return 0.0;
      if (std::isinf(t)) return kInf;
      const double u = 1.0 / t;
      return std::max(0.0, t * model_->tail_integral(u) - model_->survival(u));
    }
    case OrliczKind::survival_NFk: {
      if (t == 0.0) return 0.0;
      const double u = std::isinf(t) ? 0.0 : 1.0 / t;
      return model_->survival(u) / (4.0 * (k_ - 1));
    }
  }
  return 0.0;
}

double OrliczFunction::operator()(double t) const {
  if (!(t >= 0.0)) {
    std::ostringstream msg;
    msg << "Orlicz function evaluated at " << t << " (must be >= 0)";
    throw DomainError(msg.str());
  }
  if (t > domain_bound_) return kInf;
  const double v = base(t);
  return v == 0.0 ? 0.0 : factor_ * v;
}

std::string OrliczFunction::describe() const {
  std::ostringstream s;
  s.precision(17);
  if (factor_ != 1.0) s << factor_ << "*";
  switch (kind_) {
    case OrliczKind::linear:
      s << "linear";
      break;
    case OrliczKind::power:
      s << "power(" << q_ << ")";
      break;
    case OrliczKind::gaussian_H:
      s << "H";
      break;
    case OrliczKind::explicit_fn:
      s << (name_.empty() ? "explicit" : name_);
      break;
    case OrliczKind::distribution_M:
      s << "M[" << model_->describe() << "]";
      break;
    case OrliczKind::distribution_N:
      s << "N[" << model_->describe() << "]";
      break;
    case OrliczKind::survival_NFk:
      s << "N_F,k[" << model_->describe() << ", k=" << k_ << "]";
      break;
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// Duals

namespace {

double dual_tail_inversion(const OrliczFunction& M, double s) {
  if (M.kind() != OrliczKind::distribution_M) {
    throw DomainError("dual: tail inversion needs a distribution-derived M");
  }
  const Distribution& model = *M.model();
  // (cM)*(s) = c M*(s / c)
  const double c = M.factor();
  const double sigma = s / c;
  const double mean = model.mean_abs();
  if (sigma > mean) return kInf;
  if (sigma == 0.0) return 0.0;
  if (sigma == mean) return c;

  // tail_integral is decreasing from E|ξ| at 0 to 0 at infinity.
  double lo = 0.0;
  double hi = 1.0;
  if (model.family() == Family::gaussian) {
    // tail(t) = scale sqrt(2/π) exp(-(t/scale)^2 / 2)
    const double sc = model.scale();
    const double t = sc * std::sqrt(2.0 * std::log(sc * std::sqrt(2.0 / std::numbers::pi) / sigma));
    return c * model.survival(t);
  }
  while (model.tail_integral(hi) > sigma) {
    lo = hi;
    hi *= 2.0;
    if (hi > model.support_limit()) {
      hi = model.support_limit();
      break;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (model.tail_integral(mid) > sigma) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return c * model.survival(0.5 * (lo + hi));
}

double dual_numeric(const OrliczFunction& M, double s) {
  auto f = [&](double w) {
    const double m = M(w);
    return std::isinf(m) ? -kInf : w * s - m;
  };
  constexpr double kCap = 1e8;
  const double bound = M.domain_bound();

  double a = 0.0;
  double b = 0.0;
  if (std::isfinite(bound)) {
    b = bound;
  } else {
    double w = 1.0;
    double fw = f(w);
    bool bracketed = false;
    while (w < kCap) {
      const double w2 = 2.0 * w;
      const double f2 = f(w2);
      if (f2 <= fw) {
        b = w2;
        bracketed = true;
        break;
      }
      w = w2;
      fw = f2;
    }
    if (!bracketed) {
      // f is concave; its slope on [cap/2, cap] approximates s - lim M(t)/t.
      const double half = f(0.5 * w);
      const double slope = (fw - half) / (0.5 * w);
      if (slope > 1e-9 * std::max(1.0, s)) return kInf;
      return std::max(0.0, fw);
    }
  }

  // golden-section search for the maximum of the concave f on [a, b]
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  const double tol = 1e-10 * std::max(1.0, b);
  for (int i = 0; i < 400 && b - a > tol; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  double best = std::max({f1, f2, f(a), f(b), 0.0});
  if (std::isfinite(bound)) best = std::max(best, f(bound));
  return best;
}

}  // namespace

double dual(const OrliczFunction& M, double s, DualMethod method) {
  if (!(s >= 0.0)) throw DomainError("dual: s must be >= 0");
  if (s == 0.0) return 0.0;
  switch (method) {
    case DualMethod::tail_inversion:
      return dual_tail_inversion(M, s);
    case DualMethod::numeric:
      return dual_numeric(M, s);
    case DualMethod::automatic:
      return M.kind() == OrliczKind::distribution_M ? dual_tail_inversion(M, s)
                                                    : dual_numeric(M, s);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Norm functional

NormResult solve_orlicz_norm(std::span<const double> abs_x, const OrliczFunction& M) {
  double top = 0.0;
  for (double v : abs_x) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("orlicz_norm: entries must be finite");
    top = std::max(top, v);
  }
  if (top == 0.0) throw DomainError("orlicz_norm: zero vector");

  NormResult r;
  r.is_norm = M.convex();
  auto modular = [&](double rho) {
    double sum = 0.0;
    for (double v : abs_x) {
      if (v == 0.0) continue;
      const double m = M(v / rho);
      if (std::isinf(m)) return kInf;
      sum += m;
    }
    return sum;
  };

  // Bracket: S(lo) > 1 >= S(hi); S is nonincreasing in rho.
  double hi = top;
  int expansions = 0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (++expansions > kMaxExpansions) {
      throw UnboundedError("orlicz_norm: modular sum stays above 1 for " + M.describe());
    }
  }
  double lo = 0.5 * hi;
  expansions = 0;
  while (modular(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (++expansions > kMaxExpansions) {
      r.value = 0.0;
      r.infimum_zero = true;
      r.bracket_width = hi;
      return r;
    }
  }

  int it = 0;
  while (hi - lo > 1e-15 * hi && it < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (modular(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++it;
  }
  r.value = hi;
  r.residual = modular(hi) - 1.0;
  r.bracket_width = hi - lo;
  r.iterations = it;
  return r;
}

// ---------------------------------------------------------------------------

BoundConstants BoundConstants::defaults() {
  BoundConstants c;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  c.c1 = 1.0 - inv_sqrt_2pi;
  c.upper_kmin = 16.0 * std::numbers::e * std::numbers::e;
  c.c0 = c.c1 / (2.0 * std::numbers::e) * std::sqrt(std::numbers::pi / 2.0);
  return c;
}

double BoundConstants::c_n_for(const Distribution& model) {
  const double n1 = -model.log_survival(1.0);
  return std::max(n1, 1.0 / n1);
}

}  // namespace ordstat
