#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ordstat/errors.hpp"
#include "ordstat/orlicz.hpp"

using namespace ordstat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kE = std::numbers::e;

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double lo = 0.1, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (double& e : v) e = u(rng);
  return v;
}

}  // namespace

TEST_CASE("gaussian M against both integral forms") {
  const OrliczFunction M = make_M(Distribution::gaussian());
  CHECK(M(0.0) == 0.0);
  CHECK(M(1.0) == doctest::Approx(0.166630941).epsilon(1e-8));
  for (double s : {0.3, 0.7, 1.0, 2.0, 2.291861379, 5.0}) {
    CHECK(M(s) == doctest::Approx(oracle::gaussian_M(s)).epsilon(1e-10));
    CHECK(M(s) == doctest::Approx(oracle::M_from_density(oracle::gaussian_density_abs, s, 40.0)).epsilon(1e-10));
  }
  CHECK(M(2.291861379) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("gaussian M against sampling") {
  const Distribution g = Distribution::gaussian();
  const OrliczFunction M = make_M(g);
  Rng rng(11);
  const auto v = g.sample(rng, 400000);
  double s1 = 0.0, s2 = 0.0;
  for (double x : v) {
    const double m = std::max(std::abs(x) - 1.0, 0.0);
    s1 += m;
    s2 += m * m;
  }
  const double mean = s1 / v.size();
  const double se = std::sqrt((s2 / v.size() - mean * mean) / v.size());
  CHECK(std::abs(mean - M(1.0)) <= 4.0 * se);
}

TEST_CASE("exponential M") {
  const OrliczFunction M = make_M(Distribution::sym_exponential(1.0));
  CHECK(M(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  auto density = [](double u) { return std::exp(-u); };
  for (double s : {0.2, 1.0, 3.0}) {
    CHECK(M(s) == doctest::Approx(oracle::M_from_density(density, s, 120.0)).epsilon(1e-9));
  }
}

TEST_CASE("N") {
  const OrliczFunction N = make_N(Distribution::gaussian());
  CHECK(N(0.0) == 0.0);
  CHECK(N(1.0) == doctest::Approx(-std::log(oracle::gaussian_survival(1.0))).epsilon(1e-10));
  CHECK(N(1.0) == doctest::Approx(1.147874464).epsilon(1e-9));
  const OrliczFunction Ne = make_N(Distribution::sym_exponential(1.0));
  for (double t : {0.0, 0.5, 3.0, 17.0}) CHECK(Ne(t) == doctest::Approx(t).epsilon(1e-15));
  CHECK(N.convex());
}

TEST_CASE("N rejects a non log-concave table") {
  const Distribution d =
      Distribution::tabulated({0.0, 1.0, 2.0, 3.0}, {1.0, std::exp(-2.0), std::exp(-2.5), std::exp(-3.0)});
  CHECK_THROWS_AS(make_N(d), DomainError);
  const OrliczFunction n = make_N(d, false);
  CHECK_FALSE(n.convex());
}

TEST_CASE("N_{F,k}") {
  const Distribution g = Distribution::gaussian();
  CHECK(make_NFk(g, 2)(1.0) == doctest::Approx(oracle::gaussian_survival(1.0) / 4.0).epsilon(1e-10));
  CHECK(make_NFk(g, 2)(1.0) == doctest::Approx(0.0793276).epsilon(1e-6));
  CHECK(make_NFk(Distribution::sym_exponential(1.0), 3)(0.5) == doctest::Approx(std::exp(-2.0) / 8.0));
  CHECK(make_NFk(g, 2)(1e-3) == 0.0);
  CHECK(make_NFk(g, 2)(0.0) == 0.0);
  CHECK_FALSE(make_NFk(g, 2).convex());
  CHECK_THROWS_AS(make_NFk(g, 1), DomainError);

  // bounded by 1/(4(k-1)): with few entries the sum never reaches 1
  const NormResult small = orlicz_norm_result(Eigen::VectorXd::Ones(3), make_NFk(g, 2));
  CHECK(small.infimum_zero);
  CHECK(small.value == 0.0);
  CHECK_FALSE(small.is_norm);
  // with 8 unit entries: 8 F(ρ) / 4 = 1, so ρ = F^{-1}(1/2)
  const NormResult big = orlicz_norm_result(Eigen::VectorXd::Ones(8), make_NFk(g, 2));
  CHECK_FALSE(big.infimum_zero);
  CHECK(big.value == doctest::Approx(g.quantile(0.5)).epsilon(1e-10));
}

TEST_CASE("gaussian H") {
  CHECK(gaussian_H(0.5) == 0.5);
  CHECK(gaussian_H(1.0) == 1.0);
  CHECK(gaussian_H(3.0) == 9.0);
  CHECK(gaussian_H(0.0) == 0.0);
  CHECK_THROWS_AS(gaussian_H(-1.0), DomainError);
  const OrliczFunction h = OrliczFunction::gaussian_h();
  CHECK(h(2.0) == 4.0);
  CHECK(h.convex());
}

TEST_CASE("gaussian N is equivalent to H") {
  const OrliczFunction N = make_N(Distribution::gaussian());
  const double low = 1.0 / std::sqrt(2.0 * std::numbers::pi * kE);
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.01 + (10.0 - 0.01) * i / 999.0;
    CHECK(low * gaussian_H(t) <= N(t));
    CHECK(N(t) <= 4.5 * gaussian_H(t));
  }
}

TEST_CASE("Orlicz function invariants") {
  const Distribution g = Distribution::gaussian();
  const OrliczFunction fns[] = {make_M(g), make_N(g), OrliczFunction::gaussian_h(), OrliczFunction::power(3.0),
                                OrliczFunction::linear(), make_M(Distribution::sym_exponential(2.0))};
  for (const OrliczFunction& M : fns) {
    CAPTURE(M.describe());
    CHECK(M(0.0) == 0.0);
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double t = 0.05 * i;
      CHECK(M(t) >= prev);
      prev = M(t);
      for (int j = 1; j <= 200; j += 17) {
        const double u = 0.05 * j;
        CHECK(M(0.5 * (t + u)) <= 0.5 * (M(t) + M(u)) + 1e-9);
      }
      for (double s : {1.0, 1.5, 4.0}) CHECK(s * M(t) <= M(s * t) + 1e-9 * std::max(1.0, M(s * t)));
    }
  }
}

TEST_CASE("callable and domain bound") {
  const OrliczFunction f = OrliczFunction::from_callable([](double t) { return t * t; }, "sq", true, 2.0);
  CHECK(f(2.0) == 4.0);
  CHECK(f(2.0000001) == kInf);
  // ‖(1)‖: need 1/ρ <= 2 and (1/ρ)² <= 1, so ρ = 1
  CHECK(orlicz_norm(Eigen::VectorXd::Ones(1), f) == doctest::Approx(1.0).epsilon(1e-12));
  // (3, 0): the domain bound allows ρ >= 3/2 but (3/ρ)² <= 1 needs ρ >= 3
  Eigen::Vector2d x(3.0, 0.0);
  CHECK(orlicz_norm(x, f) == doctest::Approx(3.0).epsilon(1e-12));
  const OrliczFunction nowhere =
      OrliczFunction::from_callable([](double t) { return t > 0.0 ? kInf : 0.0; }, "inf", true);
  CHECK_THROWS_AS(orlicz_norm(Eigen::VectorXd::Ones(2), nowhere), UnboundedError);
}

TEST_CASE("norm solver recovers lp norms") {
  CHECK(orlicz_norm(Eigen::Vector3d(1, 2, 3), OrliczFunction::linear()) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(orlicz_norm(Eigen::Vector2d(3, 4), OrliczFunction::power(2.0)) == doctest::Approx(5.0).epsilon(1e-12));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd x = random_vector(rng, 1 + i % 30, -10.0, 10.0);
    CHECK(orlicz_norm(x, OrliczFunction::linear()) == doctest::Approx(x.lpNorm<1>()).epsilon(1e-10));
    CHECK(orlicz_norm(x, OrliczFunction::power(2.0)) == doctest::Approx(x.norm()).epsilon(1e-10));
    CHECK(orlicz_norm(x, OrliczFunction::power(3.0)) ==
          doctest::Approx(std::cbrt(x.cwiseAbs().array().cube().sum())).epsilon(1e-10));
  }
  CHECK_THROWS_AS(orlicz_norm(Eigen::VectorXd::Zero(3), OrliczFunction::linear()), DomainError);
}

TEST_CASE("gaussian M norm of a singleton") {
  const NormResult r = orlicz_norm_result(Eigen::VectorXd::Ones(1), make_M(Distribution::gaussian()));
  CHECK(r.value == doctest::Approx(1.0 / 2.291861379).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(0.436326).epsilon(1e-6));
  CHECK(std::abs(r.residual) <= 1e-9);
  CHECK(r.is_norm);
}

TEST_CASE("norm solver against the oracle") {
  const OrliczFunction M = make_M(Distribution::gaussian());
  const OrliczFunction N = make_N(Distribution::gaussian());
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd x = random_vector(rng, 1 + 7 * i);
    CHECK(orlicz_norm(x, M) ==
          doctest::Approx(oracle::orlicz_norm(x, oracle::gaussian_M, 1e-3, 1e4)).epsilon(1e-9));
    auto n_oracle = [](double t) { return -std::log(oracle::gaussian_survival(t)); };
    CHECK(orlicz_norm(x, N) == doctest::Approx(oracle::orlicz_norm(x, n_oracle, 1e-3, 1e4)).epsilon(1e-8));
  }
}

TEST_CASE("norm properties") {
  const Distribution g = Distribution::gaussian();
  const OrliczFunction M = make_M(g);
  const OrliczFunction N = make_N(g);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = random_vector(rng, 5 + i);
    const Eigen::VectorXd y = random_vector(rng, 5 + i);
    for (const OrliczFunction& F : {M, N, OrliczFunction::gaussian_h()}) {
      const double nx = orlicz_norm(x, F);
      for (double lambda : {0.1, 3.0, 100.0}) {
        CHECK(orlicz_norm(Eigen::VectorXd(lambda * x), F) == doctest::Approx(lambda * nx).epsilon(1e-8));
      }
      CHECK(orlicz_norm(Eigen::VectorXd(x + y), F) <= nx + orlicz_norm(y, F) + 1e-9);
    }
    // H/sqrt(2 pi e) <= N pointwise, so the norms are ordered
    const OrliczFunction low = scale(OrliczFunction::gaussian_h(), 1.0 / std::sqrt(2.0 * std::numbers::pi * kE));
    CHECK(orlicz_norm(x, low) <= orlicz_norm(x, N) + 1e-9);
    CHECK(orlicz_norm(x, N) <= orlicz_norm(x, scale(OrliczFunction::gaussian_h(), 4.5)) + 1e-9);
    // ‖x‖_{sN} <= s ‖x‖_N for s >= 1
    CHECK(orlicz_norm(x, scale(N, 2.0 * kE)) <= 2.0 * kE * orlicz_norm(x, N) + 1e-9);
  }
}

TEST_CASE("scale") {
  const OrliczFunction N = make_N(Distribution::gaussian());
  const OrliczFunction same = scale(N, 1.0);
  for (int i = 0; i <= 50; ++i) CHECK(same(0.1 * i) == N(0.1 * i));
  const OrliczFunction twice = scale(scale(N, 2.0), 3.0);
  CHECK(twice.factor() == doctest::Approx(6.0));
  CHECK(twice(1.3) == doctest::Approx(6.0 * N(1.3)));
  CHECK(twice.is_scaled());
  CHECK_THROWS_AS(scale(N, 0.0), DomainError);
  // 4 H(1/ρ) / 4 = 1 at ρ = 1
  const double h4 = orlicz_norm(Eigen::VectorXd::Ones(4), scale(OrliczFunction::gaussian_h(), 0.25));
  CHECK(h4 == doctest::Approx(oracle::orlicz_norm(Eigen::VectorXd::Ones(4),
                                                  [](double t) { return 0.25 * (t < 1 ? t : t * t); }, 1e-3,
                                                  1e3))
                  .epsilon(1e-10));
  CHECK(h4 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dual of power and linear functions") {
  const OrliczFunction sq = OrliczFunction::power(2.0);
  for (double s : {0.0, 0.5, 1.0, 3.0}) CHECK(dual(sq, s) == doctest::Approx(s * s / 4.0).epsilon(1e-8));
  const OrliczFunction lin = OrliczFunction::linear();
  CHECK(dual(lin, 0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(dual(lin, 1.5) == kInf);
  CHECK_THROWS_AS(dual(sq, 1.0, DualMethod::tail_inversion), DomainError);
}

TEST_CASE("gaussian dual") {
  const Distribution g = Distribution::gaussian();
  const OrliczFunction M = make_M(g);
  const double mean = std::sqrt(2.0 / std::numbers::pi);
  for (DualMethod m : {DualMethod::numeric, DualMethod::tail_inversion, DualMethod::automatic}) {
    CHECK(dual(M, mean, m) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(dual(M, g.tail_integral(1.0), m) == doctest::Approx(0.317311).epsilon(1e-6));
    CHECK(dual(M, 0.9, m) == kInf);
    CHECK(dual(M, mean * (1.0 + 1e-6), m) == kInf);
    CHECK(dual(M, 0.0, m) == 0.0);
  }
  // the dual integral: M*(s) = ∫_0^s du / sqrt(2 ln(√(2/π)/u)), substituted
  // u = √(2/π) e^{-y²/2}, which gives ∫_{y0}^∞ √(2/π) e^{-y²/2} dy
  // M(s) = s √(2/π) e^{-1/(2s²)} - erfc(1/(s√2)), integrating the double integral by parts
  auto m_closed = [mean](double s) {
    return s <= 0.0 ? 0.0 : s * mean * std::exp(-0.5 / (s * s)) - std::erfc(1.0 / (s * std::sqrt(2.0)));
  };
  for (double s : {0.5, 1.5, 4.0}) CHECK(m_closed(s) == doctest::Approx(oracle::gaussian_M(s)).epsilon(1e-10));
  for (double s : {0.05, 0.2, 0.5, 0.7, 0.79}) {
    const double y0 = std::sqrt(2.0 * std::log(mean / s));
    const double closed = oracle::simpson_panels(oracle::gaussian_density_abs, y0, y0 + 40.0, 40);
    CHECK(dual(M, s, DualMethod::numeric) == doctest::Approx(closed).epsilon(1e-7));
    CHECK(dual(M, s, DualMethod::numeric) == doctest::Approx(oracle::dual_grid(m_closed, s, 1e4)).epsilon(1e-6));
  }
}

TEST_CASE("exponential dual") {
  const Distribution e = Distribution::sym_exponential(1.0);
  const OrliczFunction M = make_M(e);
  for (int i = 0; i <= 16; ++i) {
    const double t = 0.25 * i;
    CHECK(dual(M, e.tail_integral(t), DualMethod::numeric) == doctest::Approx(e.survival(t)).epsilon(1e-6));
    CHECK(dual(M, e.tail_integral(t), DualMethod::tail_inversion) ==
          doctest::Approx(e.survival(t)).epsilon(1e-9));
  }
  CHECK(dual(M, 1.0 + 1e-6) == kInf);
}

TEST_CASE("constants") {
  const BoundConstants c = BoundConstants::defaults();
  CHECK(c.c1 > 0.6);
  CHECK(c.c1 < 0.61);
  CHECK(c.c0 > 0.13);
  CHECK(c.c0 < 0.15);
  CHECK(c.c0 == doctest::Approx(0.1385644).epsilon(1e-6));
  CHECK(c.upper_kmin == doctest::Approx(16.0 * kE * kE));
  CHECK(BoundConstants::c_n_for(Distribution::gaussian()) == doctest::Approx(1.147874464).epsilon(1e-9));
  CHECK(BoundConstants::c_n_for(Distribution::sym_exponential(2.0)) == doctest::Approx(2.0));
  CHECK(BoundConstants::c_n_for(Distribution::sym_exponential(0.5)) == doctest::Approx(2.0));
}
