#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ordstat/errors.hpp"
#include "ordstat/partition.hpp"

using namespace ordstat;

namespace {

Weights log_uniform_weights(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(std::log(0.01), std::log(100.0));
  Eigen::VectorXd v(n);
  for (double& e : v) e = std::exp(u(rng));
  return Weights::sorted(v, Order::ascending);
}

std::vector<Interval> to_blocks(const std::vector<int>& ends) {
  std::vector<Interval> b;
  int first = 1;
  for (int e : ends) {
    b.push_back({first, e});
    first = e + 1;
  }
  return b;
}

// both sides of the certificate with the oracle norm and a plain callable H
struct Sides {
  double lhs;
  double block_min;
};

Sides oracle_sides(const Weights& x, const std::function<double(double)>& H, int k,
                   const std::vector<Interval>& blocks) {
  const Eigen::Index n = x.size();
  const Eigen::VectorXd inv = x.values().cwiseInverse();
  Sides s{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (int j = 1; j <= k; ++j) {
    const double c = 1.0 / (k - j + 1);
    s.lhs = std::min(s.lhs, oracle::orlicz_norm(inv.segment(j - 1, n - j + 1),
                                                [&](double t) { return c * H(t); }, 1e-6, 1e6));
  }
  for (const Interval& b : blocks) {
    s.block_min = std::min(s.block_min, oracle::orlicz_norm(inv.segment(b.first - 1, b.size()), H, 1e-6, 1e6));
  }
  return s;
}

void check_shape(const PartitionResult& r, Eigen::Index n, int k) {
  REQUIRE(r.blocks.size() == static_cast<std::size_t>(k));
  Eigen::Index next = 1;
  for (const Interval& b : r.blocks) {
    CHECK(b.first == next);
    CHECK(b.last >= b.first);
    next = b.last + 1;
  }
  CHECK(next == n + 1);
}

}  // namespace

TEST_CASE("forced partitions") {
  const Weights x = Weights::sorted(Eigen::VectorXd::LinSpaced(7, 1.0, 3.0), Order::ascending);
  const OrliczFunction H = OrliczFunction::power(2.0);
  const PartitionResult all = build_partition(x, H, 7);
  for (int j = 0; j < 7; ++j) CHECK(all.blocks[static_cast<std::size_t>(j)] == Interval{j + 1, j + 1});
  CHECK(all.certificate.holds);
  const PartitionResult one = build_partition(x, H, 1);
  REQUIRE(one.blocks.size() == 1);
  CHECK(one.blocks[0] == Interval{1, 7});
  CHECK(one.certificate.holds);
  CHECK(one.certificate.lhs == doctest::Approx(one.certificate.rhs / 4.0));
}

TEST_CASE("linear H on equal weights") {
  const Weights x(Eigen::VectorXd::Ones(6), Order::ascending);
  const OrliczFunction H = OrliczFunction::linear();
  const PartitionResult r = build_partition(x, H, 3);
  check_shape(r, 6, 3);
  // 1/x_3 = ‖(1,1,1,1)‖_H / 4 triggers the third case at m = 3
  CHECK(r.case_taken == PartitionCase::case3);
  CHECK(r.blocks[0] == Interval{1, 1});
  CHECK(r.blocks[1] == Interval{2, 2});
  CHECK(r.blocks[2] == Interval{3, 6});
  CHECK(r.certificate.lhs == doctest::Approx(2.0));
  CHECK(r.certificate.rhs == doctest::Approx(4.0));
  CHECK(r.certificate.holds);

  // every interval partition into three blocks, sides from the oracle
  const auto all = oracle::interval_partitions(6, 3);
  CHECK(all.size() == 10);
  auto lin = [](double t) { return t; };
  for (const auto& ends : all) {
    const std::vector<Interval> blocks = to_blocks(ends);
    const Sides s = oracle_sides(x, lin, 3, blocks);
    const PartitionCertificate c = verify_partition(x, H, 3, blocks);
    CHECK(c.lhs == doctest::Approx(s.lhs).epsilon(1e-10));
    CHECK(c.rhs == doctest::Approx(4.0 * s.block_min).epsilon(1e-10));
  }
  const Sides mine = oracle_sides(x, lin, 3, r.blocks);
  CHECK(mine.lhs <= 4.0 * mine.block_min * (1.0 + 1e-8));
}

TEST_CASE("constructed partitions against brute force") {
  std::mt19937_64 rng(21);
  const OrliczFunction hs[] = {OrliczFunction::linear(), OrliczFunction::power(2.0), OrliczFunction::gaussian_h()};
  const std::function<double(double)> raw[] = {[](double t) { return t; }, [](double t) { return t * t; },
                                               [](double t) { return t < 1 ? t : t * t; }};
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    const int k = 1 + trial % n;
    const int h = trial % 3;
    const Weights x = log_uniform_weights(rng, n);
    const PartitionResult r = build_partition(x, hs[h], k);
    check_shape(r, n, k);
    const Sides mine = oracle_sides(x, raw[h], k, r.blocks);
    CHECK(mine.lhs <= 4.0 * mine.block_min * (1.0 + 1e-8));
    // no interval partition has a larger smallest block than the best one,
    // and the best one certifies the inequality too
    double best = 0.0;
    for (const auto& ends : oracle::interval_partitions(n, k)) {
      best = std::max(best, oracle_sides(x, raw[h], k, to_blocks(ends)).block_min);
    }
    CHECK(mine.block_min <= best * (1.0 + 1e-12));
    CHECK(mine.lhs <= 4.0 * best * (1.0 + 1e-8));
  }
}

TEST_CASE("random instances hit every case") {
  std::mt19937_64 rng(22);
  const OrliczFunction hs[] = {OrliczFunction::linear(), OrliczFunction::power(2.0),
                               make_N(Distribution::gaussian())};
  int seen[3] = {0, 0, 0};
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> nn(1, 120);
    const int n = nn(rng);
    const int k = std::uniform_int_distribution<int>(1, n)(rng);
    const Weights x = log_uniform_weights(rng, n);
    const PartitionResult r = build_partition(x, hs[trial % 3], k);
    check_shape(r, n, k);
    CHECK(r.certificate.holds);
    ++seen[static_cast<int>(r.case_taken)];
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
}

TEST_CASE("greedy blocks are maximal") {
  std::mt19937_64 rng(23);
  const OrliczFunction H = OrliczFunction::power(2.0);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 20 + trial;
    const int k = 1 + trial % 5;
    Eigen::VectorXd v(n);
    for (double& e : v) e = std::uniform_real_distribution<double>(1.0, 2.0)(rng);
    const Weights x = Weights::sorted(v, Order::ascending);
    const PartitionResult r = build_partition(x, H, k);
    if (r.case_taken == PartitionCase::case2) continue;
    const Eigen::VectorXd inv = x.values().cwiseInverse();
    for (std::size_t l = 0; l + 1 < r.greedy_blocks.size(); ++l) {
      const Interval b = r.greedy_blocks[l];
      CHECK(orlicz_norm(inv.segment(b.first - 1, b.size()), H) <= r.greedy_threshold * (1.0 + 1e-12));
      CHECK(orlicz_norm(inv.segment(b.first - 1, b.size() + 1), H) > r.greedy_threshold);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("normalizing H does not change the blocks") {
  std::mt19937_64 rng(24);
  const OrliczFunction H = scale(OrliczFunction::power(2.0), 3.0);
  const OrliczFunction unit = OrliczFunction::power(2.0);
  const OrliczFunction small = scale(OrliczFunction::linear(), 0.2);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial;
    const int k = 1 + trial % n;
    const Weights x = log_uniform_weights(rng, n);
    CHECK(build_partition(x, H, k).blocks == build_partition(x, unit, k).blocks);
    CHECK(build_partition(x, small, k).blocks == build_partition(x, OrliczFunction::linear(), k).blocks);
    CHECK(build_partition(x, H, k).blocks == build_partition(x, H, k).blocks);
  }
  const Weights x = log_uniform_weights(rng, 10);
  CHECK(build_partition(x, H, 3).certificate.factor == doctest::Approx(12.0));
  CHECK(build_partition(x, small, 3).certificate.factor == doctest::Approx(20.0));
}

TEST_CASE("the checker can fail") {
  const Weights x = Weights::sorted(Eigen::VectorXd::LinSpaced(10, 1.0, 10.0), Order::ascending);
  const PartitionCertificate c = verify_partition(x, OrliczFunction::linear(), 2, {{1, 9}, {10, 10}});
  CHECK_FALSE(c.holds);
  CHECK(c.rhs == doctest::Approx(0.4));
  CHECK(c.lhs > c.rhs);
  CHECK(verify_partition(x, OrliczFunction::linear(), 1, {{1, 10}}).holds);
}

TEST_CASE("partition errors") {
  const Weights x(Eigen::VectorXd::Ones(4), Order::ascending);
  const OrliczFunction H = OrliczFunction::linear();
  CHECK_THROWS_AS(build_partition(x, H, 5), RangeError);
  CHECK_THROWS_AS(build_partition(x, H, 0), RangeError);
  CHECK_THROWS_AS(build_partition(Weights(Eigen::VectorXd::Ones(4), Order::descending), H, 2), DomainError);
  const OrliczFunction flat =
      OrliczFunction::from_callable([](double t) { return std::max(t - 1.0, 0.0); }, "shifted", true);
  CHECK_THROWS_AS(build_partition(x, flat, 2), DomainError);
  CHECK_THROWS_AS(verify_partition(x, H, 2, {{1, 2}}), DomainError);
  CHECK_THROWS_AS(verify_partition(x, H, 2, {{1, 2}, {4, 4}}), DomainError);
  CHECK_THROWS_AS(verify_partition(x, H, 2, {{1, 3}, {4, 3}}), DomainError);
  CHECK_THROWS_AS(verify_partition(x, H, 2, {{1, 2}, {3, 5}}), DomainError);
}
