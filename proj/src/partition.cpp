#include "ordstat/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ordstat/errors.hpp"

namespace ordstat {
namespace {

constexpr double kGuard = 1.0 + 1e-12;

class BlockNorms {
 public:
  BlockNorms(const Weights& x) : inv_(x.values().cwiseInverse()) {}

  Eigen::Index size() const { return inv_.size(); }
  double value(Eigen::Index i) const { return inv_[i]; }

  // ‖(1/x_i)_{i=first}^{last}‖_G, 0-based inclusive
  double norm(Eigen::Index first, Eigen::Index last, const OrliczFunction& G) const {
    return orlicz_norm(inv_.segment(first, last - first + 1), G);
  }

 private:
  Eigen::VectorXd inv_;
};

void check_k(const Weights& x, int k, const char* who) {
  if (x.order() != Order::ascending) {
    throw DomainError(std::string(who) + ": weights must be ascending");
  }
  if (k < 1 || k > x.size()) {
    std::ostringstream msg;
    msg << who << ": precondition 1 <= k <= n fails (k = " << k << ", n = " << x.size() << ")";
    throw RangeError(msg.str());
  }
}

double h_at_one(const OrliczFunction& H) {
  const double h1 = H(1.0);
  if (!(h1 > 0.0) || !std::isfinite(h1)) {
    throw DomainError("partition: H(1) must lie in (0, inf), got " + std::to_string(h1));
  }
  return h1;
}

}  // namespace

const char* to_string(PartitionCase c) {
  switch (c) {
    case PartitionCase::case1:
      return "case1";
    case PartitionCase::case2:
      return "case2";
    case PartitionCase::case3:
      return "case3";
  }
  return "?";
}

PartitionCertificate verify_partition(const Weights& x, const OrliczFunction& H, int k,
                                      const std::vector<Interval>& blocks) {
  check_k(x, k, "verify_partition");
  const Eigen::Index n = x.size();
  if (blocks.size() != static_cast<std::size_t>(k)) {
    throw DomainError("verify_partition: malformed partition (need exactly k blocks)");
  }
  Eigen::Index expect = 1;
  for (const Interval& b : blocks) {
    if (b.first != expect || b.last < b.first || b.last > n) {
      throw DomainError("verify_partition: malformed partition (blocks must be nonempty, "
                        "consecutive and cover 1..n)");
    }
    expect = b.last + 1;
  }
  if (expect != n + 1) throw DomainError("verify_partition: malformed partition (does not cover 1..n)");

  const double h1 = h_at_one(H);
  const BlockNorms norms(x);

  PartitionCertificate c;
  c.factor = 4.0 * std::max(h1, 1.0 / h1);
  c.lhs = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= k; ++j) {
    c.lhs = std::min(c.lhs, norms.norm(j - 1, n - 1, scale(H, 1.0 / (k - j + 1))));
  }
  double block_min = std::numeric_limits<double>::infinity();
  for (const Interval& b : blocks) {
    block_min = std::min(block_min, norms.norm(b.first - 1, b.last - 1, H));
  }
  c.rhs = c.factor * block_min;
  c.holds = c.lhs <= c.rhs * (1.0 + 1e-8);
  return c;
}

PartitionResult build_partition(const Weights& x, const OrliczFunction& H, int k) {
  check_k(x, k, "build_partition");
  const Eigen::Index n = x.size();
  const OrliczFunction unit = scale(H, 1.0 / h_at_one(H));
  const BlockNorms norms(x);

  // ‖(1/x_i)_{i=first}^n‖_{unit / blocks}, 0-based first
  auto suffix_norm = [&](Eigen::Index first, int blocks) {
    return norms.norm(first, n - 1, scale(unit, 1.0 / blocks));
  };

  PartitionResult r;

  // Greedy cover of [start, n) into maximal blocks of unit-norm <= threshold,
  // the first blocks-1 kept and the rest merged into the last.
  auto greedy = [&](Eigen::Index start, int blocks) {
    const double threshold = 0.5 * suffix_norm(start, blocks);
    r.greedy_start = start + 1;
    r.greedy_threshold = threshold;
    auto fits = [&](Eigen::Index a, Eigen::Index e) {
      return norms.norm(a, e, unit) <= threshold * kGuard;
    };
    Eigen::Index a = start;
    while (a < n) {
      // largest e >= a with fits(a, e); fits is monotone in e
      Eigen::Index good = a;
      Eigen::Index step = 1;
      Eigen::Index bad = n;
      while (a + step < n) {
        if (fits(a, a + step)) {
          good = a + step;
          step *= 2;
        } else {
          bad = a + step;
          break;
        }
      }
      while (bad - good > 1) {
        const Eigen::Index mid = good + (bad - good) / 2;
        if (fits(a, mid)) {
          good = mid;
        } else {
          bad = mid;
        }
      }
      r.greedy_blocks.push_back({a + 1, good + 1});
      a = good + 1;
    }
    const auto L = static_cast<int>(r.greedy_blocks.size());
    if (L < blocks) {
      std::ostringstream msg;
      msg << "build_partition: greedy stage produced " << L << " blocks, fewer than the " << blocks
          << " required";
      throw NumericError(msg.str());
    }
    for (int l = 0; l < blocks - 1; ++l) r.blocks.push_back(r.greedy_blocks[l]);
    r.blocks.push_back({r.greedy_blocks[blocks - 1].first, n});
  };

  const double quarter_first = 0.25 * suffix_norm(0, k);
  if (norms.value(0) <= quarter_first * kGuard) {
    r.case_taken = PartitionCase::case1;
    greedy(0, k);
  } else {
    Eigen::Index m = 0;  // 1-based, 0 = none
    for (Eigen::Index j = 2; j <= k; ++j) {
      const int left = static_cast<int>(k + 1 - j);
      if (norms.value(j - 1) <= 0.25 * suffix_norm(j - 1, left) * kGuard) {
        m = j;
        break;
      }
    }
    if (m == 0) {
      r.case_taken = PartitionCase::case2;
      for (Eigen::Index j = 1; j < k; ++j) r.blocks.push_back({j, j});
      r.blocks.push_back({k, n});
    } else {
      r.case_taken = PartitionCase::case3;
      for (Eigen::Index j = 1; j < m; ++j) r.blocks.push_back({j, j});
      greedy(m - 1, static_cast<int>(k + 1 - m));
    }
  }

  r.certificate = verify_partition(x, H, k, r.blocks);
  if (!r.certificate.holds) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "build_partition: certificate fails (" << to_string(r.case_taken) << "): lhs "
        << r.certificate.lhs << " > rhs " << r.certificate.rhs;
    throw NumericError(msg.str());
  }
  return r;
}

}  // namespace ordstat
