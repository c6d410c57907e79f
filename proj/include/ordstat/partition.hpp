#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ordstat/orlicz.hpp"
#include "ordstat/weights.hpp"

namespace ordstat {

/// Closed index range [first, last], 1-based.
struct Interval {
  Eigen::Index first = 1;
  Eigen::Index last = 1;
  Eigen::Index size() const { return last - first + 1; }
  bool operator==(const Interval&) const = default;
};

enum class PartitionCase { case1, case2, case3 };

const char* to_string(PartitionCase c);

/// Both sides of
///   min_j ‖(1/x_i)_{i=j}^n‖_{H/(k-j+1)} <= 4 max{H(1), 1/H(1)} min_j ‖(1/x_i)_{i∈A_j}‖_H.
struct PartitionCertificate {
  double lhs = 0.0;
  double rhs = 0.0;
  double factor = 0.0;  // 4 max{H(1), 1/H(1)}
  bool holds = false;   // lhs <= rhs (1 + 1e-8)
};

struct PartitionResult {
  std::vector<Interval> blocks;  // exactly k consecutive intervals covering 1..n
  PartitionCase case_taken = PartitionCase::case1;
  PartitionCertificate certificate;

  /// Greedy stage (cases 1 and 3): first index it ran on, the blocks B_1..B_L
  /// it produced before the trailing ones were merged, and the threshold
  /// ½ ‖(1/x_i)_{i>=start}‖_{H'/k'} each block norm was held to, where H' is
  /// H normalized to H'(1) = 1 and k' the number of blocks left to produce.
  Eigen::Index greedy_start = 0;
  std::vector<Interval> greedy_blocks;
  double greedy_threshold = 0.0;
};

/// Splits {1..n} into exactly k nonempty consecutive intervals certifying the
/// inequality above. x ascending, 1 <= k <= n, H convex with 0 < H(1) < ∞.
/// Throws NumericError if the constructed partition fails its certificate.
PartitionResult build_partition(const Weights& x, const OrliczFunction& H, int k);

/// Recomputes both sides for an arbitrary partition. Throws DomainError when
/// `blocks` is not k nonempty consecutive intervals covering 1..n.
PartitionCertificate verify_partition(const Weights& x, const OrliczFunction& H, int k,
                                      const std::vector<Interval>& blocks);

}  // namespace ordstat
