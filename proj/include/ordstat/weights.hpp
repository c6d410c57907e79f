#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>

namespace ordstat {

enum class Order { ascending, descending };

/// Strictly positive scalars with a declared (non-strict) sort order.
class Weights {
 public:
  /// Validates positivity and order; the error names the first offending
  /// (1-based) index.
  Weights(Eigen::VectorXd values, Order order);

  /// Sorts a copy of `values` into `order` (positivity still validated).
  static Weights sorted(Eigen::VectorXd values, Order order);

  /// One positive decimal per line; blank lines skipped.
  static Eigen::VectorXd read_csv(std::istream& in);
  static Eigen::VectorXd read_csv(const std::filesystem::path& path);

  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  Order order() const noexcept { return order_; }
  double operator[](Eigen::Index i) const { return values_[i]; }

  /// Same entries in the opposite order.
  Weights reversed() const;

 private:
  Eigen::VectorXd values_;
  Order order_;
};

const char* to_string(Order order);

}  // namespace ordstat
