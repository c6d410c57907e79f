#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ordstat/errors.hpp"

namespace ordstat {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Elementary symmetric polynomials e_0..e_n of a, accumulated in `Acc`
/// through the product recurrence e_l <- e_l + a_i e_{l-1}.
template <typename Acc = long double, typename Derived>
VectorX<Acc> elementary_symmetric(const Eigen::MatrixBase<Derived>& a) {
  const Eigen::Index n = a.size();
  VectorX<Acc> e = VectorX<Acc>::Zero(n + 1);
  e[0] = Acc(1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Acc ai = static_cast<Acc>(a[i]);
    for (Eigen::Index l = i + 1; l >= 1; --l) e[l] += ai * e[l - 1];
  }
  return e;
}

/// Same quantities by summing over all 2^n subsets. Cross-check only.
template <typename Acc = long double, typename Derived>
VectorX<Acc> elementary_symmetric_enumerated(const Eigen::MatrixBase<Derived>& a) {
  const Eigen::Index n = a.size();
  if (n > 24) throw DomainError("elementary_symmetric_enumerated: n too large to enumerate");
  VectorX<Acc> e = VectorX<Acc>::Zero(n + 1);
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    Acc prod(1);
    int size = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        prod *= static_cast<Acc>(a[i]);
        ++size;
      }
    }
    e[size] += prod;
  }
  return e;
}

}  // namespace ordstat
