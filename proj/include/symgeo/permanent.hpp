#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Core>

namespace symgeo {

/// Permanent of a square matrix by Ryser's inclusion-exclusion formula,
/// visiting column subsets in Gray-code order so each step updates the row
/// sums by a single column. O(2^n n); intended for n <= 20.
template <typename Derived>
typename Derived::Scalar permanent(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::domain_error("permanent: matrix is not square");
  if (n == 0) return Scalar(1);
  if (n > 30) throw std::domain_error("permanent: matrix too large for Ryser's formula");

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_sums = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  Scalar total(0);
  std::uint64_t gray = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    const int j = std::countr_zero(k);
    gray ^= std::uint64_t{1} << j;
    if (gray & (std::uint64_t{1} << j)) {
      row_sums += a.col(j);
    } else {
      row_sums -= a.col(j);
    }
    Scalar prod = row_sums.prod();
    // Sign (-1)^{n - |S|}.
    if ((n - std::popcount(gray)) & 1) prod = -prod;
    total += prod;
  }
  return total;
}

}  // namespace symgeo
