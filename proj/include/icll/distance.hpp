#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace icll {

/// Condensed pairwise distance matrix: the strict upper triangle of an n x n
/// symmetric matrix stored row-major in a flat vector of n(n-1)/2 entries.
struct DistanceMatrix {
  Eigen::Index n = 0;
  Eigen::VectorXd values;

  static Eigen::Index condensed_index(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    // requires i < j
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }

  double operator()(Eigen::Index i, Eigen::Index j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return values(condensed_index(n, i, j));
  }
};

/// Euclidean distances between all row pairs of x. Entries are accumulated in
/// fixed coordinate order, so the result does not depend on evaluation
/// scheduling.
template <typename Derived>
DistanceMatrix pairwise_euclidean(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index n = x.rows();
  if (n < 2) throw std::invalid_argument("pairwise_euclidean needs at least 2 rows");
  if (!x.allFinite()) throw std::invalid_argument("pairwise_euclidean: non-finite input");

  DistanceMatrix d;
  d.n = n;
  d.values.resize(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      d.values(k++) = std::sqrt((x.row(i) - x.row(j)).squaredNorm());
  return d;
}

}  // namespace icll
