#pragma once

// Shared helpers for the test suites: small random instance builders and
// independent brute-force reference computations (kept deliberately separate
// from the library code paths they check).

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "detmax/rng.hpp"
#include "detmax/types.hpp"

namespace testsupport {

inline Eigen::MatrixXd random_matrix(int rows, int cols, detmax::SplitMix64& rng,
                                     double lo = -1.0, double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = rng.uniform(lo, hi);
  return m;
}

inline Eigen::MatrixXd random_psd(int n, detmax::SplitMix64& rng, int inner_dim = 0) {
  if (inner_dim <= 0) inner_dim = n;
  Eigen::MatrixXd b = random_matrix(inner_dim, n, rng);
  Eigen::MatrixXd m = b.transpose() * b;
  return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd random_symmetric(int n, detmax::SplitMix64& rng) {
  Eigen::MatrixXd m = random_matrix(n, n, rng);
  return 0.5 * (m + m.transpose());
}

/// Probability vector with entries bounded away from zero.
inline Eigen::VectorXd random_distribution(int n, detmax::SplitMix64& rng) {
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p(i) = rng.uniform(0.1, 1.0);
  return p / p.sum();
}

/// Visits every size-k subset of {0,...,n-1}; independent of the library's
/// enumeration order (recursive descent instead of lexicographic iteration).
inline void for_subsets(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset;
  std::function<void(int)> descend = [&](int next) {
    if (static_cast<int>(subset.size()) == k) {
      fn(subset);
      return;
    }
    if (n - next < k - static_cast<int>(subset.size())) return;
    for (int i = next; i < n; ++i) {
      subset.push_back(i);
      descend(i + 1);
      subset.pop_back();
    }
  };
  descend(0);
}

/// Visits every ordered tuple in {0,...,n-1}^k.
inline void for_tuples(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> tuple(k, 0);
  while (true) {
    fn(tuple);
    int pos = k - 1;
    while (pos >= 0 && tuple[pos] == n - 1) tuple[pos--] = 0;
    if (pos < 0) break;
    ++tuple[pos];
  }
}

/// Reference determinant of a principal submatrix via dense LU.
inline double submatrix_det(const Eigen::MatrixXd& m, const std::vector<int>& s) {
  const int k = static_cast<int>(s.size());
  Eigen::MatrixXd sub(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) sub(a, b) = m(s[a], s[b]);
  return sub.determinant();
}

/// Reference elementary symmetric polynomial by direct subset enumeration.
inline double esym_by_enumeration(const Eigen::VectorXd& x, int k) {
  double total = k == 0 ? 1.0 : 0.0;
  if (k > 0) {
    for_subsets(static_cast<int>(x.size()), k, [&](const std::vector<int>& s) {
      double prod = 1.0;
      for (int i : s) prod *= x(i);
      total += prod;
    });
  }
  return total;
}

} // namespace testsupport
