#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "detmax/errors.hpp"
#include "detmax/log_value.hpp"
#include "detmax/types.hpp"

namespace detmax {

namespace detail {

struct PivotedCholesky {
  Eigen::MatrixXd factor;  // n x rank, rows in permuted order
  std::vector<int> perm;   // perm[i] = original index at permuted position i
  int rank = 0;
  double min_remaining_diag = 0.0; // most negative leftover diagonal entry
};

/// Diagonal-pivoted Cholesky of a symmetric matrix, stopping once every
/// remaining pivot is at or below tol_abs.
inline PivotedCholesky pivoted_cholesky(Eigen::MatrixXd a, double tol_abs) {
  const int n = static_cast<int>(a.rows());
  PivotedCholesky out;
  out.perm.resize(n);
  std::iota(out.perm.begin(), out.perm.end(), 0);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);

  int k = 0;
  for (; k < n; ++k) {
    int pivot = k;
    for (int i = k + 1; i < n; ++i)
      if (a(i, i) > a(pivot, pivot)) pivot = i;
    if (a(pivot, pivot) <= tol_abs) break;
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      a.col(k).swap(a.col(pivot));
      l.row(k).swap(l.row(pivot));
      std::swap(out.perm[k], out.perm[pivot]);
    }
    const double d = std::sqrt(a(k, k));
    l(k, k) = d;
    for (int i = k + 1; i < n; ++i) l(i, k) = a(i, k) / d;
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j <= i; ++j) {
        a(i, j) -= l(i, k) * l(j, k);
        a(j, i) = a(i, j);
      }
  }
  out.rank = k;
  double min_diag = 0.0;
  for (int i = k; i < n; ++i) min_diag = std::min(min_diag, a(i, i));
  out.min_remaining_diag = min_diag;
  out.factor = l.leftCols(k);
  return out;
}

inline bool has_repeats(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  return std::adjacent_find(indices.begin(), indices.end()) != indices.end();
}

} // namespace detail

/// Rank-revealing factorization M = V^T V of a PSD matrix. The returned point
/// set has ambient_dim equal to the numerical rank of M; pivots at or below
/// psd_tol * (1 + max|M|) are dropped.
inline PointSet cholesky_psd(const SymmetricMatrix& m, double psd_tol = kDefaultZeroTol) {
  if (psd_tol < 0.0) throw InvalidInput("psd_tol must be nonnegative");
  const int n = m.order();
  const double tol_abs = psd_tol * (1.0 + m.max_abs());
  auto pc = detail::pivoted_cholesky(m.matrix(), tol_abs);
  if (pc.min_remaining_diag < -tol_abs)
    throw NotPsd("matrix has a pivot below -psd_tol * (1 + max|M|)");
  const int r = std::max(pc.rank, 1); // keep a valid (zero) point set for M = 0
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(r, n);
  for (int i = 0; i < n; ++i)
    v.col(pc.perm[i]).head(pc.rank) = pc.factor.row(i).transpose();
  return PointSet(std::move(v));
}

/// Spectral decomposition of a symmetric matrix with eigenvalues sorted
/// nonincreasing and an orthonormal basis in matching column order.
inline EigenSym eigen_sym(const SymmetricMatrix& a, double zero_tol = kDefaultZeroTol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("symmetric eigensolver did not converge");
  const int n = a.order();
  Eigen::VectorXd values(n);
  Eigen::MatrixXd basis(n, n);
  for (int i = 0; i < n; ++i) {
    values(i) = solver.eigenvalues()(n - 1 - i);
    basis.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return EigenSym{Spectrum(std::move(values), zero_tol), std::move(basis)};
}

namespace detail {

/// e_k over explicitly given nonnegative values, computed by the degree-k
/// prefix recurrence on values scaled by their maximum. Returns the scaled
/// sum and the log of the scale correction.
inline std::pair<double, double> esym_scaled(const Eigen::VectorXd& values, int k) {
  const int n = static_cast<int>(values.size());
  if (k == 0) return {1.0, 0.0};
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, values(i));
  if (m == 0.0) return {0.0, 0.0};
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const double x = values(i) / m;
    for (int t = std::min(i + 1, k); t >= 1; --t) e[t] += x * e[t - 1];
  }
  return {e[static_cast<std::size_t>(k)], k * std::log(m)};
}

} // namespace detail

/// Elementary symmetric polynomial e_k of the clamped spectrum; e_0 = 1.
inline double elementary_symmetric(const Spectrum& s, int k) {
  if (k < 0 || k > s.size())
    throw OutOfRange("elementary symmetric degree outside [0, n]");
  auto [scaled, log_scale] = detail::esym_scaled(s.clamped(), k);
  return scaled * std::exp(log_scale);
}

/// Same quantity in the log domain (exact zero maps to LogValue::zero()).
inline LogValue log_elementary_symmetric(const Spectrum& s, int k) {
  if (k < 0 || k > s.size())
    throw OutOfRange("elementary symmetric degree outside [0, n]");
  auto [scaled, log_scale] = detail::esym_scaled(s.clamped(), k);
  if (scaled <= 0.0) return LogValue::zero();
  return LogValue::from_log(std::log(scaled) + log_scale);
}

/// log det(M_{S,S}) with multiset semantics: a repeated index duplicates the
/// row/column and forces the value zero. Pivots at or below tolerance also
/// yield zero.
inline LogValue logdet_submatrix(const SymmetricMatrix& m, const std::vector<int>& indices) {
  for (int i : indices) m.check_index(i);
  if (indices.empty()) return LogValue::one();
  if (detail::has_repeats(indices)) return LogValue::zero();
  Eigen::MatrixXd sub = m.principal_submatrix(indices);
  const double tol_abs = kDefaultZeroTol * (1.0 + sub.cwiseAbs().maxCoeff());
  auto pc = detail::pivoted_cholesky(std::move(sub), tol_abs);
  if (pc.rank < static_cast<int>(indices.size())) return LogValue::zero();
  double logdet = 0.0;
  for (int i = 0; i < pc.rank; ++i) logdet += 2.0 * std::log(pc.factor(i, i));
  return LogValue::from_log(logdet);
}

/// Orthogonal projector onto the complement of span{v_i : i in T}.
inline SymmetricMatrix projector_complement(const PointSet& v, const std::vector<int>& t) {
  const int r = v.ambient_dim();
  std::vector<int> distinct(t);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (int i : distinct) v.check_index(i);
  if (distinct.empty()) return SymmetricMatrix::identity(r);

  Eigen::MatrixXd b(r, static_cast<int>(distinct.size()));
  for (std::size_t a = 0; a < distinct.size(); ++a) b.col(a) = v.column(distinct[a]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b);
  qr.setThreshold(kDefaultZeroTol);
  const int rank = static_cast<int>(qr.rank());
  if (rank == 0) return SymmetricMatrix::identity(r);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(r, rank);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(r, r) - q * q.transpose();
  proj = 0.5 * (proj + proj.transpose());
  return SymmetricMatrix(std::move(proj));
}

} // namespace detmax
