#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "detmax/errors.hpp"

namespace detmax {

/// Relative cutoff below which a pivot or eigenvalue counts as zero.
inline constexpr double kDefaultZeroTol = 1e-10;

/// Dense real symmetric matrix. Storage is exactly symmetric: construction
/// copies the upper triangle over the lower one after checking the input.
class SymmetricMatrix {
public:
  explicit SymmetricMatrix(Eigen::MatrixXd entries, double symmetry_tol = 1e-9)
      : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
      throw DimensionMismatch("symmetric matrix must be square");
    if (entries_.rows() < 1) throw InvalidInput("matrix order must be >= 1");
    const double scale = 1.0 + entries_.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      for (Eigen::Index k = i + 1; k < entries_.cols(); ++k) {
        if (std::abs(entries_(i, k) - entries_(k, i)) > symmetry_tol * scale)
          throw InvalidInput("matrix is not symmetric");
        entries_(k, i) = entries_(i, k);
      }
    }
  }

  static SymmetricMatrix identity(int n) {
    return SymmetricMatrix(Eigen::MatrixXd::Identity(n, n));
  }

  static SymmetricMatrix diagonal(const Eigen::VectorXd& d) {
    return SymmetricMatrix(Eigen::MatrixXd(d.asDiagonal()));
  }

  int order() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int k) const { return entries_(i, k); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

  /// Principal submatrix on the given indices (multiset: repeats duplicate
  /// the row/column).
  Eigen::MatrixXd principal_submatrix(const std::vector<int>& indices) const {
    const int m = static_cast<int>(indices.size());
    Eigen::MatrixXd sub(m, m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        check_index(indices[a]);
        check_index(indices[b]);
        sub(a, b) = entries_(indices[a], indices[b]);
      }
    }
    return sub;
  }

  void check_index(int i) const {
    if (i < 0 || i >= order()) throw IndexOutOfRange("index outside matrix order");
  }

private:
  Eigen::MatrixXd entries_;
};

/// Ordered collection of n column vectors in r ambient dimensions.
class PointSet {
public:
  explicit PointSet(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
    if (columns_.rows() < 1 || columns_.cols() < 1)
      throw InvalidInput("point set needs at least one point and one dimension");
  }

  int ambient_dim() const { return static_cast<int>(columns_.rows()); }
  int count() const { return static_cast<int>(columns_.cols()); }
  Eigen::VectorXd column(int i) const {
    check_index(i);
    return columns_.col(i);
  }
  const Eigen::MatrixXd& matrix() const { return columns_; }

  /// Gram matrix of the columns.
  SymmetricMatrix gram() const {
    Eigen::MatrixXd g = columns_.transpose() * columns_;
    g = 0.5 * (g + g.transpose());
    return SymmetricMatrix(std::move(g));
  }

  void check_index(int i) const {
    if (i < 0 || i >= count()) throw IndexOutOfRange("point index out of range");
  }

private:
  Eigen::MatrixXd columns_; // r x n
};

/// Real eigenvalues in nonincreasing order plus the relative cutoff used to
/// classify values as zero.
class Spectrum {
public:
  explicit Spectrum(Eigen::VectorXd values_desc, double zero_tol = kDefaultZeroTol)
      : values_(std::move(values_desc)), zero_tol_(zero_tol) {
    for (Eigen::Index i = 0; i + 1 < values_.size(); ++i) {
      if (values_(i) < values_(i + 1) - 1e-12 * scale())
        throw InvalidInput("spectrum must be sorted nonincreasing");
      if (values_(i) < values_(i + 1)) values_(i + 1) = values_(i);
    }
  }

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_(i); }
  const Eigen::VectorXd& values() const { return values_; }
  double zero_tol() const { return zero_tol_; }

  double scale() const {
    double m = values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
    return std::max(m, 1.0);
  }

  /// Absolute threshold below which a value counts as zero.
  double zero_threshold() const { return zero_tol_ * scale(); }

  int rank() const {
    const double thresh = zero_threshold();
    int r = 0;
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      if (values_(i) > thresh) ++r;
    return r;
  }

  /// Values with everything at or below the zero threshold clamped to 0.
  Eigen::VectorXd clamped() const {
    const double thresh = zero_threshold();
    Eigen::VectorXd out = values_;
    for (Eigen::Index i = 0; i < out.size(); ++i)
      if (out(i) <= thresh) out(i) = 0.0;
    return out;
  }

private:
  Eigen::VectorXd values_; // nonincreasing
  double zero_tol_;
};

/// Eigendecomposition of a symmetric matrix; basis columns are orthonormal
/// and aligned with the spectrum order.
struct EigenSym {
  Spectrum spectrum;
  Eigen::MatrixXd basis;
};

} // namespace detmax
