#pragma once

#include <Eigen/Dense>
#include <string>

#include "detmax/errors.hpp"
#include "detmax/instance_io.hpp"
#include "detmax/rng.hpp"
#include "detmax/types.hpp"

namespace detmax {

namespace detail {

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols, SplitMix64& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = rng.normal();
  return m;
}

} // namespace detail

/// n standard normal points in d dimensions (payload rows are points).
inline Eigen::MatrixXd gen_gaussian_points(int n, int d, SplitMix64& rng) {
  return detail::gaussian_matrix(n, d, rng);
}

/// Points with a random covariance: x = B z for a fixed random B.
inline Eigen::MatrixXd gen_correlated_points(int n, int d, SplitMix64& rng) {
  Eigen::MatrixXd b = detail::gaussian_matrix(d, d, rng) / std::sqrt(static_cast<double>(d));
  Eigen::MatrixXd z = detail::gaussian_matrix(d, n, rng);
  return (b * z).transpose();
}

/// Points on a random s-dimensional subspace plus 1e-6 full-space noise.
inline Eigen::MatrixXd gen_near_degenerate_points(int n, int d, int subspace_dim,
                                                  SplitMix64& rng) {
  if (subspace_dim < 1 || subspace_dim > d)
    throw InvalidInput("subspace dimension must satisfy 1 <= s <= d");
  Eigen::MatrixXd raw = detail::gaussian_matrix(d, subspace_dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, subspace_dim);
  Eigen::MatrixXd coords = detail::gaussian_matrix(subspace_dim, n, rng);
  Eigen::MatrixXd noise = detail::gaussian_matrix(d, n, rng);
  return (q * coords + 1e-6 * noise).transpose();
}

/// Gram matrix of n gaussian points in d dimensions: PSD of rank <= d.
inline Eigen::MatrixXd gen_psd_from_points(int n, int d, SplitMix64& rng) {
  Eigen::MatrixXd v = detail::gaussian_matrix(d, n, rng);
  Eigen::MatrixXd gram = v.transpose() * v;
  return 0.5 * (gram + gram.transpose());
}

/// Instance file for one of the named generator kinds. `j` only matters for
/// near-degenerate, where the subspace dimension is j - 1.
inline InstanceFile gen_instance(const std::string& kind, int n, int d, int j,
                                 std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidInput("generator needs n >= 1 and d >= 1");
  SplitMix64 rng(seed);
  InstanceFile file;
  file.seed = seed;
  file.name = kind;
  if (kind == "gaussian") {
    file.kind = InstanceKind::Points;
    file.payload = gen_gaussian_points(n, d, rng);
  } else if (kind == "correlated") {
    file.kind = InstanceKind::Points;
    file.payload = gen_correlated_points(n, d, rng);
  } else if (kind == "near-degenerate") {
    file.kind = InstanceKind::Points;
    const int subspace = std::max(1, j - 1);
    file.payload = gen_near_degenerate_points(n, d, subspace, rng);
  } else if (kind == "psd") {
    file.kind = InstanceKind::PsdMatrix;
    file.payload = gen_psd_from_points(n, d, rng);
  } else {
    throw InvalidInput("unknown generator kind: " + kind);
  }
  return file;
}

} // namespace detmax
