#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detmax/design.hpp"
#include "detmax/errors.hpp"
#include "detmax/linalg.hpp"
#include "detmax/log_value.hpp"
#include "detmax/rng.hpp"
#include "detmax/types.hpp"

namespace detmax {

enum class SelectionMethod { Sampled, Derandomized, Oracle, Rip };

inline const char* to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::Sampled: return "sampled";
    case SelectionMethod::Derandomized: return "derandomized";
    case SelectionMethod::Oracle: return "oracle";
    case SelectionMethod::Rip: return "rip";
  }
  return "unknown";
}

/// Size-j index set (or multiset, for sampled output) with its log
/// determinant and guarantee metadata.
struct Selection {
  std::vector<int> indices; // sorted, 0-based
  LogValue logdet;
  SelectionMethod method = SelectionMethod::Oracle;
  std::optional<double> certificate_alpha;
  std::optional<std::uint64_t> seed;
};

namespace detail {

/// log det of the Gram matrix of the chosen columns (multiset semantics).
inline LogValue logdet_of_columns(const PointSet& v, const std::vector<int>& indices) {
  const int m = static_cast<int>(indices.size());
  Eigen::MatrixXd cols(v.ambient_dim(), m);
  for (int a = 0; a < m; ++a) cols.col(a) = v.column(indices[a]);
  Eigen::MatrixXd gram = cols.transpose() * cols;
  gram = 0.5 * (gram + gram.transpose());
  const double tol_abs = kDefaultZeroTol * (1.0 + gram.cwiseAbs().maxCoeff());
  auto pc = pivoted_cholesky(std::move(gram), tol_abs);
  if (pc.rank < m) return LogValue::zero();
  double logdet = 0.0;
  for (int i = 0; i < pc.rank; ++i) logdet += 2.0 * std::log(pc.factor(i, i));
  return LogValue::from_log(logdet);
}

} // namespace detail

/// Draw j indices i.i.d. with replacement from Pr[i] = c_i / j.
inline Selection sample_select(const PointSet& v, const DesignWeights& c, int j,
                               std::uint64_t seed) {
  if (v.count() != c.size()) throw DimensionMismatch("weights do not match points");
  if (c.target_sum() != j) throw InvalidDistribution("weight total differs from j");
  double sum = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    if (c[i] < -1e-12) throw InvalidDistribution("negative sampling weight");
    sum += c[i];
  }
  if (std::abs(sum - j) > 1e-9)
    throw InvalidDistribution("sampling weights do not sum to j");

  SplitMix64 rng(seed);
  std::vector<double> cumulative(c.size());
  double acc = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    acc += std::max(c[i], 0.0);
    cumulative[i] = acc;
  }
  const double total = acc;

  Selection out;
  out.method = SelectionMethod::Sampled;
  out.seed = seed;
  out.indices.reserve(j);
  for (int draw = 0; draw < j; ++draw) {
    const double u = rng.next_double() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    int idx = static_cast<int>(it - cumulative.begin());
    if (idx >= c.size()) idx = c.size() - 1;
    out.indices.push_back(idx);
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.logdet = detail::logdet_of_columns(v, out.indices);
  return out;
}

/// Greedy potential det(M_{T,T}) * e_{j-|T|}(lambda(T)), where lambda(T) is
/// the spectrum of P(T) (V diag(c) V^T) P(T) and P(T) projects onto the
/// orthogonal complement of span{v_i : i in T}. Repeated indices in T force
/// the value zero.
inline LogValue phi_potential(const PointSet& v, const DesignWeights& c, int j,
                              const std::vector<int>& t, const SymmetricMatrix& m) {
  if (static_cast<int>(t.size()) > j)
    throw InvalidInput("potential needs |T| <= j");
  for (int i : t) v.check_index(i);
  const LogValue det_t = logdet_submatrix(m, t);
  if (det_t.is_zero()) return LogValue::zero();

  const SymmetricMatrix proj = projector_complement(v, t);
  Eigen::MatrixXd x =
      v.matrix() * c.vector().asDiagonal() * v.matrix().transpose();
  Eigen::MatrixXd projected = proj.matrix() * x * proj.matrix();
  projected = 0.5 * (projected + projected.transpose());
  const EigenSym es = eigen_sym(SymmetricMatrix(std::move(projected)));
  const int remaining = j - static_cast<int>(t.size());
  if (remaining > es.spectrum.size()) return LogValue::zero();
  return det_t * log_elementary_symmetric(es.spectrum, remaining);
}

/// Conditional-expectation greedy: j times add the index maximizing the
/// potential (ties to the lowest index). The output is a plain set.
inline Selection derandomized_select(const PointSet& v, const DesignWeights& c, int j,
                                     const SymmetricMatrix& m) {
  if (v.count() != c.size()) throw DimensionMismatch("weights do not match points");
  if (m.order() != v.count())
    throw DimensionMismatch("matrix order does not match point count");
  const LogValue phi_empty = phi_potential(v, c, j, {}, m);
  if (phi_empty.is_zero())
    throw DegeneratePotential("initial potential is zero (rank below j)");

  std::vector<int> chosen;
  std::vector<char> used(v.count(), 0);
  for (int step = 0; step < j; ++step) {
    int best = -1;
    LogValue best_phi = LogValue::zero();
    std::vector<int> candidate = chosen;
    candidate.push_back(-1);
    for (int i = 0; i < v.count(); ++i) {
      if (used[i]) continue;
      candidate.back() = i;
      const LogValue phi = phi_potential(v, c, j, candidate, m);
      if (best < 0 || phi > best_phi) {
        best = i;
        best_phi = phi;
      }
    }
    chosen.push_back(best);
    used[best] = 1;
  }
  std::sort(chosen.begin(), chosen.end());

  Selection out;
  out.indices = std::move(chosen);
  out.logdet = logdet_submatrix(m, out.indices);
  out.method = SelectionMethod::Derandomized;
  return out;
}

/// Determinant restricted-invertibility selector: given an identity
/// decomposition sum_i c_i v_i v_i^T = I and a linear map L, picks j indices
/// whose transformed Gram determinant meets the Hilbert-Schmidt bound.
inline Selection rip_select(const PointSet& v, const Eigen::VectorXd& c,
                            const Eigen::MatrixXd& l, int j) {
  const int r = v.ambient_dim();
  if (c.size() != v.count()) throw DimensionMismatch("weights do not match points");
  if (l.rows() != r || l.cols() != r)
    throw DimensionMismatch("linear map must be r x r");

  Eigen::MatrixXd identity_check =
      v.matrix() * c.asDiagonal() * v.matrix().transpose() -
      Eigen::MatrixXd::Identity(r, r);
  if (identity_check.cwiseAbs().maxCoeff() > 1e-8)
    throw PreconditionViolated("weights do not decompose the identity");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(l);
  const double hs_sq = l.squaredNorm();
  const double op_sq = svd.singularValues().size()
                           ? svd.singularValues()(0) * svd.singularValues()(0)
                           : 0.0;
  if (op_sq <= 0.0) throw PreconditionViolated("linear map is zero");
  if (j > static_cast<int>(std::floor(hs_sq / op_sq + 1e-12)))
    throw PreconditionViolated("j exceeds the robust rank of the map");

  const double total = c.sum();
  PointSet transformed(l * v.matrix());
  DesignWeights weights(j * c / total, j);
  Selection out = derandomized_select(transformed, weights, j, transformed.gram());
  out.method = SelectionMethod::Rip;
  return out;
}

} // namespace detmax
