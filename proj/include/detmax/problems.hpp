#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "detmax/design.hpp"
#include "detmax/errors.hpp"
#include "detmax/linalg.hpp"
#include "detmax/rounding.hpp"
#include "detmax/types.hpp"

namespace detmax {

inline constexpr long long kDefaultSubsetBudget = 2'000'000;

namespace detail {

/// C(n, k), saturating at cap.
inline long long binomial_capped(int n, int k, long long cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long value = 1;
  for (int i = 1; i <= k; ++i) {
    value = value * (n - k + i) / i;
    if (value > cap) return cap + 1;
  }
  return value;
}

/// Visits all size-k subsets of {0, ..., n-1} in lexicographic order.
template <typename Fn>
inline void for_each_combination(int n, int k, Fn&& fn) {
  if (k > n || k < 0) return;
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  while (true) {
    fn(const_cast<const std::vector<int>&>(subset));
    int i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int t = i + 1; t < k; ++t) subset[t] = subset[t - 1] + 1;
  }
}

} // namespace detail

/// PSD matrix plus the subset size to optimize over.
struct MsdInstance {
  SymmetricMatrix matrix;
  int j;
};

/// Point set plus the simplex dimension to optimize over.
struct MvsInstance {
  PointSet points; // d x n, columns are points
  int j;

  void validate() const {
    if (j < 1 || j > points.ambient_dim())
      throw InvalidInput("simplex dimension must satisfy 1 <= j <= d");
    if (points.count() < j + 1)
      throw InvalidInput("need at least j+1 points");
  }
};

struct MsdOptions {
  double target_alpha = 0.05;
  int max_iters = 5000;
  std::uint64_t seed = 0;
  SelectionMethod mode = SelectionMethod::Derandomized;
  double psd_tol = kDefaultZeroTol;
  double zero_tol = kDefaultZeroTol;
};

struct MsdApproxResult {
  Selection selection;
  GapCertificate certificate;
  bool solver_converged = true;
  int solver_iterations = 0;
  std::vector<GapCertificate> certificate_history;
};

/// Factorize, solve the design relaxation to the target gap, round.
inline MsdApproxResult msd_approx(const MsdInstance& inst, const MsdOptions& options = {}) {
  if (inst.j < 1 || inst.j > inst.matrix.order())
    throw InvalidInput("subset size must satisfy 1 <= j <= n");
  const PointSet v = cholesky_psd(inst.matrix, options.psd_tol);

  SolveOptions solve_options;
  solve_options.target_alpha = options.target_alpha;
  solve_options.max_iters = options.max_iters;
  solve_options.seed = options.seed;
  solve_options.zero_tol = options.zero_tol;
  SolveResult solved = solve_design(v, inst.j, solve_options);

  MsdApproxResult out;
  out.certificate = solved.certificate;
  out.solver_converged = solved.converged;
  out.solver_iterations = solved.iterations;
  out.certificate_history = solved.certificate_history;
  if (options.mode == SelectionMethod::Sampled) {
    out.selection = sample_select(v, solved.weights, inst.j, options.seed);
  } else {
    out.selection = derandomized_select(v, solved.weights, inst.j, inst.matrix);
  }
  out.selection.certificate_alpha = solved.certificate.alpha;
  return out;
}

/// Exact j-MSD by subset enumeration (lexicographically smallest argmax).
inline Selection msd_oracle(const MsdInstance& inst,
                            long long budget = kDefaultSubsetBudget) {
  const int n = inst.matrix.order();
  if (inst.j < 1 || inst.j > n)
    throw InvalidInput("subset size must satisfy 1 <= j <= n");
  if (detail::binomial_capped(n, inst.j, budget) > budget)
    throw BudgetExceeded("subset count exceeds the oracle budget");

  Selection best;
  best.method = SelectionMethod::Oracle;
  bool first = true;
  detail::for_each_combination(n, inst.j, [&](const std::vector<int>& subset) {
    const LogValue det = logdet_submatrix(inst.matrix, subset);
    if (first || det > best.logdet) {
      best.indices = subset;
      best.logdet = det;
      first = false;
    }
  });
  return best;
}

/// One j-MSD instance per anchor point, with the map back to input labels.
struct ReducedInstance {
  int anchor;
  std::vector<int> labels; // labels[row] = original point index
  MsdInstance instance;
};

/// Gram matrices of the anchored difference vectors, one per anchor.
inline std::vector<ReducedInstance> mvs_reduce(const MvsInstance& inst) {
  inst.validate();
  const int n = inst.points.count();
  std::vector<ReducedInstance> out;
  out.reserve(n);
  for (int anchor = 0; anchor < n; ++anchor) {
    Eigen::MatrixXd diffs(inst.points.ambient_dim(), n - 1);
    std::vector<int> labels;
    labels.reserve(n - 1);
    int col = 0;
    for (int k = 0; k < n; ++k) {
      if (k == anchor) continue;
      diffs.col(col++) = inst.points.column(k) - inst.points.column(anchor);
      labels.push_back(k);
    }
    Eigen::MatrixXd gram = diffs.transpose() * diffs;
    gram = 0.5 * (gram + gram.transpose());
    out.push_back(ReducedInstance{anchor, std::move(labels),
                                  MsdInstance{SymmetricMatrix(std::move(gram)), inst.j}});
  }
  return out;
}

struct MvsSolution {
  std::vector<int> vertices; // j+1 point indices, sorted
  double volume = 0.0;
  bool degenerate = false;
  double max_alpha = 0.0; // largest certified gap across anchors (approx only)
};

namespace detail {

inline double volume_from_logdet(const LogValue& det, int j) {
  if (det.is_zero()) return 0.0;
  if (j <= 20 && std::abs(det.log()) < 700.0) {
    double factorial = 1.0; // exact in double up to 20!
    for (int i = 2; i <= j; ++i) factorial *= i;
    return std::sqrt(det.value()) / factorial;
  }
  return std::exp(0.5 * det.log() - std::lgamma(j + 1.0));
}

} // namespace detail

/// Exact j-MVS by enumerating all (j+1)-subsets of vertices.
inline MvsSolution mvs_oracle(const MvsInstance& inst,
                              long long budget = kDefaultSubsetBudget) {
  inst.validate();
  const int n = inst.points.count();
  if (detail::binomial_capped(n, inst.j + 1, budget) > budget)
    throw BudgetExceeded("subset count exceeds the oracle budget");

  MvsSolution best;
  bool first = true;
  std::vector<int> all_edges(inst.j);
  for (int t = 0; t < inst.j; ++t) all_edges[t] = t;
  detail::for_each_combination(n, inst.j + 1, [&](const std::vector<int>& subset) {
    Eigen::MatrixXd edges(inst.points.ambient_dim(), inst.j);
    for (int t = 1; t <= inst.j; ++t)
      edges.col(t - 1) = inst.points.column(subset[t]) - inst.points.column(subset[0]);
    const LogValue det = detail::logdet_of_columns(PointSet(std::move(edges)), all_edges);
    const double volume = detail::volume_from_logdet(det, inst.j);
    if (first || volume > best.volume) {
      best.vertices = subset;
      best.volume = volume;
      first = false;
    }
  });
  best.degenerate = best.volume <= 0.0;
  return best;
}

struct MvsOptions {
  double target_alpha = 0.05;
  int max_iters = 5000;
  std::uint64_t seed = 0;
  SelectionMethod mode = SelectionMethod::Derandomized;
  double psd_tol = kDefaultZeroTol;
  double zero_tol = kDefaultZeroTol;
};

/// Approximate j-MVS: best anchored j-MSD approximation over all anchors.
/// Anchors whose reduced instance has rank below j are skipped; when all are
/// skipped the optimum is genuinely zero and the result is flagged degenerate.
inline MvsSolution mvs_approx(const MvsInstance& inst, const MvsOptions& options = {}) {
  inst.validate();
  MsdOptions msd_options;
  msd_options.target_alpha = options.target_alpha;
  msd_options.max_iters = options.max_iters;
  msd_options.seed = options.seed;
  msd_options.mode = options.mode;
  msd_options.psd_tol = options.psd_tol;
  msd_options.zero_tol = options.zero_tol;

  MvsSolution best;
  best.degenerate = true;
  LogValue best_det = LogValue::zero();
  bool have_any = false;
  for (const ReducedInstance& reduced : mvs_reduce(inst)) {
    MsdApproxResult result;
    try {
      result = msd_approx(reduced.instance, msd_options);
    } catch (const RankDeficient&) {
      continue;
    } catch (const DegeneratePotential&) {
      continue;
    }
    best.max_alpha = std::max(best.max_alpha, result.certificate.alpha);
    if (!have_any || result.selection.logdet > best_det) {
      have_any = true;
      best_det = result.selection.logdet;
      best.vertices.clear();
      best.vertices.push_back(reduced.anchor);
      for (int row : result.selection.indices)
        best.vertices.push_back(reduced.labels[row]);
      std::sort(best.vertices.begin(), best.vertices.end());
      best.volume = detail::volume_from_logdet(result.selection.logdet, inst.j);
      best.degenerate = false;
    }
  }
  return best;
}

struct SweepEntry {
  int j = 0;
  bool ok = false;
  double value = 0.0;
  std::string note;
};

struct SweepResult {
  int best_j = 0;
  double value = 0.0;
  std::vector<SweepEntry> entries;
};

/// Discrepancy-style determinant bound sweep: for each feasible j evaluate
/// sqrt(j) * det^(1/2j) of the approximately best j-subset of A^T A. Failed
/// values of j are recorded and skipped.
inline SweepResult detlb2_sweep(const Eigen::MatrixXd& a, const MsdOptions& options = {}) {
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0)
    throw InvalidInput("matrix must be nonzero");
  Eigen::MatrixXd gram = a.transpose() * a;
  gram = 0.5 * (gram + gram.transpose());
  const SymmetricMatrix m(std::move(gram));
  const int rank = cholesky_psd(m, options.psd_tol).ambient_dim();

  SweepResult out;
  bool first = true;
  for (int j = 1; j <= rank; ++j) {
    SweepEntry entry;
    entry.j = j;
    try {
      MsdApproxResult result = msd_approx(MsdInstance{m, j}, options);
      if (result.selection.logdet.is_zero()) {
        entry.note = "selected subset is singular";
      } else {
        entry.ok = true;
        entry.value =
            std::sqrt(static_cast<double>(j)) *
            std::exp(result.selection.logdet.log() / (2.0 * j));
      }
    } catch (const Error& e) {
      entry.note = e.what();
    }
    if (entry.ok && (first || entry.value > out.value)) {
      out.best_j = j;
      out.value = entry.value;
      first = false;
    }
    out.entries.push_back(std::move(entry));
  }
  if (first) throw RankDeficient("no feasible subset size");
  return out;
}

} // namespace detmax
