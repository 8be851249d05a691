#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "detmax/errors.hpp"
#include "detmax/linalg.hpp"
#include "detmax/types.hpp"

namespace detmax {

/// Nonnegative weights over the candidate points with prescribed total j.
class DesignWeights {
public:
  DesignWeights(Eigen::VectorXd weights, int target_sum)
      : weights_(std::move(weights)), target_sum_(target_sum) {
    if (target_sum_ < 1) throw InvalidInput("design weight total must be positive");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (weights_(i) < -1e-12)
        throw InvalidDistribution("design weight is negative");
      if (weights_(i) < 0.0) weights_(i) = 0.0;
      sum += weights_(i);
    }
    if (std::abs(sum - target_sum_) > 1e-9)
      throw InvalidDistribution("design weights do not sum to the target");
  }

  static DesignWeights uniform(int n, int target_sum) {
    return DesignWeights(
        Eigen::VectorXd::Constant(n, static_cast<double>(target_sum) / n), target_sum);
  }

  int size() const { return static_cast<int>(weights_.size()); }
  int target_sum() const { return target_sum_; }
  double operator[](int i) const { return weights_(i); }
  const Eigen::VectorXd& vector() const { return weights_; }

private:
  Eigen::VectorXd weights_;
  int target_sum_;
};

/// Feasible positive definite matrix W = U diag(lambda) U^T for the section
/// containment program, kept in eigen form.
struct DualWitness {
  Eigen::MatrixXd eigen_basis;
  Eigen::VectorXd eigenvalues; // all strictly positive
  double epsilon_frac = 0.5;

  Eigen::MatrixXd matrix() const {
    return eigen_basis * eigenvalues.asDiagonal() * eigen_basis.transpose();
  }
};

/// Primal/dual value pair certifying that the primal iterate is within alpha
/// of the relaxation optimum.
struct GapCertificate {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double alpha = 0.0;

  GapCertificate() = default;
  GapCertificate(double primal, double dual)
      : primal_value(primal), dual_value(dual), alpha(std::max(0.0, dual - primal)) {
    if (dual - primal < -1e-8)
      throw InvalidInput("certificate dual value below primal value");
  }
};

/// Unique k in {0, ..., j-1} with x_k > (sum_{i>k} x_i) / (j-k) >= x_{k+1},
/// under the convention x_0 = +infinity. Indices here are 1-based as in the
/// defining inequality; the returned k counts how many leading entries are
/// excluded from the averaged tail.
inline int threshold_index(const Eigen::VectorXd& x, int j) {
  const int m = static_cast<int>(x.size());
  if (j < 1 || j > m) throw InvalidInput("threshold index needs 1 <= j <= length");
  const double scale = std::max(m > 0 ? x(0) : 0.0, 1.0);
  const double slack = 1e-12 * scale;
  for (int i = 0; i < m; ++i) {
    if (x(i) < -slack) throw InvalidInput("threshold input has a negative entry");
    if (i + 1 < m && x(i) < x(i + 1) - slack)
      throw InvalidInput("threshold input is not sorted nonincreasing");
  }
  double tail = 0.0;
  for (int i = 0; i < m; ++i) tail += std::max(x(i), 0.0);
  for (int k = 0; k < j; ++k) {
    // invariant: tail = sum of entries after position k (1-based)
    if (k > 0) tail -= std::max(x(k - 1), 0.0);
    const double avg = tail / (j - k);
    const double next = std::max(x(k), 0.0); // x_{k+1} in 1-based terms
    if (avg >= next - slack) return k;
  }
  return j - 1; // unreachable for valid input
}

/// Concave spectral objective: sum of logs of the k largest eigenvalues plus
/// (j-k) times the log of the averaged tail. -infinity when rank < j.
inline double gamma_j(const Spectrum& s, int j) {
  if (j < 1) throw InvalidInput("gamma_j needs j >= 1");
  if (s.rank() < j || j > s.size())
    return -std::numeric_limits<double>::infinity();
  const Eigen::VectorXd x = s.clamped();
  const int k = threshold_index(x, j);
  double tail = 0.0;
  for (int i = k; i < s.size(); ++i) tail += x(i);
  double value = 0.0;
  for (int i = 0; i < k; ++i) value += std::log(x(i));
  value += (j - k) * std::log(tail / (j - k));
  return value;
}

/// Convex spectral objective: minus the sum of logs of the j smallest
/// eigenvalues. Requires a positive definite spectrum.
inline double delta_j(const Spectrum& s, int j) {
  if (j < 1 || j > s.size()) throw OutOfRange("delta_j needs 1 <= j <= size");
  if (s.values().minCoeff() <= 0.0)
    throw NotPositiveDefinite("delta_j requires strictly positive eigenvalues");
  double value = 0.0;
  for (int i = s.size() - j; i < s.size(); ++i) value -= std::log(s[i]);
  return value;
}

/// X = sum_i c_i v_i v_i^T.
inline SymmetricMatrix design_matrix(const PointSet& v, const DesignWeights& c) {
  if (v.count() != c.size())
    throw DimensionMismatch("weight count does not match point count");
  Eigen::MatrixXd x =
      v.matrix() * c.vector().asDiagonal() * v.matrix().transpose();
  x = 0.5 * (x + x.transpose());
  return SymmetricMatrix(std::move(x));
}

namespace detail {

/// Shared spectral data for the supergradient and the dual witness: the
/// threshold split of the design matrix spectrum.
struct DesignSplit {
  int k = 0;          // number of leading eigenvalues kept individually
  double tail = 0.0;  // sum of the remaining (clamped) eigenvalues
  double nu = 0.0;    // tail / (j - k)
  Eigen::VectorXd mu; // clamped eigenvalues, nonincreasing
};

inline DesignSplit design_split(const EigenSym& es, int j) {
  if (es.spectrum.rank() < j)
    throw RankDeficient("design matrix rank is below j");
  DesignSplit split;
  split.mu = es.spectrum.clamped();
  split.k = threshold_index(split.mu, j);
  for (int i = split.k; i < split.mu.size(); ++i) split.tail += split.mu(i);
  split.nu = split.tail / (j - split.k);
  return split;
}

inline double gamma_from_split(const DesignSplit& split, int j) {
  double value = (j - split.k) * std::log(split.nu);
  for (int i = 0; i < split.k; ++i) value += std::log(split.mu(i));
  return value;
}

inline Eigen::VectorXd supergradient_from_eigen(const PointSet& v, const EigenSym& es,
                                                int j) {
  const DesignSplit split = design_split(es, j);
  const int r = static_cast<int>(split.mu.size());
  Eigen::VectorXd h(r);
  for (int i = 0; i < r; ++i)
    h(i) = i < split.k ? 1.0 / split.mu(i) : (j - split.k) / split.tail;
  // g_i = v_i^T U diag(h) U^T v_i
  Eigen::MatrixXd proj = es.basis.transpose() * v.matrix(); // r x n
  Eigen::VectorXd g(v.count());
  for (int i = 0; i < v.count(); ++i)
    g(i) = proj.col(i).cwiseAbs2().dot(h);
  return g;
}

struct WitnessResult {
  DualWitness witness;
  GapCertificate certificate;
};

inline WitnessResult dual_witness_from_eigen(const PointSet& v, const EigenSym& es,
                                             int j, double epsilon_frac) {
  if (!(epsilon_frac > 0.0 && epsilon_frac < 1.0))
    throw InvalidInput("epsilon_frac must lie in (0, 1)");
  const DesignSplit split = design_split(es, j);
  const int r = static_cast<int>(split.mu.size());
  const int rank = es.spectrum.rank();
  Eigen::VectorXd lambda(r);
  for (int i = 0; i < r; ++i) {
    if (i < split.k)
      lambda(i) = 1.0 / split.mu(i);
    else if (i < rank)
      lambda(i) = 1.0 / split.nu;
    else
      lambda(i) = 1.0 / (split.nu * (1.0 - epsilon_frac));
  }
  // Scale so that every point satisfies the ellipsoid containment constraint.
  Eigen::MatrixXd proj = es.basis.transpose() * v.matrix(); // r x n
  double t = 0.0;
  for (int i = 0; i < v.count(); ++i)
    t = std::max(t, proj.col(i).cwiseAbs2().dot(lambda));
  if (t <= 0.0) throw InvalidInput("all points are zero; witness undefined");

  const double primal = gamma_from_split(split, j);
  const double log_t = std::log(t);
  WitnessResult out;
  out.witness.eigen_basis = es.basis;
  out.witness.eigenvalues = lambda / t;
  out.witness.epsilon_frac = epsilon_frac;
  out.certificate.primal_value = primal;
  out.certificate.dual_value = primal + j * log_t;
  out.certificate.alpha = std::max(0.0, j * log_t);
  return out;
}

} // namespace detail

/// Supergradient of c -> gamma_j(sum_i c_i v_i v_i^T). At eigenvalue ties the
/// averaged-tail weights pick the uniform element of the subdifferential.
inline Eigen::VectorXd supergradient(const PointSet& v, const DesignWeights& c, int j) {
  const EigenSym es = eigen_sym(design_matrix(v, c));
  return detail::supergradient_from_eigen(v, es, j);
}

/// Feasible dual witness and gap certificate for the design c: the witness is
/// built from the design matrix spectrum and rescaled into the feasible
/// region; the certified gap is j * log(scaling).
inline std::pair<DualWitness, GapCertificate> dual_witness(const PointSet& v,
                                                           const DesignWeights& c, int j,
                                                           double epsilon_frac = 0.5) {
  const EigenSym es = eigen_sym(design_matrix(v, c));
  auto res = detail::dual_witness_from_eigen(v, es, j, epsilon_frac);
  return {std::move(res.witness), res.certificate};
}

struct SolveOptions {
  double target_alpha = 0.05;
  int max_iters = 5000;
  std::uint64_t seed = 0; // reserved; the solver is deterministic
  double epsilon_frac = 0.5;
  double zero_tol = kDefaultZeroTol;
  int certify_every = 10;
  int line_search_iters = 40;
};

struct SolveResult {
  DesignWeights weights;
  GapCertificate certificate;
  bool converged = false;
  int iterations = 0;
  std::vector<GapCertificate> certificate_history;
  std::vector<double> objective_history;
};

namespace detail {

/// Golden-section maximization of a concave 1-D function on [0, 1]; the
/// returned point is the best sampled one, endpoints included.
template <typename F>
inline std::pair<double, double> golden_section_max(F&& f, double f_at_zero, int iters) {
  const double invphi = 0.6180339887498949;
  double a = 0.0, b = 1.0;
  double best_t = 0.0, best_f = f_at_zero;
  auto consider = [&](double t, double val) {
    if (val > best_f) {
      best_f = val;
      best_t = t;
    }
  };
  consider(1.0, f(1.0));
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  consider(x1, f1);
  consider(x2, f2);
  for (int it = 0; it < iters; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
      consider(x2, f2);
    }
  }
  return {best_t, best_f};
}

} // namespace detail

/// Conditional-gradient ascent on the design objective over the scaled
/// simplex {c >= 0, sum c = j}, with a golden-section line search and a dual
/// witness computed every certify_every iterations. Returns the best iterate;
/// converged == false signals an exhausted iteration budget (the certificate
/// still holds for the returned weights).
inline SolveResult solve_design(const PointSet& v, int j, const SolveOptions& options = {}) {
  const int n = v.count();
  if (j < 1) throw InvalidInput("j must be positive");

  Eigen::VectorXd c = Eigen::VectorXd::Constant(n, static_cast<double>(j) / n);
  auto design_of = [&](const Eigen::VectorXd& w) {
    Eigen::MatrixXd x = v.matrix() * w.asDiagonal() * v.matrix().transpose();
    x = 0.5 * (x + x.transpose());
    return SymmetricMatrix(std::move(x));
  };

  EigenSym es = eigen_sym(design_of(c), options.zero_tol);
  if (es.spectrum.rank() < j)
    throw RankDeficient("point set rank is below j");

  SolveResult result{DesignWeights(c, j), GapCertificate{}, false, 0, {}, {}};
  double best_dual = std::numeric_limits<double>::infinity();
  double objective = gamma_j(es.spectrum, j);

  for (int iter = 0; iter <= options.max_iters; ++iter) {
    result.objective_history.push_back(objective);
    result.iterations = iter;

    bool want_certificate = (iter % options.certify_every == 0) || iter == options.max_iters;
    Eigen::VectorXd g = detail::supergradient_from_eigen(v, es, j);
    int vertex = 0;
    for (int i = 1; i < n; ++i)
      if (g(i) > g(vertex)) vertex = i;
    const double fw_gap = j * g(vertex) - j; // linearized improvement bound
    if (fw_gap <= 0.0) want_certificate = true;

    if (want_certificate) {
      auto res = detail::dual_witness_from_eigen(v, es, j, options.epsilon_frac);
      best_dual = std::min(best_dual, res.certificate.dual_value);
      GapCertificate live;
      live.primal_value = objective;
      live.dual_value = best_dual;
      live.alpha = std::max(0.0, best_dual - objective);
      result.certificate_history.push_back(live);
      result.certificate = live;
      if (live.alpha <= options.target_alpha) {
        result.converged = true;
        break;
      }
      if (fw_gap <= 0.0) break; // no ascent direction left at this iterate
    }
    if (iter == options.max_iters) break;

    // Line search toward the vertex j * e_{i*}.
    Eigen::MatrixXd x_now = design_of(c).matrix();
    Eigen::VectorXd vv = v.column(vertex);
    Eigen::MatrixXd x_vertex = j * (vv * vv.transpose());
    auto phi = [&](double t) {
      Eigen::MatrixXd xt = (1.0 - t) * x_now + t * x_vertex;
      xt = 0.5 * (xt + xt.transpose());
      EigenSym et = eigen_sym(SymmetricMatrix(std::move(xt)), options.zero_tol);
      return gamma_j(et.spectrum, j);
    };
    auto [step, value] = detail::golden_section_max(phi, objective, options.line_search_iters);
    (void)value;
    if (step > 0.0) {
      c *= (1.0 - step);
      c(vertex) += step * j;
    }
    es = eigen_sym(design_of(c), options.zero_tol);
    objective = gamma_j(es.spectrum, j);
  }

  result.weights = DesignWeights(c, j);
  return result;
}

inline SolveResult solve_design(const PointSet& v, int j, double target_alpha,
                                int max_iters = 5000, std::uint64_t seed = 0) {
  SolveOptions options;
  options.target_alpha = target_alpha;
  options.max_iters = max_iters;
  options.seed = seed;
  return solve_design(v, j, options);
}

} // namespace detmax
