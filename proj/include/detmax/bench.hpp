#pragma once

#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "detmax/generators.hpp"
#include "detmax/problems.hpp"
#include "detmax/report.hpp"
#include "detmax/rng.hpp"

namespace detmax {

struct BenchConfig {
  std::vector<int> ns;
  std::vector<int> ds;
  std::vector<int> js;
  int instances = 20;
  std::uint64_t seed = 0;
  double target_alpha = 0.05;
  int max_iters = 5000;
  long long budget = kDefaultSubsetBudget;
};

struct BenchCell {
  int n = 0, d = 0, j = 0;
  int attempted = 0;
  int completed = 0;
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
  double floor_min = 0.0; // smallest certified floor across instances
  double mean_iters = 0.0;
  int violations = 0;
  std::string note; // set when the whole cell is skipped
};

struct BenchReport {
  std::vector<BenchCell> cells;
  int total_completed = 0;
  int total_violations = 0;
  double wall_seconds = 0.0; // console information; kept out of report files

  /// Machine-readable report: one key=value record per cell plus a summary.
  std::string machine_lines() const {
    std::ostringstream os;
    for (const BenchCell& cell : cells) {
      os << "cell n=" << cell.n << " d=" << cell.d << " j=" << cell.j
         << " instances=" << cell.attempted << " ok=" << cell.completed;
      if (!cell.note.empty()) {
        os << " skipped=" << cell.note;
      } else if (cell.completed > 0) {
        os << " mean_ratio=" << detail::format_report_double(cell.mean_ratio)
           << " min_ratio=" << detail::format_report_double(cell.min_ratio)
           << " floor_min=" << detail::format_report_double(cell.floor_min)
           << " mean_iters=" << detail::format_report_double(cell.mean_iters)
           << " violations=" << cell.violations;
      }
      os << "\n";
    }
    os << "summary cells=" << cells.size() << " ok=" << total_completed
       << " violations=" << total_violations << "\n";
    return os.str();
  }

  /// Fixed-width plain-text table.
  std::string text_table() const {
    std::ostringstream os;
    char line[192];
    std::snprintf(line, sizeof(line), "%4s %4s %4s %5s %4s %12s %12s %12s %10s %5s\n",
                  "n", "d", "j", "inst", "ok", "mean_ratio", "min_ratio",
                  "floor_min", "mean_iter", "viol");
    os << line;
    for (const BenchCell& cell : cells) {
      if (!cell.note.empty()) {
        std::snprintf(line, sizeof(line), "%4d %4d %4d %5d %4d %38s\n", cell.n, cell.d,
                      cell.j, cell.attempted, cell.completed, cell.note.c_str());
      } else {
        std::snprintf(line, sizeof(line),
                      "%4d %4d %4d %5d %4d %12.6f %12.6f %12.6f %10.1f %5d\n", cell.n,
                      cell.d, cell.j, cell.attempted, cell.completed, cell.mean_ratio,
                      cell.min_ratio, cell.floor_min, cell.mean_iters, cell.violations);
      }
      os << line;
    }
    std::snprintf(line, sizeof(line), "total ok=%d violations=%d\n", total_completed,
                  total_violations);
    os << line;
    return os.str();
  }
};

/// Run the (n, d, j) grid on random Gram instances with the derandomized
/// pipeline and compare every result against the exact oracle. Deterministic
/// given the config; wall time is reported separately so report files are
/// byte-stable across runs.
inline BenchReport run_bench(const BenchConfig& config, std::ostream* log = nullptr) {
  BenchReport report;
  const auto started = std::chrono::steady_clock::now();
  SplitMix64 root(config.seed);

  for (int n : config.ns) {
    for (int d : config.ds) {
      for (int j : config.js) {
        BenchCell cell;
        cell.n = n;
        cell.d = d;
        cell.j = j;
        cell.attempted = config.instances;
        if (j > d || j > n || n < 1 || d < 1 || j < 1) {
          cell.note = "infeasible";
          report.cells.push_back(cell);
          continue;
        }
        double ratio_sum = 0.0, iter_sum = 0.0;
        for (int rep = 0; rep < config.instances; ++rep) {
          SplitMix64 rng = root.split();
          Eigen::MatrixXd points = detail::gaussian_matrix(d, n, rng);
          Eigen::MatrixXd gram = points.transpose() * points;
          gram = 0.5 * (gram + gram.transpose());
          MsdInstance inst{SymmetricMatrix(std::move(gram)), j};

          MsdOptions options;
          options.target_alpha = config.target_alpha;
          options.max_iters = config.max_iters;
          options.mode = SelectionMethod::Derandomized;
          try {
            MsdApproxResult approx = msd_approx(inst, options);
            Selection oracle = msd_oracle(inst, config.budget);
            const double achieved = approx.selection.logdet.log();
            const double exact = oracle.logdet.log();
            const double ratio = std::exp(achieved - exact);
            const double floor = guarantee_floor(j, approx.certificate.alpha);
            ratio_sum += ratio;
            iter_sum += approx.solver_iterations;
            if (cell.completed == 0 || ratio < cell.min_ratio) cell.min_ratio = ratio;
            if (cell.completed == 0 || floor < cell.floor_min) cell.floor_min = floor;
            if (achieved < exact + std::log(floor) - 1e-8) ++cell.violations;
            ++cell.completed;
          } catch (const Error& e) {
            if (log) *log << "bench cell (" << n << "," << d << "," << j << ") rep "
                          << rep << " failed: " << e.what() << "\n";
          }
        }
        if (cell.completed > 0) {
          cell.mean_ratio = ratio_sum / cell.completed;
          cell.mean_iters = iter_sum / cell.completed;
        }
        report.total_completed += cell.completed;
        report.total_violations += cell.violations;
        report.cells.push_back(cell);
        if (log) *log << "bench cell (" << n << "," << d << "," << j << ") done\n";
      }
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

} // namespace detmax
