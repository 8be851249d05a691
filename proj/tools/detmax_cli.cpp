// Command-line front end: subset-determinant and simplex-volume pipelines,
// exact oracles, instance generators, and the benchmark grid.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "detmax/detmax.hpp"

namespace {

bool verbose_logging() {
  const char* env = std::getenv("DETMAX_LOG");
  return env != nullptr && *env != '\0' && std::string(env) != "0";
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

void emit_report(const detmax::RunReport& report, const std::string& output_path) {
  const std::string line = report.to_line();
  std::cout << line << "\n";
  if (!output_path.empty()) {
    std::ofstream os(output_path);
    if (!os) throw detmax::IoError("cannot open for writing: " + output_path);
    os << line << "\n";
  }
}

struct SolveArgs {
  std::string problem = "msd";
  int j = 0;
  bool j_given = false;
  std::string input;
  std::string mode = "derandomized";
  double alpha = 0.05;
  int max_iters = 5000;
  std::uint64_t seed = 0;
  long long budget = detmax::kDefaultSubsetBudget;
  std::string output;
  bool with_oracle = false;
};

detmax::SymmetricMatrix matrix_for_msd(const detmax::InstanceFile& file) {
  if (file.kind == detmax::InstanceKind::Points) return file.as_points().gram();
  return file.as_matrix();
}

int run_solve(const SolveArgs& args) {
  const detmax::InstanceFile file = detmax::read_instance(args.input);
  detmax::RunReport report;
  report.instance = file.name.empty() ? args.input : file.name;
  report.problem = args.problem;
  const auto start = std::chrono::steady_clock::now();

  if (args.problem == "msd") {
    detmax::MsdInstance inst{matrix_for_msd(file), args.j};
    detmax::MsdOptions options;
    options.target_alpha = args.alpha;
    options.max_iters = args.max_iters;
    options.seed = args.seed;
    options.mode = args.mode == "sampled" ? detmax::SelectionMethod::Sampled
                                          : detmax::SelectionMethod::Derandomized;
    detmax::MsdApproxResult result = detmax::msd_approx(inst, options);
    report.j = args.j;
    report.method = to_string(result.selection.method);
    report.indices = result.selection.indices;
    report.logdet = result.selection.logdet.log();
    report.alpha = result.certificate.alpha;
    report.floor = detmax::guarantee_floor(args.j, result.certificate.alpha);
    if (args.with_oracle) {
      detmax::Selection oracle = detmax::msd_oracle(inst, args.budget);
      report.oracle_logdet = oracle.logdet.log();
      report.ratio = std::exp(result.selection.logdet.log() - oracle.logdet.log());
    }
  } else if (args.problem == "mvs") {
    detmax::MvsInstance inst{file.as_points(), args.j};
    detmax::MvsOptions options;
    options.target_alpha = args.alpha;
    options.max_iters = args.max_iters;
    options.seed = args.seed;
    detmax::MvsSolution result = detmax::mvs_approx(inst, options);
    report.j = args.j;
    report.method = "derandomized";
    report.indices = result.vertices;
    report.volume = result.volume;
    report.alpha = result.max_alpha;
    if (args.with_oracle) {
      detmax::MvsSolution oracle = detmax::mvs_oracle(inst, args.budget);
      report.oracle_volume = oracle.volume;
      report.ratio = oracle.volume > 0.0 ? result.volume / oracle.volume : 1.0;
    }
  } else { // detlb2
    detmax::MsdOptions options;
    options.target_alpha = args.alpha;
    options.max_iters = args.max_iters;
    options.seed = args.seed;
    Eigen::MatrixXd a = file.kind == detmax::InstanceKind::Points
                            ? Eigen::MatrixXd(file.payload.transpose())
                            : file.payload;
    detmax::SweepResult sweep = detmax::detlb2_sweep(a, options);
    report.method = "derandomized";
    report.best_j = sweep.best_j;
    report.value = sweep.value;
    if (verbose_logging())
      for (const auto& entry : sweep.entries)
        std::cerr << "detlb2 j=" << entry.j << " ok=" << entry.ok
                  << " value=" << entry.value
                  << (entry.note.empty() ? "" : " note=" + entry.note) << "\n";
  }
  report.wall_ms = elapsed_ms(start);
  emit_report(report, args.output);
  return 0;
}

int run_oracle(const SolveArgs& args) {
  const detmax::InstanceFile file = detmax::read_instance(args.input);
  detmax::RunReport report;
  report.instance = file.name.empty() ? args.input : file.name;
  report.problem = args.problem;
  report.method = "oracle";
  const auto start = std::chrono::steady_clock::now();

  if (args.problem == "msd") {
    detmax::MsdInstance inst{matrix_for_msd(file), args.j};
    detmax::Selection s = detmax::msd_oracle(inst, args.budget);
    report.j = args.j;
    report.indices = s.indices;
    report.logdet = s.logdet.log();
  } else if (args.problem == "mvs") {
    detmax::MvsInstance inst{file.as_points(), args.j};
    detmax::MvsSolution s = detmax::mvs_oracle(inst, args.budget);
    report.j = args.j;
    report.indices = s.vertices;
    report.volume = s.volume;
  } else {
    throw detmax::InvalidInput("the oracle supports --problem msd or mvs");
  }
  report.wall_ms = elapsed_ms(start);
  emit_report(report, args.output);
  return 0;
}

struct GenArgs {
  std::string kind;
  int n = 0;
  int d = 0;
  int j = 0;
  std::uint64_t seed = 0;
  std::string output;
};

int run_gen(const GenArgs& args) {
  const int j = args.j > 0 ? args.j : args.d;
  detmax::InstanceFile file = detmax::gen_instance(args.kind, args.n, args.d, j, args.seed);
  detmax::write_instance(args.output, file);
  if (verbose_logging())
    std::cerr << "wrote " << to_string(file.kind) << " instance to " << args.output
              << "\n";
  return 0;
}

struct BenchArgs {
  std::vector<int> ns;
  std::vector<int> ds;
  std::vector<int> js;
  int instances = 20;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  int max_iters = 5000;
  long long budget = detmax::kDefaultSubsetBudget;
  std::string output = "bench.kv";
  std::string text = "bench.txt";
};

int run_bench(const BenchArgs& args) {
  detmax::BenchConfig config;
  config.ns = args.ns;
  config.ds = args.ds;
  config.js = args.js;
  config.instances = args.instances;
  config.seed = args.seed;
  config.target_alpha = args.alpha;
  config.max_iters = args.max_iters;
  config.budget = args.budget;

  detmax::BenchReport report =
      detmax::run_bench(config, verbose_logging() ? &std::cerr : nullptr);

  std::ofstream machine(args.output);
  if (!machine) throw detmax::IoError("cannot open for writing: " + args.output);
  machine << report.machine_lines();
  std::ofstream text(args.text);
  if (!text) throw detmax::IoError("cannot open for writing: " + args.text);
  text << report.text_table();

  std::cout << report.text_table();
  std::cout << "wall_seconds " << report.wall_seconds << " (not part of the report files)\n";
  return report.total_violations == 0 ? 0 : 1;
}

constexpr const char* kReportKeyHelp =
    "Report lines are key=value records with keys drawn from: instance problem j "
    "method indices logdet det alpha floor oracle_logdet oracle_volume ratio "
    "volume best_j value wall_ms. Indices are 1-based.";

} // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("detmax - approximate determinant maximization with "
                           "certified gaps.\n") +
               kReportKeyHelp};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Approximately solve a subset-determinant or simplex-volume instance");
  solve->add_option("--problem", solve_args.problem, "msd | mvs | detlb2")
      ->check(CLI::IsMember({"msd", "mvs", "detlb2"}))
      ->capture_default_str();
  CLI::Option* solve_j =
      solve->add_option("--j", solve_args.j, "subset size / simplex dimension");
  solve->add_option("--input", solve_args.input, "instance file")->required();
  solve->add_option("--mode", solve_args.mode, "sampled | derandomized")
      ->check(CLI::IsMember({"sampled", "derandomized"}))
      ->capture_default_str();
  solve->add_option("--alpha", solve_args.alpha, "target certified gap")
      ->capture_default_str();
  solve->add_option("--max-iters", solve_args.max_iters, "solver iteration budget")
      ->capture_default_str();
  solve->add_option("--seed", solve_args.seed, "sampling seed");
  solve->add_option("--budget", solve_args.budget, "oracle subset budget")
      ->capture_default_str();
  solve->add_option("--output", solve_args.output, "also write the report line here");
  solve->add_flag("--with-oracle", solve_args.with_oracle,
                  "run the exact oracle and report the achieved ratio");

  SolveArgs oracle_args;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Exact brute-force solution by subset enumeration");
  oracle->add_option("--problem", oracle_args.problem, "msd | mvs")
      ->check(CLI::IsMember({"msd", "mvs"}))
      ->capture_default_str();
  CLI::Option* oracle_j =
      oracle->add_option("--j", oracle_args.j, "subset size / simplex dimension");
  oracle->add_option("--input", oracle_args.input, "instance file")->required();
  oracle->add_option("--budget", oracle_args.budget, "subset enumeration budget")
      ->capture_default_str();
  oracle->add_option("--output", oracle_args.output, "also write the report line here");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance file");
  gen->add_option("--kind", gen_args.kind,
                  "gaussian | correlated | near-degenerate | psd")
      ->required()
      ->check(CLI::IsMember({"gaussian", "correlated", "near-degenerate", "psd"}));
  gen->add_option("--n", gen_args.n, "number of points / matrix order")->required();
  gen->add_option("--d", gen_args.d, "ambient dimension")->required();
  gen->add_option("--j", gen_args.j,
                  "target subset size (near-degenerate uses a (j-1)-dim subspace)");
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--output", gen_args.output, "output path")->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "Run an (n, d, j) grid of random instances against the oracle");
  bench->add_option("--n-list", bench_args.ns, "matrix orders")->delimiter(',');
  bench->add_option("--d-list", bench_args.ds, "point dimensions")->delimiter(',');
  bench->add_option("--j-list", bench_args.js, "subset sizes")->delimiter(',');
  bench->add_option("--instances", bench_args.instances, "instances per cell")
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "grid seed");
  bench->add_option("--alpha", bench_args.alpha, "target certified gap")
      ->capture_default_str();
  bench->add_option("--max-iters", bench_args.max_iters, "solver iteration budget")
      ->capture_default_str();
  bench->add_option("--budget", bench_args.budget, "oracle subset budget")
      ->capture_default_str();
  bench->add_option("--output", bench_args.output, "machine-readable report path")
      ->capture_default_str();
  bench->add_option("--text", bench_args.text, "plain-text report path")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (solve->parsed()) {
      if (solve_args.problem != "detlb2" && solve_j->count() == 0)
        throw CLI::RequiredError("--j");
      return run_solve(solve_args);
    }
    if (oracle->parsed()) {
      if (oracle_j->count() == 0) throw CLI::RequiredError("--j");
      return run_oracle(oracle_args);
    }
    if (gen->parsed()) return run_gen(gen_args);
    if (bench->parsed()) return run_bench(bench_args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  } catch (const detmax::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
