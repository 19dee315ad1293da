#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ksosbo/errors.hpp"
#include "ksosbo/experiment.hpp"
#include "ksosbo/records_io.hpp"
#include "ksosbo/surrogate1d.hpp"

using namespace ksosbo;

namespace {

int cmd_run(const std::string& config, const std::string& out, int workers) {
  const ExperimentSpec spec = load_experiment(config);
  const std::size_t total = spec.benchmarks.size() * spec.optimizers.size() * spec.seeds.size();
  std::size_t done = 0;
  const auto res = run_experiment(spec, out, workers, [&](const RunRecord& r) {
    ++done;
    std::fprintf(stderr, "[%zu/%zu] %s d%d %s seed %llu: %s\n", done, total, r.benchmark.c_str(), r.dim,
                 r.optimizer.c_str(), static_cast<unsigned long long>(r.seed),
                 r.failed ? ("FAILED: " + r.error).c_str()
                          : ("final regret " + format_double(r.rows.back().regret)).c_str());
  });
  std::fprintf(stderr, "%d runs, %d failed; results in %s\n", res.runs_total, res.runs_failed, out.c_str());
  return res.runs_failed == 0 ? 0 : 3;
}

std::string na(const std::optional<double>& v) { return v ? format_double(*v) : kNa; }

int cmd_report(const std::string& in, const std::string& format) {
  const auto rows = read_summary_csv(std::filesystem::path(in) / "summary.csv");
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    for (const auto& r : rows) {
      arr.push_back({{"benchmark", r.benchmark},
                     {"dim", r.dim},
                     {"optimizer", r.optimizer},
                     {"final_mean_regret", r.final_mean_regret},
                     {"ci_half_width", r.ci_half_width},
                     {"rank", r.rank},
                     {"improvement_pct", opt(r.improvement_pct)},
                     {"time_to_threshold_s", opt(r.time_to_threshold_s)},
                     {"runtime_improvement_pct", opt(r.runtime_improvement_pct)}});
    }
    std::cout << arr.dump(2) << '\n';
    return 0;
  }
  for (std::size_t j = 0; j < kSummaryColumns.size(); ++j) std::cout << (j ? "," : "") << kSummaryColumns[j];
  std::cout << '\n';
  for (const auto& r : rows) {
    std::cout << r.benchmark << ',' << r.dim << ',' << r.optimizer << ',' << format_double(r.final_mean_regret) << ','
              << format_double(r.ci_half_width) << ',' << r.rank << ',' << na(r.improvement_pct) << ','
              << na(r.time_to_threshold_s) << ',' << na(r.runtime_improvement_pct) << '\n';
  }
  return 0;
}

int cmd_verify(const std::string& in) {
  const auto rep = verify_directory(in);
  for (const auto& d : rep.discrepancies) std::cout << "MISMATCH " << d << '\n';
  std::cout << rep.rows_checked << " summary rows checked, " << rep.discrepancies.size() << " discrepancies\n";
  return rep.ok() ? 0 : 1;
}

int cmd_surrogate(const Surrogate1dOptions& opts, const std::string& out) {
  const auto r = surrogate_1d(opts);
  write_surrogate_csv(out, r);
  std::fprintf(stderr, "recovered x = %.6g, EI = %.6g, dense max EI = %.6g, best sample EI = %.6g (%s)\n",
               r.recovered_x, r.recovered_ei, r.grid_max_ei, r.best_sample_ei, to_string(r.solution.status).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization with kernel sum-of-squares acquisition optimization"};
  app.require_subcommand(1);

  std::string config, out, in, format = "csv";
  int workers = 1;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--workers", workers, "Parallel runs")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Print the summary of an output directory");
  report->add_option("--in", in, "Output directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "Recompute the summary from the run CSVs and compare");
  verify->add_option("--in", in, "Output directory")->required()->check(CLI::ExistingDirectory);

  Surrogate1dOptions sopts;
  std::string kernel = "gaussian";
  double lambda_reg = -1.0;
  double lambda_span = -1.0;
  auto* surr = app.add_subcommand("surrogate1d", "Dense-grid EI and KSOS surrogate after a few BO steps (1D)");
  surr->add_option("--benchmark", sopts.benchmark, "Benchmark name")->required();
  surr->add_option("--steps", sopts.steps, "BO steps before the snapshot");
  surr->add_option("--out", out, "Output CSV")->required();
  surr->add_option("--kernel", kernel, "gaussian or laplace")->check(CLI::IsMember({"gaussian", "laplace"}));
  surr->add_option("--seed", sopts.seed, "Run seed");
  surr->add_option("--n-init", sopts.n_init, "Initial design size");
  surr->add_option("--budget", sopts.budget, "Acquisition evaluations");
  surr->add_option("--grid", sopts.grid, "Dense grid size");
  surr->add_option("--lambda-reg", lambda_reg, "Absolute trace penalty");
  surr->add_option("--lambda-span", lambda_span, "Trace penalty as a fraction of the sampled value range");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, out, workers);
    if (*report) return cmd_report(in, format);
    if (*verify) return cmd_verify(in);
    if (*surr) {
      sopts.kernel = kernel_kind_from_string(kernel);
      if (lambda_reg >= 0.0) sopts.lambda_reg = lambda_reg;
      if (lambda_span >= 0.0) sopts.lambda_span_factor = lambda_span;
      return cmd_surrogate(sopts, out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
