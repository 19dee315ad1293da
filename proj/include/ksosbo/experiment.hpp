#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksosbo/bo.hpp"
#include "ksosbo/metrics.hpp"

namespace ksosbo {

struct BenchmarkEntry {
  std::string name;
  int dim = 0;
};

struct ExperimentSpec {
  std::vector<BenchmarkEntry> benchmarks;
  std::vector<OptimizerSpec> optimizers;
  /// Everything except `optimizer`, which comes from `optimizers`.
  BoConfig base;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};

  void validate() const;
};

/// Parses the JSON config. Unknown keys anywhere raise ConfigError.
ExperimentSpec parse_experiment(const nlohmann::json& j);
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// Fully resolved config (defaults filled in); parse_experiment(to_json(s)) == s.
nlohmann::json to_json(const ExperimentSpec& spec);

/// FNV-1a of the compact resolved config.
std::string config_fingerprint(const ExperimentSpec& spec);

struct ExperimentResult {
  std::vector<SummaryRow> summary;
  int runs_total = 0;
  int runs_failed = 0;
};

using ProgressFn = std::function<void(const RunRecord&)>;

/// Runs every (benchmark, optimizer, seed) on a pool of `workers` threads and
/// writes run CSVs, diagnostics, summary.csv, failures.csv and manifest.json.
ExperimentResult run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir, int workers = 1,
                                const ProgressFn& progress = {});

/// Recomputes the summary of an output directory from its manifest and run CSVs.
std::vector<SummaryRow> summarize_directory(const std::filesystem::path& dir);

struct VerifyReport {
  int rows_checked = 0;
  std::vector<std::string> discrepancies;
  bool ok() const { return discrepancies.empty(); }
};

VerifyReport verify_directory(const std::filesystem::path& dir);

}  // namespace ksosbo
