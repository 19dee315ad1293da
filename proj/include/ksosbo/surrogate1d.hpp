#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ksosbo/ksos.hpp"

namespace ksosbo {

struct Surrogate1dOptions {
  std::string benchmark = "sum_of_different_powers";
  int steps = 9;
  KernelKind kernel = KernelKind::gaussian;
  std::uint64_t seed = 0;
  int n_init = 12;
  int budget = 128;
  int grid = 10000;
  double xi = 0.01;
  std::optional<double> lambda_reg;
  std::optional<double> lambda_span_factor;
};

struct Surrogate1dResult {
  std::vector<double> grid_x, grid_ei, grid_surrogate_ei;
  std::vector<double> sample_x, sample_ei, sample_surrogate_ei;
  double recovered_x = 0.0;
  double recovered_ei = 0.0;
  double recovered_surrogate_ei = 0.0;
  double grid_max_ei = 0.0;
  double best_sample_ei = 0.0;
  KsosSolution solution;
};

/// Runs `steps` KSOS-BO iterations on the 1D benchmark, then solves the next
/// acquisition problem once more and tabulates the true EI and the KSOS
/// surrogate (sign flipped back to EI units) on a dense grid.
Surrogate1dResult surrogate_1d(const Surrogate1dOptions& opts);

/// Columns: kind (grid|sample|recovered), x, ei, surrogate_ei.
void write_surrogate_csv(const std::filesystem::path& path, const Surrogate1dResult& r);

}  // namespace ksosbo
