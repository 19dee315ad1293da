#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ksosbo/acquisition.hpp"
#include "ksosbo/baselines.hpp"
#include "ksosbo/benchmarks.hpp"
#include "ksosbo/sampling.hpp"

namespace ksosbo {

struct BoConfig {
  int n_init = 12;
  int n_iters = 400;
  AcquisitionParams acquisition;
  OptimizerSpec optimizer;
  int budget = 128;
  double noise_factor = 0.05;
  bool inject_observation_noise = false;
  SamplingKind init_design = SamplingKind::uniform;
  int gp_restarts = 4;

  void validate(int dim) const;
};

struct IterationDiagnostics {
  int acquisition_evaluations = 0;
  double gp_constant = 0.0;
  double gp_lengthscale = 0.0;
  std::optional<int> newton_iters;
  std::optional<double> residual_norm;
  std::optional<SolverStatus> status;
  bool used_fallback = false;
};

struct RunRow {
  int iteration = 0;  // 1-based evaluation index; the first n_init rows are the design
  Point query;
  double observed = 0.0;
  double best_so_far = 0.0;
  double regret = 0.0;
  double iter_wall_seconds = 0.0;
  double cum_wall_seconds = 0.0;
  std::optional<IterationDiagnostics> diagnostics;
};

struct RunRecord {
  std::string benchmark;
  int dim = 0;
  std::string optimizer;
  std::string acquisition;
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::vector<RunRow> rows;
  bool failed = false;
  std::string error;
};

/// n_init in-box points from the init_design stream.
PointSet initial_design(int n_init, const BoxDomain& box, SamplingKind kind, Rng& rng);

/// BO loop: fit the GP, optimize the acquisition with the configured
/// inner optimizer under `budget` evaluations, evaluate the benchmark, repeat.
/// Errors after validation end the run early with `failed` set.
RunRecord run_bo(const Benchmark& benchmark, const BoConfig& cfg, std::uint64_t seed);

}  // namespace ksosbo
