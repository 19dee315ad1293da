#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ksosbo/bo.hpp"

namespace ksosbo {

double simple_regret(double best_so_far, double f_star);

/// Two-sided Student-t quantile t_{p, df}.
double t_quantile(double p, int df);

struct AggregateSeries {
  std::vector<double> mean_regret;
  std::vector<double> ci_half_width;  // 95%, Student-t over runs
  std::vector<double> mean_cum_wall_seconds;
  int n_runs = 0;
  bool degenerate = false;  // a single run, so the interval has zero width
};

/// Per-iteration mean and 95% interval over equal-length runs.
AggregateSeries aggregate(const std::vector<const RunRecord*>& runs);
AggregateSeries aggregate(const std::vector<RunRecord>& runs);

/// (r_ref - r_K) / |r_ref| * 100; absent when r_ref is zero.
std::optional<double> improvement_pct(double r_k, double r_ref);

/// Earliest time whose regret is <= r_ref (step function, no interpolation).
std::optional<double> time_to_threshold(const std::vector<double>& times, const std::vector<double>& regrets,
                                        double r_ref);

/// (T_ref - T_K) / T_ref * 100; absent when either time is missing or T_ref is zero.
std::optional<double> runtime_improvement_pct(std::optional<double> t_ref, std::optional<double> t_k);

/// Dense ranks in ascending order of regret; rows ordered by (rank, name).
std::vector<std::pair<std::string, int>> rank_optimizers(const std::map<std::string, double>& final_mean_regrets);

struct SummaryRow {
  std::string benchmark;
  int dim = 0;
  std::string optimizer;
  double final_mean_regret = 0.0;
  double ci_half_width = 0.0;
  int rank = 0;
  std::optional<double> improvement_pct;
  std::optional<double> time_to_threshold_s;
  std::optional<double> runtime_improvement_pct;
};

struct OptimizerRuns {
  std::string optimizer;
  bool is_ksos = false;
  std::vector<const RunRecord*> runs;
};

/// Summary rows for one (benchmark, dim) group. The reference regret for a
/// KSOS row is the best final mean regret among the non-KSOS optimizers (all
/// other optimizers if there are none); time_to_threshold_s of every row is
/// measured against the reference of the first KSOS optimizer.
std::vector<SummaryRow> summarize_group(const std::string& benchmark, int dim, const std::vector<OptimizerRuns>& groups);

}  // namespace ksosbo
