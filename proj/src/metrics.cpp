#include "ksosbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <gsl/gsl_cdf.h>

#include "ksosbo/errors.hpp"

namespace ksosbo {

double simple_regret(double best_so_far, double f_star) { return best_so_far - f_star; }

double t_quantile(double p, int df) {
  if (df < 1) throw InputError("t_quantile: degrees of freedom must be positive");
  return gsl_cdf_tdist_Pinv(p, static_cast<double>(df));
}

AggregateSeries aggregate(const std::vector<const RunRecord*>& runs) {
  if (runs.empty()) throw InputError("aggregate: no runs");
  const std::size_t len = runs.front()->rows.size();
  for (const auto* r : runs) {
    if (r->rows.size() != len) {
      throw InputError("aggregate: runs have different lengths (" + std::to_string(len) + " vs " +
                       std::to_string(r->rows.size()) + ")");
    }
  }
  const int n = static_cast<int>(runs.size());
  AggregateSeries s;
  s.n_runs = n;
  s.degenerate = n < 2;
  const double t = n >= 2 ? t_quantile(0.975, n - 1) : 0.0;
  s.mean_regret.resize(len);
  s.ci_half_width.resize(len);
  s.mean_cum_wall_seconds.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    double wall = 0.0;
    for (const auto* r : runs) {
      sum += r->rows[i].regret;
      wall += r->rows[i].cum_wall_seconds;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto* r : runs) ss += (r->rows[i].regret - mean) * (r->rows[i].regret - mean);
    s.mean_regret[i] = mean;
    s.mean_cum_wall_seconds[i] = wall / n;
    s.ci_half_width[i] = n >= 2 ? t * std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
  }
  return s;
}

AggregateSeries aggregate(const std::vector<RunRecord>& runs) {
  std::vector<const RunRecord*> ptrs;
  for (const auto& r : runs) ptrs.push_back(&r);
  return aggregate(ptrs);
}

std::optional<double> improvement_pct(double r_k, double r_ref) {
  if (r_ref == 0.0) return std::nullopt;
  return (r_ref - r_k) / std::abs(r_ref) * 100.0;
}

std::optional<double> time_to_threshold(const std::vector<double>& times, const std::vector<double>& regrets,
                                        double r_ref) {
  if (times.size() != regrets.size()) throw InputError("time_to_threshold: series lengths differ");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (regrets[i] <= r_ref) return times[i];
  }
  return std::nullopt;
}

std::optional<double> runtime_improvement_pct(std::optional<double> t_ref, std::optional<double> t_k) {
  if (!t_ref || !t_k || *t_ref == 0.0) return std::nullopt;
  return (*t_ref - *t_k) / *t_ref * 100.0;
}

std::vector<std::pair<std::string, int>> rank_optimizers(const std::map<std::string, double>& final_mean_regrets) {
  if (final_mean_regrets.empty()) throw InputError("rank_optimizers: empty input");
  std::vector<std::pair<std::string, double>> items(final_mean_regrets.begin(), final_mean_regrets.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<std::pair<std::string, int>> out;
  int rank = 0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [name, v] : items) {
    if (out.empty() || v != prev) ++rank;
    prev = v;
    out.emplace_back(name, rank);
  }
  return out;
}

std::vector<SummaryRow> summarize_group(const std::string& benchmark, int dim,
                                        const std::vector<OptimizerRuns>& groups) {
  struct Stats {
    const OptimizerRuns* g;
    AggregateSeries agg;
  };
  std::vector<Stats> stats;
  std::map<std::string, double> finals;
  for (const auto& g : groups) {
    if (g.runs.empty()) continue;
    Stats s{&g, aggregate(g.runs)};
    if (s.agg.mean_regret.empty()) continue;
    finals[g.optimizer] = s.agg.mean_regret.back();
    stats.push_back(std::move(s));
  }
  std::vector<SummaryRow> rows;
  if (stats.empty()) return rows;
  std::map<std::string, int> rank;
  for (const auto& [name, r] : rank_optimizers(finals)) rank[name] = r;

  const bool any_baseline = std::any_of(stats.begin(), stats.end(), [](const Stats& s) { return !s.g->is_ksos; });
  auto reference_for = [&](const Stats& k) -> const Stats* {
    const Stats* ref = nullptr;
    for (const auto& s : stats) {
      if (&s == &k || (any_baseline && s.g->is_ksos)) continue;
      if (!ref || s.agg.mean_regret.back() < ref->agg.mean_regret.back()) ref = &s;
    }
    return ref;
  };

  auto hitting_time = [](const Stats& s, double r_ref) {
    return time_to_threshold(s.agg.mean_cum_wall_seconds, s.agg.mean_regret, r_ref);
  };

  std::optional<double> shared_threshold;
  for (const auto& s : stats) {
    if (!s.g->is_ksos) continue;
    if (const Stats* ref = reference_for(s)) shared_threshold = ref->agg.mean_regret.back();
    break;
  }

  for (const auto& s : stats) {
    SummaryRow row;
    row.benchmark = benchmark;
    row.dim = dim;
    row.optimizer = s.g->optimizer;
    row.final_mean_regret = s.agg.mean_regret.back();
    row.ci_half_width = s.agg.ci_half_width.back();
    row.rank = rank[s.g->optimizer];
    if (s.g->is_ksos) {
      if (const Stats* ref = reference_for(s)) {
        const double r_ref = ref->agg.mean_regret.back();
        row.improvement_pct = improvement_pct(row.final_mean_regret, r_ref);
        row.time_to_threshold_s = hitting_time(s, r_ref);
        row.runtime_improvement_pct = runtime_improvement_pct(hitting_time(*ref, r_ref), row.time_to_threshold_s);
      }
    } else if (shared_threshold) {
      row.time_to_threshold_s = hitting_time(s, *shared_threshold);
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.optimizer < b.optimizer;
  });
  return rows;
}

}  // namespace ksosbo
