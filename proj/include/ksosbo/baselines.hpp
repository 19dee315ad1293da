#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ksosbo/ksos.hpp"
#include "ksosbo/types.hpp"

namespace ksosbo {

/// Wraps an objective, counts calls and tracks the incumbent. Rejects
/// out-of-box points and calls past the budget.
class CountingObjective {
 public:
  CountingObjective(Objective f, const BoxDomain& box, int budget);

  double operator()(const Point& x);
  int count() const { return count_; }
  int budget() const { return budget_; }
  int remaining() const { return budget_ - count_; }
  const Point& best_x() const { return best_x_; }
  double best_value() const { return best_value_; }

 private:
  Objective f_;
  BoxDomain box_;
  int budget_;
  int count_ = 0;
  Point best_x_;
  double best_value_;
};

struct OptimizeResult {
  Point x;
  double value = 0.0;
  int evaluations = 0;
  std::optional<KsosSolution> ksos;
};

struct CmaesConfig {
  int pop_size = 8;
  double sigma0_factor = 0.3;

  void validate() const;
};

struct DeConfig {
  int popsize_multiplier = 2;
  int maxiter = 5;
  double mutation_lo = 0.5;
  double mutation_hi = 1.0;
  double recombination = 0.7;

  void validate() const;
  /// popsize_multiplier * d, raised to 4 when smaller.
  int population(int d) const;
};

/// Evaluates `budget` scrambled Sobol points; first index wins ties.
OptimizeResult sobol_search(const Objective& f, const BoxDomain& box, int budget, Rng& rng);

/// (mu/mu_w, lambda)-CMA-ES with tutorial default rates, box handled by
/// clamping. Runs floor(budget / pop_size) generations.
OptimizeResult cmaes_minimize(const Objective& f, const BoxDomain& box, int budget, const CmaesConfig& cfg, Rng& rng);

/// DE best/1/bin with dithered F and Latin-hypercube start. Uses
/// population * (1 + maxiter) evaluations, fewer generations if that exceeds
/// the budget.
OptimizeResult de_minimize(const Objective& f, const BoxDomain& box, int budget, const DeConfig& cfg, Rng& rng);

enum class OptimizerKind { ksos, sobol, cmaes, de };
std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_kind_from_string(std::string_view name);

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::ksos;
  KsosConfig ksos;
  CmaesConfig cmaes;
  DeConfig de;
  /// Name used in records; defaults to to_string(kind).
  std::string label;

  std::string name() const { return label.empty() ? to_string(kind) : label; }
  void validate() const;
};

/// Runs the configured optimizer with a counting wrapper; the result's
/// `evaluations` is the counted number of objective calls.
OptimizeResult optimize(const OptimizerSpec& spec, const Objective& f, const BoxDomain& box, int budget, Rng& rng);

}  // namespace ksosbo
