#include "ksosbo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "ksosbo/errors.hpp"
#include "ksosbo/sampling.hpp"

namespace ksosbo {

CountingObjective::CountingObjective(Objective f, const BoxDomain& box, int budget)
    : f_(std::move(f)), box_(box), budget_(budget), best_value_(std::numeric_limits<double>::infinity()) {}

double CountingObjective::operator()(const Point& x) {
  if (count_ >= budget_) throw InputError("evaluation budget of " + std::to_string(budget_) + " exceeded");
  if (!box_.contains(x)) throw InputError("optimizer evaluated a point outside the box");
  ++count_;
  const double v = f_(x);
  if (v < best_value_ || best_x_.size() == 0) {
    best_value_ = v;
    best_x_ = x;
  }
  return v;
}

void CmaesConfig::validate() const {
  if (pop_size < 2) throw ConfigError("cmaes pop_size must be at least 2");
  if (!(sigma0_factor > 0.0)) throw ConfigError("cmaes sigma0_factor must be positive");
}

void DeConfig::validate() const {
  if (popsize_multiplier < 1) throw ConfigError("de popsize_multiplier must be positive");
  if (maxiter < 0) throw ConfigError("de maxiter must be non-negative");
  if (!(mutation_lo < mutation_hi) || !(mutation_lo > 0.0)) throw ConfigError("de mutation range must be 0 < lo < hi");
  if (!(recombination > 0.0 && recombination <= 1.0)) throw ConfigError("de recombination must lie in (0, 1]");
}

int DeConfig::population(int d) const { return std::max(4, popsize_multiplier * d); }

OptimizeResult sobol_search(const Objective& f, const BoxDomain& box, int budget, Rng& rng) {
  if (budget < 1) throw ConfigError("sobol search budget must be at least 1");
  const PointSet pts = scale_to_box(sobol_points(budget, box.dim(), rng), box);
  OptimizeResult res;
  res.value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < budget; ++i) {
    const Point x = pts.row(i).transpose();
    const double v = f(x);
    if (i == 0 || v < res.value) {
      res.value = v;
      res.x = x;
    }
  }
  res.evaluations = budget;
  return res;
}

OptimizeResult cmaes_minimize(const Objective& f, const BoxDomain& box, int budget, const CmaesConfig& cfg, Rng& rng) {
  cfg.validate();
  const int lambda = cfg.pop_size;
  if (budget < lambda) throw ConfigError("cmaes budget must be at least pop_size");
  const int n = box.dim();
  const double nd = n;
  const int mu = lambda / 2;

  Eigen::VectorXd w(mu);
  for (int i = 0; i < mu; ++i) w(i) = std::log((lambda + 1) / 2.0) - std::log(i + 1.0);
  w /= w.sum();
  const double mueff = 1.0 / w.squaredNorm();
  const double cc = (4.0 + mueff / nd) / (nd + 4.0 + 2.0 * mueff / nd);
  const double cs = (mueff + 2.0) / (nd + mueff + 5.0);
  const double c1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mueff);
  const double cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((nd + 2.0) * (nd + 2.0) + mueff));
  const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (nd + 1.0)) - 1.0) + cs;
  const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
  const double sigma0 = cfg.sigma0_factor * box.mean_range();

  Point m = box.center();
  double sigma = sigma0;
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd B = C;
  Eigen::VectorXd D = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd ps = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd pc = Eigen::VectorXd::Zero(n);
  std::normal_distribution<double> normal;

  OptimizeResult res;
  res.value = std::numeric_limits<double>::infinity();
  const int generations = budget / lambda;
  int gen_since_restart = 0;
  Eigen::MatrixXd Y(n, lambda);
  std::vector<double> fit(lambda);
  for (int g = 0; g < generations; ++g, ++gen_since_restart) {
    for (int k = 0; k < lambda; ++k) {
      Eigen::VectorXd z(n);
      for (int j = 0; j < n; ++j) z(j) = normal(rng);
      const Point x = box.project(m + sigma * (B * D.asDiagonal() * z));
      Y.col(k) = (x - m) / sigma;
      fit[k] = f(x);
      ++res.evaluations;
      if (fit[k] < res.value) {
        res.value = fit[k];
        res.x = x;
      }
    }
    std::vector<int> order(lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fit[a] < fit[b]; });

    Eigen::VectorXd yw = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < mu; ++i) yw += w(i) * Y.col(order[i]);
    m += sigma * yw;

    const Eigen::VectorXd c_inv_sqrt_yw = B * D.cwiseInverse().asDiagonal() * B.transpose() * yw;
    ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * c_inv_sqrt_yw;
    const double ps_norm = ps.norm();
    const bool hsig =
        ps_norm / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * (gen_since_restart + 1))) / chi_n < 1.4 + 2.0 / (nd + 1.0);
    pc = (1.0 - cc) * pc + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * yw;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) rank_mu += w(i) * Y.col(order[i]) * Y.col(order[i]).transpose();
    C = (1.0 - c1 - cmu) * C + c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * C) + cmu * rank_mu;
    C = 0.5 * (C + C.transpose());
    sigma *= std::exp((cs / damps) * (ps_norm / chi_n - 1.0));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    const bool degenerate = eig.info() != Eigen::Success || !eig.eigenvalues().allFinite() ||
                            eig.eigenvalues().minCoeff() <= 0.0 || !std::isfinite(sigma) ||
                            eig.eigenvalues().maxCoeff() > 1e14 * eig.eigenvalues().minCoeff() ||
                            sigma * std::sqrt(eig.eigenvalues().maxCoeff()) < 1e-12 * box.mean_range();
    if (degenerate) {
      m = res.x;
      sigma = sigma0;
      C.setIdentity();
      B.setIdentity();
      D.setOnes();
      ps.setZero();
      pc.setZero();
      gen_since_restart = -1;
      continue;
    }
    B = eig.eigenvectors();
    D = eig.eigenvalues().cwiseSqrt();
  }
  return res;
}

OptimizeResult de_minimize(const Objective& f, const BoxDomain& box, int budget, const DeConfig& cfg, Rng& rng) {
  cfg.validate();
  const int d = box.dim();
  const int np = cfg.population(d);
  if (budget < np) throw ConfigError("de budget must cover the initial population of " + std::to_string(np));
  const int generations = std::min(cfg.maxiter, budget / np - 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // Latin hypercube: one point per stratum in every coordinate.
  PointSet unit(np, d);
  for (int j = 0; j < d; ++j) {
    std::vector<int> perm(np);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < np; ++i) unit(i, j) = (perm[i] + u01(rng)) / np;
  }
  PointSet pop = scale_to_box(unit, box);

  OptimizeResult res;
  std::vector<double> fit(np);
  int best = 0;
  for (int i = 0; i < np; ++i) {
    fit[i] = f(pop.row(i).transpose());
    if (fit[i] < fit[best]) best = i;
  }
  res.evaluations = np;

  std::uniform_real_distribution<double> mutation(cfg.mutation_lo, cfg.mutation_hi);
  std::uniform_int_distribution<int> pick(0, np - 1);
  std::uniform_int_distribution<int> pick_dim(0, d - 1);
  for (int g = 0; g < generations; ++g) {
    const double F = mutation(rng);
    for (int i = 0; i < np; ++i) {
      int a, b;
      do a = pick(rng); while (a == i);
      do b = pick(rng); while (b == i || b == a);
      const int forced = pick_dim(rng);
      Point trial = pop.row(i).transpose();
      for (int j = 0; j < d; ++j) {
        if (j != forced && !(u01(rng) < cfg.recombination)) continue;
        double v = pop(best, j) + F * (pop(a, j) - pop(b, j));
        if (v < box.lower()(j) || v > box.upper()(j)) {
          v = box.lower()(j) + u01(rng) * (box.upper()(j) - box.lower()(j));
        }
        trial(j) = v;
      }
      const double ft = f(trial);
      ++res.evaluations;
      if (ft < fit[i]) {
        fit[i] = ft;
        pop.row(i) = trial.transpose();
        if (ft < fit[best]) best = i;
      }
    }
  }
  res.x = pop.row(best).transpose();
  res.value = fit[best];
  return res;
}

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::ksos: return "ksos";
    case OptimizerKind::sobol: return "sobol";
    case OptimizerKind::cmaes: return "cmaes";
    case OptimizerKind::de: return "de";
  }
  return "unknown";
}

OptimizerKind optimizer_kind_from_string(std::string_view name) {
  if (name == "ksos") return OptimizerKind::ksos;
  if (name == "sobol") return OptimizerKind::sobol;
  if (name == "cmaes") return OptimizerKind::cmaes;
  if (name == "de") return OptimizerKind::de;
  throw ConfigError("unknown optimizer kind '" + std::string(name) + "'");
}

void OptimizerSpec::validate() const {
  switch (kind) {
    case OptimizerKind::ksos: ksos.validate(); break;
    case OptimizerKind::cmaes: cmaes.validate(); break;
    case OptimizerKind::de: de.validate(); break;
    case OptimizerKind::sobol: break;
  }
}

OptimizeResult optimize(const OptimizerSpec& spec, const Objective& f, const BoxDomain& box, int budget, Rng& rng) {
  CountingObjective counted(f, box, budget);
  Objective g = [&counted](const Point& x) { return counted(x); };
  OptimizeResult res;
  switch (spec.kind) {
    case OptimizerKind::sobol: res = sobol_search(g, box, budget, rng); break;
    case OptimizerKind::cmaes: res = cmaes_minimize(g, box, budget, spec.cmaes, rng); break;
    case OptimizerKind::de: res = de_minimize(g, box, budget, spec.de, rng); break;
    case OptimizerKind::ksos: {
      KsosResult k = ksos_minimize(g, box, budget, spec.ksos, rng);
      res.x = k.x_next;
      // The recovered point is not evaluated unless the guard checked it.
      res.value = std::numeric_limits<double>::quiet_NaN();
      res.ksos = std::move(k.solution);
      break;
    }
  }
  res.evaluations = counted.count();
  return res;
}

}  // namespace ksosbo
