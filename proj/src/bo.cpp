#include "ksosbo/bo.hpp"

#include <chrono>
#include <memory>

#include "ksosbo/errors.hpp"
#include "ksosbo/gp.hpp"

namespace ksosbo {

void BoConfig::validate(int dim) const {
  if (n_init < 2) throw ConfigError("n_init must be at least 2");
  if (n_iters < 0) throw ConfigError("n_iters must be non-negative");
  if (budget < 2) throw ConfigError("budget must be at least 2");
  if (!(noise_factor >= 0.0)) throw ConfigError("noise_factor must be non-negative");
  if (gp_restarts < 0) throw ConfigError("gp_restarts must be non-negative");
  acquisition.validate();
  optimizer.validate();
  if (optimizer.kind == OptimizerKind::cmaes && budget < optimizer.cmaes.pop_size) {
    throw ConfigError("budget is smaller than the CMA-ES population");
  }
  if (optimizer.kind == OptimizerKind::de && budget < optimizer.de.population(dim)) {
    throw ConfigError("budget is smaller than the DE population");
  }
  if (init_design == SamplingKind::sobol && dim > SobolSequence::kMaxDim) {
    throw ConfigError("sobol initial design supports at most 16 dimensions");
  }
}

PointSet initial_design(int n_init, const BoxDomain& box, SamplingKind kind, Rng& rng) {
  return scale_to_box(sample_unit(kind, n_init, box.dim(), rng), box);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool already_sampled(const PointSet& X, int n, const Point& x) {
  for (int i = 0; i < n; ++i) {
    if ((X.row(i).transpose() - x).cwiseAbs().maxCoeff() == 0.0) return true;
  }
  return false;
}

}  // namespace

RunRecord run_bo(const Benchmark& benchmark, const BoConfig& cfg, std::uint64_t seed) {
  cfg.validate(benchmark.dim);
  const double f_star = benchmark.require_f_star();
  const BoxDomain& box = benchmark.box;

  RunRecord rec;
  rec.benchmark = to_string(benchmark.name);
  rec.dim = benchmark.dim;
  rec.optimizer = cfg.optimizer.name();
  rec.acquisition = to_string(cfg.acquisition.kind);
  rec.seed = seed;

  Rng init_rng = make_stream(seed, Stream::init_design);
  Rng acq_rng = make_stream(seed, Stream::acquisition);
  Rng gp_rng = make_stream(seed, Stream::gp_restarts);
  Rng noise_rng = make_stream(seed, Stream::noise);
  Rng perturb_rng = make_stream(seed, Stream::perturb);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  const int total = cfg.n_init + cfg.n_iters;
  Dataset data;
  data.X.resize(total, benchmark.dim);
  data.y.resize(total);
  Eigen::VectorXd truth(total);
  int n = 0;
  double cum = 0.0;
  double best_obs = 0.0;
  double best_truth = 0.0;

  auto observe = [&](const Point& x) {
    const double f = evaluate(benchmark, x);
    double y = f;
    if (cfg.inject_observation_noise && n > 0) {
      y += cfg.noise_factor * population_std(data.y.head(n)) * normal(noise_rng);
    }
    data.X.row(n) = x.transpose();
    data.y(n) = y;
    truth(n) = f;
    if (n == 0 || y < best_obs) {
      best_obs = y;
      best_truth = f;
    }
    ++n;
  };
  auto push_row = [&](double wall, std::optional<IterationDiagnostics> diag) {
    cum += wall;
    RunRow row;
    row.iteration = n;
    row.query = data.X.row(n - 1).transpose();
    row.observed = data.y(n - 1);
    row.best_so_far = best_obs;
    row.regret = best_truth - f_star;
    row.iter_wall_seconds = wall;
    row.cum_wall_seconds = cum;
    row.diagnostics = std::move(diag);
    rec.rows.push_back(std::move(row));
  };

  try {
    const PointSet design = initial_design(cfg.n_init, box, cfg.init_design, init_rng);
    for (int i = 0; i < cfg.n_init; ++i) {
      const auto t0 = Clock::now();
      observe(design.row(i).transpose());
      push_row(seconds_since(t0), std::nullopt);
    }

    std::optional<GpHyperparams> warm;
    for (int it = 0; it < cfg.n_iters; ++it) {
      const auto t0 = Clock::now();
      Dataset current{data.X.topRows(n), data.y.head(n)};
      GpFitOptions fit_opts;
      fit_opts.noise_factor = cfg.noise_factor;
      fit_opts.random_restarts = cfg.gp_restarts;
      fit_opts.warm_start = warm;
      auto model = std::make_shared<const GpModel>(fit_gp(current, fit_opts, gp_rng));
      warm = model->params();

      const AcquisitionObjective acq(model, cfg.acquisition);
      const Objective f = [&acq](const Point& x) { return acq(x); };
      OptimizeResult opt = optimize(cfg.optimizer, f, box, cfg.budget, acq_rng);

      Point x = box.project(opt.x);
      while (already_sampled(data.X, n, x)) {
        Point jitter(x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) jitter(j) = sym(perturb_rng);
        x = box.project(x + 1e-8 * jitter.cwiseProduct(box.range()));
      }
      observe(x);

      IterationDiagnostics diag;
      diag.acquisition_evaluations = opt.evaluations;
      diag.gp_constant = model->params().constant_value;
      diag.gp_lengthscale = model->params().lengthscale;
      if (opt.ksos) {
        diag.newton_iters = opt.ksos->newton_iters;
        diag.residual_norm = opt.ksos->residual_norm;
        diag.status = opt.ksos->status;
        diag.used_fallback = opt.ksos->used_fallback;
      }
      push_row(seconds_since(t0), diag);
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace ksosbo
