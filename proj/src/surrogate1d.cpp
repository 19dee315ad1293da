#include "ksosbo/surrogate1d.hpp"

#include <fstream>
#include <memory>

#include "ksosbo/acquisition.hpp"
#include "ksosbo/bo.hpp"
#include "ksosbo/errors.hpp"
#include "ksosbo/records_io.hpp"

namespace ksosbo {

Surrogate1dResult surrogate_1d(const Surrogate1dOptions& opts) {
  if (opts.grid < 2) throw ConfigError("surrogate1d grid needs at least 2 points");
  const Benchmark bm = make_benchmark(benchmark_from_string(opts.benchmark), 1);

  BoConfig cfg;
  cfg.n_init = opts.n_init;
  cfg.n_iters = opts.steps;
  cfg.budget = opts.budget;
  cfg.acquisition.kind = AcquisitionKind::ei;
  cfg.acquisition.xi = opts.xi;
  cfg.optimizer.kind = OptimizerKind::ksos;
  cfg.optimizer.ksos.kernel_kind = opts.kernel;
  cfg.optimizer.ksos.lambda_reg = opts.lambda_reg;
  cfg.optimizer.ksos.lambda_span_factor = opts.lambda_span_factor;
  const RunRecord rec = run_bo(bm, cfg, opts.seed);
  if (rec.failed) throw NumericalError("surrogate1d: BO run failed: " + rec.error);

  Dataset data;
  data.X.resize(static_cast<Eigen::Index>(rec.rows.size()), 1);
  data.y.resize(static_cast<Eigen::Index>(rec.rows.size()));
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    data.X(static_cast<Eigen::Index>(i), 0) = rec.rows[i].query(0);
    data.y(static_cast<Eigen::Index>(i)) = rec.rows[i].observed;
  }
  Rng gp_rng = make_stream(opts.seed, Stream::gp_restarts);
  GpFitOptions fit;
  fit.noise_factor = cfg.noise_factor;
  auto model = std::make_shared<const GpModel>(fit_gp(data, fit, gp_rng));
  const AcquisitionObjective acq(model, cfg.acquisition);

  Rng acq_rng = make_stream(opts.seed, Stream::acquisition);
  const Objective f = [&acq](const Point& x) { return acq(x); };
  const KsosResult k = ksos_minimize(f, bm.box, opts.budget, cfg.optimizer.ksos, acq_rng, true);

  Surrogate1dResult r;
  r.solution = k.solution;
  auto surrogate_ei = [&](const Point& x) { return k.solution.surrogate ? -(*k.solution.surrogate)(x) : 0.0; };
  const double lo = bm.box.lower()(0);
  const double hi = bm.box.upper()(0);
  r.grid_max_ei = 0.0;
  for (int i = 0; i < opts.grid; ++i) {
    const Point x = Point::Constant(1, lo + (hi - lo) * i / (opts.grid - 1));
    r.grid_x.push_back(x(0));
    r.grid_ei.push_back(acq.ei(x));
    r.grid_surrogate_ei.push_back(surrogate_ei(x));
    r.grid_max_ei = std::max(r.grid_max_ei, r.grid_ei.back());
  }
  r.best_sample_ei = 0.0;
  for (Eigen::Index i = 0; i < k.candidates.rows(); ++i) {
    const Point x = k.candidates.row(i).transpose();
    r.sample_x.push_back(x(0));
    r.sample_ei.push_back(acq.ei(x));
    r.sample_surrogate_ei.push_back(surrogate_ei(x));
    r.best_sample_ei = std::max(r.best_sample_ei, r.sample_ei.back());
  }
  r.recovered_x = k.x_next(0);
  r.recovered_ei = acq.ei(k.x_next);
  r.recovered_surrogate_ei = surrogate_ei(k.x_next);
  return r;
}

void write_surrogate_csv(const std::filesystem::path& path, const Surrogate1dResult& r) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "kind,x,ei,surrogate_ei\n";
  auto emit = [&](const char* kind, double x, double ei, double s) {
    out << kind << ',' << format_double(x) << ',' << format_double(ei) << ',' << format_double(s) << '\n';
  };
  for (std::size_t i = 0; i < r.grid_x.size(); ++i) emit("grid", r.grid_x[i], r.grid_ei[i], r.grid_surrogate_ei[i]);
  for (std::size_t i = 0; i < r.sample_x.size(); ++i) {
    emit("sample", r.sample_x[i], r.sample_ei[i], r.sample_surrogate_ei[i]);
  }
  emit("recovered", r.recovered_x, r.recovered_ei, r.recovered_surrogate_ei);
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace ksosbo
