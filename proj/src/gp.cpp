#include "ksosbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <gsl/gsl_multimin.h>

#include "ksosbo/errors.hpp"
#include "ksosbo/kernels.hpp"

namespace ksosbo {

void Dataset::validate() const {
  if (y.size() == 0) throw InputError("dataset is empty");
  if (X.rows() != y.size()) throw InputError("dataset: X and y have different lengths");
  if (X.cols() < 1) throw InputError("dataset: points have zero dimension");
}

double population_std(const Eigen::VectorXd& y) {
  if (y.size() == 0) return 0.0;
  const double m = y.mean();
  return std::sqrt((y.array() - m).square().mean());
}

JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& a) {
  const double scale = a.diagonal().mean();
  std::vector<double> levels{0.0};
  for (double e = 1e-10; e <= 1.0001e-4; e *= 10.0) levels.push_back(e);
  for (double eps : levels) {
    Eigen::MatrixXd m = a;
    m.diagonal().array() += eps * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd l = llt.matrixL();
      if (l.diagonal().minCoeff() > 0.0 && l.allFinite()) return {std::move(l), eps * scale};
    }
  }
  std::ostringstream msg;
  msg << "Cholesky failed at jitter levels 0, 1e-10..1e-4 times mean diagonal " << scale;
  throw NumericalError(msg.str());
}

namespace {

KernelSpec matern(const GpHyperparams& p) { return {KernelKind::matern25, p.lengthscale, p.constant_value}; }

Eigen::MatrixXd covariance(const Dataset& data, const GpHyperparams& p) {
  Eigen::MatrixXd k = kernel_matrix(matern(p), data.X);
  k.diagonal().array() += p.noise_variance;
  return k;
}

}  // namespace

double log_marginal_likelihood(const Dataset& data, const GpHyperparams& params) {
  data.validate();
  const auto [l, jitter] = jittered_cholesky(covariance(data, params));
  const Eigen::VectorXd w = l.triangularView<Eigen::Lower>().solve(data.y);
  const double n = static_cast<double>(data.size());
  return -0.5 * w.squaredNorm() - l.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

GpModel::GpModel(Dataset data, GpHyperparams params) : data_(std::move(data)), params_(params) {
  data_.validate();
  auto [l, jitter] = jittered_cholesky(covariance(data_, params_));
  chol_ = std::move(l);
  jitter_ = jitter;
  alpha_ = chol_.transpose().triangularView<Eigen::Upper>().solve(
      chol_.triangularView<Eigen::Lower>().solve(data_.y));
}

GpModel::Prediction GpModel::posterior(const Point& x) const {
  if (x.size() != dim()) {
    throw InputError("posterior: expected dimension " + std::to_string(dim()) + ", got " + std::to_string(x.size()));
  }
  const KernelSpec spec = matern(params_);
  const Eigen::VectorXd ks = kernel_vector(spec, data_.X, x);
  const double mean = ks.dot(alpha_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(ks);
  const double var = spec.diagonal() - v.squaredNorm();
  return {mean, std::sqrt(std::max(var, 0.0)), var};
}

namespace {

struct FitContext {
  const Dataset* data;
  double noise_variance;
};

const double kLogCLo = std::log(kConstantLo);
const double kLogCHi = std::log(kConstantHi);
const double kLogLLo = std::log(kLengthscaleLo);
const double kLogLHi = std::log(kLengthscaleHi);

// Negative log marginal likelihood at the clamped point, plus a quadratic
// penalty for leaving the box so the simplex is pushed back inside.
double penalized_nll(const gsl_vector* v, void* params) {
  const auto* ctx = static_cast<const FitContext*>(params);
  const double a = gsl_vector_get(v, 0);
  const double b = gsl_vector_get(v, 1);
  const double ca = std::clamp(a, kLogCLo, kLogCHi);
  const double cb = std::clamp(b, kLogLLo, kLogLHi);
  const double penalty = 1e3 * ((a - ca) * (a - ca) + (b - cb) * (b - cb));
  try {
    const double lml = log_marginal_likelihood(*ctx->data, {std::exp(ca), std::exp(cb), ctx->noise_variance});
    if (!std::isfinite(lml)) return 1e300;
    return -lml + penalty;
  } catch (const NumericalError&) {
    return 1e300;
  }
}

std::pair<Eigen::Vector2d, double> simplex_search(FitContext& ctx, const Eigen::Vector2d& start, int max_iters) {
  gsl_multimin_function fn{&penalized_nll, 2, &ctx};
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* step = gsl_vector_alloc(2);
  gsl_vector_set(x, 0, start(0));
  gsl_vector_set(x, 1, start(1));
  gsl_vector_set_all(step, 0.5);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  for (int it = 0; it < max_iters; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-4) == GSL_SUCCESS) break;
  }
  Eigen::Vector2d best(gsl_vector_get(s->x, 0), gsl_vector_get(s->x, 1));
  const double val = s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  best(0) = std::clamp(best(0), kLogCLo, kLogCHi);
  best(1) = std::clamp(best(1), kLogLLo, kLogLHi);
  return {best, val};
}

}  // namespace

GpModel fit_gp(const Dataset& data, const GpFitOptions& opts, Rng& rng) {
  data.validate();
  if (!(opts.noise_factor >= 0.0)) throw ConfigError("noise_factor must be non-negative");
  const double sd = population_std(data.y);
  const double noise = std::max((opts.noise_factor * sd) * (opts.noise_factor * sd), 1e-10);
  FitContext ctx{&data, noise};

  std::vector<Eigen::Vector2d> starts;
  const GpHyperparams warm = opts.warm_start.value_or(GpHyperparams{});
  starts.emplace_back(std::clamp(std::log(warm.constant_value), kLogCLo, kLogCHi),
                      std::clamp(std::log(warm.lengthscale), kLogLLo, kLogLHi));
  std::uniform_real_distribution<double> uc(kLogCLo, kLogCHi);
  std::uniform_real_distribution<double> ul(kLogLLo, kLogLHi);
  for (int i = 0; i < opts.random_restarts; ++i) {
    const double a = uc(rng);
    const double b = ul(rng);
    starts.emplace_back(a, b);
  }

  Eigen::Vector2d best = starts.front();
  double best_val = std::numeric_limits<double>::infinity();
  for (const auto& s0 : starts) {
    gsl_vector_const_view view = gsl_vector_const_view_array(s0.data(), 2);
    const double v0 = penalized_nll(&view.vector, &ctx);
    if (v0 < best_val) {
      best_val = v0;
      best = s0;
    }
    const auto [x, v] = simplex_search(ctx, s0, opts.max_simplex_iters);
    gsl_vector_const_view xv = gsl_vector_const_view_array(x.data(), 2);
    const double vc = penalized_nll(&xv.vector, &ctx);
    (void)v;
    if (vc < best_val) {
      best_val = vc;
      best = x;
    }
  }
  if (!std::isfinite(best_val) || best_val >= 1e300) {
    throw NumericalError("fit_gp: marginal likelihood could not be evaluated at any start");
  }
  return GpModel(data, {std::exp(best(0)), std::exp(best(1)), noise});
}

}  // namespace ksosbo
