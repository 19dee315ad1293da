#include "ksosbo/ksos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ksosbo/errors.hpp"
#include "ksosbo/sampling.hpp"

namespace ksosbo {

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iters: return "max_iters";
    case SolverStatus::infeasible_numerics: return "infeasible_numerics";
  }
  return "unknown";
}

void KsosConfig::validate() const {
  if (kernel_kind == KernelKind::matern25) throw ConfigError("ksos kernel must be gaussian or laplace");
  if (!(lambda_scale > 0.0)) throw ConfigError("ksos lambda_scale must be positive");
  if (!(radius_factor > 0.0)) throw ConfigError("ksos radius_factor must be positive");
  if (lambda_reg && !(*lambda_reg >= 0.0)) throw ConfigError("ksos lambda_reg must be non-negative");
  if (lambda_span_factor && !(*lambda_span_factor >= 0.0)) throw ConfigError("ksos lambda_span_factor must be non-negative");
  if (lambda_reg && lambda_span_factor) throw ConfigError("ksos lambda_reg and lambda_span_factor are exclusive");
  if (!(solver_tol > 0.0)) throw ConfigError("ksos solver_tol must be positive");
  if (max_newton_iters < 1) throw ConfigError("ksos max_newton_iters must be positive");
}

double KsosSurrogate::operator()(const Point& x) const {
  const Eigen::VectorXd v = W.transpose() * kernel_vector(kernel, points, x);
  return c + v.dot(Q * v);
}

double smoothing_sigma(double radius, int n, int d, double lambda_scale) {
  if (!(radius > 0.0) || n < 1 || d < 1) throw InputError("smoothing_sigma: need radius > 0, n >= 1, d >= 1");
  return lambda_scale * radius / std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d));
}

double default_lambda_reg(const Eigen::VectorXd& values) { return 1e-8 * (1.0 + values.cwiseAbs().maxCoeff()); }

double resolve_lambda_reg(const KsosConfig& cfg, const Eigen::VectorXd& values) {
  if (cfg.lambda_reg) return *cfg.lambda_reg;
  if (cfg.lambda_span_factor) return *cfg.lambda_span_factor * (values.maxCoeff() - values.minCoeff());
  return default_lambda_reg(values);
}

namespace {

constexpr double kFirstJitter = 1e-10;
constexpr double kLastJitter = 1e-6;
constexpr double kBarrierGrowth = 20.0;
constexpr double kCenteredDecrement = 1e-5;
constexpr int kMaxCenteringSteps = 100;
constexpr int kMaxPolishSteps = 5;

enum class Outcome { ok, max_iters, breakdown };

struct Attempt {
  Outcome outcome = Outcome::breakdown;
  double c_norm = 0.0;
  Eigen::VectorXd mu;
  double residual = std::numeric_limits<double>::infinity();  // normalized units
  int iters = 0;
  Eigen::MatrixXd R;
  Eigen::MatrixXd P_inv_over_t;
};

// Barrier matrix in congruence coordinates: diag(lambda / w) + R' diag(mu) R.
// Returns false when it is not numerically positive definite.
bool factor_barrier(const Eigen::MatrixXd& R, const Eigen::VectorXd& base, const Eigen::VectorXd& mu,
                    Eigen::LLT<Eigen::MatrixXd>& llt) {
  Eigen::MatrixXd P = R.transpose() * mu.asDiagonal() * R;
  P.diagonal() += base;
  llt.compute(P);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::MatrixXd& m = llt.matrixLLT();
  return m.diagonal().minCoeff() > 0.0 && m.allFinite();
}

Attempt barrier_solve(const Eigen::VectorXd& a, const Eigen::VectorXd& w_raw, const Eigen::MatrixXd& U,
                      double lambda, double jitter, double gap, double resid_target, int max_iters) {
  const Eigen::Index n = a.size();
  const double nd = static_cast<double>(n);
  Attempt out;
  Eigen::VectorXd w = w_raw.cwiseMax(0.0).array() + jitter;
  out.R = U * w.cwiseSqrt().asDiagonal();
  const Eigen::MatrixXd& R = out.R;
  const Eigen::VectorXd base = lambda * w.cwiseInverse();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 1.0 / nd);
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!factor_barrier(R, base, mu, llt)) return out;

  double t = 1.0;
  double nu = 0.0;
  Eigen::MatrixXd G(n, n);
  for (;;) {
    bool centered = false;
    int polish = 0;
    for (int step = 0; step < kMaxCenteringSteps; ++step) {
      const Eigen::MatrixXd V = llt.matrixL().solve(R.transpose());
      G.noalias() = V.transpose() * V;
      const Eigen::VectorXd g = t * a - G.diagonal();
      Eigen::MatrixXd H = G.cwiseProduct(G);
      const Eigen::VectorXd dd = H.diagonal().cwiseSqrt().cwiseMax(1e-300);
      H = dd.cwiseInverse().asDiagonal() * H * dd.cwiseInverse().asDiagonal();

      Eigen::LLT<Eigen::MatrixXd> hl;
      double ridge = 0.0;
      for (;;) {
        Eigen::MatrixXd Hr = H;
        Hr.diagonal().array() += ridge;
        hl.compute(Hr);
        if (hl.info() == Eigen::Success) break;
        ridge = ridge == 0.0 ? 1e-14 : ridge * 10.0;
        if (ridge > 1.0) return out;
      }
      auto hsolve = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
        return hl.solve(r.cwiseQuotient(dd)).cwiseQuotient(dd);
      };
      const Eigen::VectorXd y1 = hsolve(g);
      const Eigen::VectorXd y2 = hsolve(ones);
      nu = -y1.sum() / y2.sum();
      const Eigen::VectorXd dir = -y1 - nu * y2;
      const double dec = std::sqrt(std::max(-g.dot(dir), 0.0));
      ++out.iters;
      out.residual = (g.array() + nu).abs().maxCoeff() / t;
      if (dec < kCenteredDecrement) {
        // The last stage also has to meet the residual target; a few full
        // Newton steps usually get there once roundoff dominates the decrement.
        if (nd / t > gap || out.residual <= resid_target) {
          centered = true;
          break;
        }
        if (++polish > kMaxPolishSteps) break;
      }
      double alpha = dec < 0.25 ? 1.0 : 1.0 / (1.0 + dec);
      Eigen::LLT<Eigen::MatrixXd> trial;
      while (!factor_barrier(R, base, mu + alpha * dir, trial)) {
        alpha *= 0.5;
        if (alpha < 1e-14) return out;
      }
      mu += alpha * dir;
      llt = std::move(trial);
      if (out.iters >= max_iters) break;
    }
    out.c_norm = -nu / t;
    out.mu = mu;
    if (!centered) {
      out.outcome = out.iters >= max_iters ? Outcome::max_iters : Outcome::breakdown;
      break;
    }
    if (nd / t <= gap) {
      out.outcome = Outcome::ok;
      break;
    }
    if (out.iters >= max_iters) {
      out.outcome = Outcome::max_iters;
      break;
    }
    t *= kBarrierGrowth;
  }
  out.P_inv_over_t = llt.solve(Eigen::MatrixXd::Identity(n, n)) / t;
  return out;
}

Eigen::VectorXd clamp_normalize(const Eigen::VectorXd& mu) {
  Eigen::VectorXd m = mu.cwiseMax(0.0);
  const double s = m.sum();
  if (!(s > 0.0)) return Eigen::VectorXd::Constant(mu.size(), 1.0 / static_cast<double>(mu.size()));
  return m / s;
}

}  // namespace

KsosSolution solve_ksos_sdp(const Eigen::VectorXd& values, const Eigen::MatrixXd& K, const SdpOptions& opts) {
  const Eigen::Index n = values.size();
  if (n < 2) throw InputError("solve_ksos_sdp: need at least 2 samples");
  if (K.rows() != n || K.cols() != n) throw InputError("solve_ksos_sdp: kernel matrix shape does not match values");
  if (!values.allFinite()) throw InputError("solve_ksos_sdp: values must be finite");
  if (!(opts.lambda_reg >= 0.0)) throw InputError("solve_ksos_sdp: lambda_reg must be non-negative");
  if (!(opts.tol > 0.0)) throw InputError("solve_ksos_sdp: tol must be positive");

  KsosSolution sol;
  const double amin = values.minCoeff();
  const double span = values.maxCoeff() - amin;
  const double scale = 1.0 + values.cwiseAbs().maxCoeff();

  auto attach_surrogate = [&](const Eigen::MatrixXd& W, const Eigen::MatrixXd& Q) {
    if (!opts.want_surrogate) return;
    sol.surrogate = KsosSurrogate{opts.kernel, opts.points, sol.c_star, W, Q};
  };

  // Degenerate instances have closed-form solutions: B = 0 when values are
  // constant, and c = min(values) with mass on the minimizers when there is
  // no trace penalty.
  if (span == 0.0 || opts.lambda_reg == 0.0) {
    sol.c_star = amin;
    sol.mu_raw = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (span == 0.0 || values(i) == amin) sol.mu_raw(i) = 1.0;
    }
    sol.mu_raw /= sol.mu_raw.sum();
    sol.mu = sol.mu_raw;
    attach_surrogate(Eigen::MatrixXd::Zero(n, 1), Eigen::MatrixXd::Zero(1, 1));
    return sol;
  }

  const Eigen::VectorXd a = (values.array() - amin) / span;
  const double lambda = opts.lambda_reg / span;
  const Eigen::MatrixXd Ks = 0.5 * (K + K.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Ks);
  if (eig.info() != Eigen::Success) {
    sol.status = SolverStatus::infeasible_numerics;
    sol.c_star = amin;
    sol.mu = sol.mu_raw = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    return sol;
  }
  const double diag_mean = Ks.diagonal().mean();

  // Normalized duality-gap target; the central path keeps c below every
  // sample, so only accuracy (not feasibility) depends on it.
  const double gap = std::clamp(opts.tol * scale / span, 1e-9, 1e-6);

  Attempt best;
  double best_jitter = 0.0;
  int total_iters = 0;
  bool solved = false;
  for (double eps = kFirstJitter; eps <= kLastJitter * 1.0001; eps *= 10.0) {
    const double jitter = eps * diag_mean;
    Attempt at = barrier_solve(a, eig.eigenvalues(), eig.eigenvectors(), lambda, jitter, gap,
                               opts.tol * scale / span, opts.max_iters);
    total_iters += at.iters;
    const bool accurate = at.residual * span <= opts.tol * scale;
    if (at.outcome != Outcome::breakdown && at.mu.size() == n && (accurate || at.outcome == Outcome::max_iters)) {
      best = std::move(at);
      best_jitter = jitter;
      solved = true;
      break;
    }
    if (at.mu.size() == n && (best.mu.size() != n || at.residual < best.residual)) {
      best = std::move(at);
      best_jitter = jitter;
    }
  }

  sol.newton_iters = total_iters;
  sol.jitter = best_jitter;
  if (best.mu.size() != n) {
    sol.status = SolverStatus::infeasible_numerics;
    sol.c_star = amin;
    sol.mu = sol.mu_raw = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    sol.residual_norm = std::numeric_limits<double>::infinity();
    return sol;
  }
  sol.status = !solved ? SolverStatus::infeasible_numerics
               : best.outcome == Outcome::max_iters ? SolverStatus::max_iters
                                                     : SolverStatus::converged;
  sol.c_star = amin + span * best.c_norm;
  if (sol.status == SolverStatus::infeasible_numerics) sol.c_star = std::min(sol.c_star, amin);
  sol.mu_raw = best.mu;
  sol.mu = clamp_normalize(best.mu);
  sol.residual_norm = best.residual * span;
  if (opts.want_surrogate && best.P_inv_over_t.size() > 0) {
    // v(x) = Lambda^{-1/2} U' k_x maps sample i onto row i of R.
    const Eigen::VectorXd w = eig.eigenvalues().cwiseMax(0.0).array() + best_jitter;
    attach_surrogate(eig.eigenvectors() * w.cwiseSqrt().cwiseInverse().asDiagonal(), span * best.P_inv_over_t);
  }
  return sol;
}

KsosResult ksos_minimize(const Objective& objective, const BoxDomain& box, int budget, const KsosConfig& cfg, Rng& rng,
                         bool want_surrogate) {
  cfg.validate();
  const int samples = cfg.recovery_guard ? budget - 1 : budget;
  if (samples < 2) throw ConfigError("ksos budget too small: need at least 2 samples");
  const int d = box.dim();

  KsosResult res;
  res.candidates = scale_to_box(sobol_points(samples, d, rng), box);
  res.values.resize(samples);
  for (int i = 0; i < samples; ++i) res.values(i) = objective(res.candidates.row(i).transpose());
  res.evaluations = samples;

  const double sigma = smoothing_sigma(cfg.radius_factor * box.mean_range(), samples, d, cfg.lambda_scale);
  const KernelSpec kernel{cfg.kernel_kind, sigma, 1.0};
  SdpOptions opts;
  opts.lambda_reg = resolve_lambda_reg(cfg, res.values);
  opts.tol = cfg.solver_tol;
  opts.max_iters = cfg.max_newton_iters;
  opts.want_surrogate = want_surrogate;
  opts.kernel = kernel;
  if (want_surrogate) opts.points = res.candidates;
  res.solution = solve_ksos_sdp(res.values, kernel_matrix(kernel, res.candidates), opts);

  Eigen::Index best_i = 0;
  res.values.minCoeff(&best_i);
  const Point best_sample = res.candidates.row(best_i).transpose();

  KsosSolution& sol = res.solution;
  if (sol.status == SolverStatus::infeasible_numerics) {
    sol.x_star = best_sample;
    sol.used_fallback = true;
    res.x_next = best_sample;
  } else {
    sol.x_star = box.project(res.candidates.transpose() * sol.mu);
    res.x_next = sol.x_star;
  }
  if (cfg.recovery_guard) {
    const double v = objective(res.x_next);
    ++res.evaluations;
    if (!(v <= res.values(best_i))) {
      res.x_next = best_sample;
      sol.used_fallback = true;
    }
  }
  return res;
}

}  // namespace ksosbo
