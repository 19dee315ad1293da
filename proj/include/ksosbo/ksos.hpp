#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "ksosbo/kernels.hpp"
#include "ksosbo/types.hpp"

namespace ksosbo {

enum class SolverStatus { converged, max_iters, infeasible_numerics };
std::string to_string(SolverStatus s);

struct KsosConfig {
  KernelKind kernel_kind = KernelKind::gaussian;
  double lambda_scale = 2.0;
  double radius_factor = 0.5;
  /// Trace penalty. Absent means 1e-8 * (1 + max|values|) unless
  /// lambda_span_factor is set.
  std::optional<double> lambda_reg;
  /// Trace penalty as a fraction of max(values) - min(values).
  std::optional<double> lambda_span_factor;
  double solver_tol = 1e-7;
  int max_newton_iters = 400;
  /// Spend the last budget evaluation on the recovered point and fall back to
  /// the best sample when it is worse.
  bool recovery_guard = false;

  void validate() const;
};

/// Quadratic-form model c + v(x)' Q v(x) fitted by the solver, with
/// v(x) = W' k(x, x_i). Matches values_i at the samples up to the residual.
struct KsosSurrogate {
  KernelSpec kernel;
  PointSet points;
  double c = 0.0;
  Eigen::MatrixXd W;
  Eigen::MatrixXd Q;

  double operator()(const Point& x) const;
};

struct KsosSolution {
  double c_star = 0.0;
  Eigen::VectorXd mu;      // clamped at zero and renormalized
  Eigen::VectorXd mu_raw;  // multipliers as returned by the Newton iteration
  Point x_star;
  double residual_norm = 0.0;
  int newton_iters = 0;
  double jitter = 0.0;
  SolverStatus status = SolverStatus::converged;
  bool used_fallback = false;
  std::optional<KsosSurrogate> surrogate;
};

double smoothing_sigma(double radius, int n, int d, double lambda_scale);

double default_lambda_reg(const Eigen::VectorXd& values);
/// The trace penalty `cfg` implies for these sampled values.
double resolve_lambda_reg(const KsosConfig& cfg, const Eigen::VectorXd& values);

struct SdpOptions {
  double lambda_reg = 0.0;
  double tol = 1e-7;
  int max_iters = 500;
  bool want_surrogate = false;
  /// Kernel and points, only needed when want_surrogate is set.
  KernelSpec kernel;
  PointSet points;
};

/// Solves  max c - lambda Tr(B)  s.t.  values_i - c = phi_i' B phi_i, B psd,
/// through its dual  min values'mu  s.t.  sum mu = 1, lambda I + K diag(mu) K psd,
/// with a damped Newton log-barrier method. Never throws on numerical trouble;
/// status reports it instead.
KsosSolution solve_ksos_sdp(const Eigen::VectorXd& values, const Eigen::MatrixXd& K, const SdpOptions& opts);

struct KsosResult {
  Point x_next;
  KsosSolution solution;
  PointSet candidates;
  Eigen::VectorXd values;
  int evaluations = 0;
};

/// Samples `budget` Sobol candidates over the box, solves the sampled program
/// and returns the mu-weighted average of the candidates, projected on the box.
KsosResult ksos_minimize(const Objective& objective, const BoxDomain& box, int budget, const KsosConfig& cfg, Rng& rng,
                         bool want_surrogate = false);

}  // namespace ksosbo
