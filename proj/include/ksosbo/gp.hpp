#pragma once

#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "ksosbo/types.hpp"

namespace ksosbo {

struct Dataset {
  PointSet X;
  Eigen::VectorXd y;

  int size() const { return static_cast<int>(y.size()); }
  int dim() const { return static_cast<int>(X.cols()); }
  void validate() const;
};

struct GpHyperparams {
  double constant_value = 1.0;
  double lengthscale = 1.0;
  double noise_variance = 0.0;
};

inline constexpr double kConstantLo = 1e-3;
inline constexpr double kConstantHi = 1e3;
inline constexpr double kLengthscaleLo = 1e-2;
inline constexpr double kLengthscaleHi = 1e2;

/// Lower Cholesky factor of K + noise I with the smallest jitter that works.
/// Levels tried: 0, then 1e-10 .. 1e-4 times mean(diag). Throws NumericalError.
struct JitteredCholesky {
  Eigen::MatrixXd L;
  double jitter = 0.0;
};
JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& a);

double log_marginal_likelihood(const Dataset& data, const GpHyperparams& params);

class GpModel {
 public:
  GpModel(Dataset data, GpHyperparams params);

  const Dataset& data() const { return data_; }
  const GpHyperparams& params() const { return params_; }
  const Eigen::MatrixXd& chol() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double jitter() const { return jitter_; }
  int dim() const { return data_.dim(); }

  struct Prediction {
    double mean;
    double std;
    double raw_variance;  // before clamping at zero
  };
  Prediction posterior(const Point& x) const;

 private:
  Dataset data_;
  GpHyperparams params_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

struct GpFitOptions {
  double noise_factor = 0.05;
  int random_restarts = 4;
  int max_simplex_iters = 200;
  /// Warm start from the previous fit; (1, 1) is used when absent.
  std::optional<GpHyperparams> warm_start;
};

/// Maximizes the log marginal likelihood over (log constant, log lengthscale)
/// with a bounded Nelder-Mead search from several starts.
GpModel fit_gp(const Dataset& data, const GpFitOptions& opts, Rng& rng);

/// Population standard deviation.
double population_std(const Eigen::VectorXd& y);

}  // namespace ksosbo
