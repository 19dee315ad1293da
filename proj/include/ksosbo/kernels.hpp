#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

#include "ksosbo/types.hpp"

namespace ksosbo {

enum class KernelKind { gaussian, laplace, matern25 };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

/// Isotropic stationary kernel. `scale` is the bandwidth sigma for the
/// gaussian/laplace kinds and the lengthscale for matern25; `output_variance`
/// only multiplies matern25.
///
///   gaussian  k = exp(-r^2 / (2 sigma^2))
///   laplace   k = exp(-r / sigma)
///   matern25  k = v (1 + sqrt5 r / l + 5 r^2 / (3 l^2)) exp(-sqrt5 r / l)
struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double scale = 1.0;
  double output_variance = 1.0;

  void validate() const;
  /// k as a function of the Euclidean distance r >= 0.
  double from_distance(double r) const;
  double diagonal() const { return kind == KernelKind::matern25 ? output_variance : 1.0; }
};

double eval_kernel(const KernelSpec& spec, const Point& x, const Point& y);

/// Symmetric Gram matrix over the rows of `points`. No jitter is added.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const PointSet& points);

/// Cross-kernel block K(a_i, b_j), shape rows(a) x rows(b).
Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const PointSet& a, const PointSet& b);

/// Kernel vector k(x, p_i) over the rows of `points`.
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const PointSet& points, const Point& x);

}  // namespace ksosbo
