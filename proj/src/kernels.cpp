#include "ksosbo/kernels.hpp"

#include <cmath>

#include "ksosbo/errors.hpp"

namespace ksosbo {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::laplace: return "laplace";
    case KernelKind::matern25: return "matern25";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "laplace") return KernelKind::laplace;
  if (name == "matern25") return KernelKind::matern25;
  throw ConfigError("unknown kernel kind '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("kernel scale must be positive, got " + std::to_string(scale));
  }
  if (!(output_variance > 0.0) || !std::isfinite(output_variance)) {
    throw ConfigError("kernel output variance must be positive");
  }
}

double KernelSpec::from_distance(double r) const {
  switch (kind) {
    case KernelKind::gaussian: return std::exp(-r * r / (2.0 * scale * scale));
    case KernelKind::laplace: return std::exp(-r / scale);
    case KernelKind::matern25: {
      const double u = std::sqrt(5.0) * r / scale;
      return output_variance * (1.0 + u + u * u / 3.0) * std::exp(-u);
    }
  }
  return 0.0;
}

double eval_kernel(const KernelSpec& spec, const Point& x, const Point& y) {
  if (x.size() != y.size()) {
    throw InputError("eval_kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  spec.validate();
  return spec.from_distance((x - y).norm());
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const PointSet& points) {
  if (points.rows() == 0) throw InputError("kernel_matrix: empty point list");
  spec.validate();
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd k(n, n);
  const double diag = spec.from_distance(0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = diag;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = spec.from_distance((points.row(i) - points.row(j)).norm());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const PointSet& a, const PointSet& b) {
  if (a.cols() != b.cols()) throw InputError("cross_kernel: dimension mismatch");
  spec.validate();
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = spec.from_distance((a.row(i) - b.row(j)).norm());
    }
  }
  return k;
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const PointSet& points, const Point& x) {
  if (points.cols() != x.size()) throw InputError("kernel_vector: dimension mismatch");
  Eigen::VectorXd k(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    k(i) = spec.from_distance((points.row(i).transpose() - x).norm());
  }
  return k;
}

}  // namespace ksosbo
