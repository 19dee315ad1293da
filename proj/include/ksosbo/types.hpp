#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Core>

namespace ksosbo {

using Point = Eigen::VectorXd;
/// N points stored row-wise (N x d).
using PointSet = Eigen::MatrixXd;

using Rng = std::mt19937_64;

/// Scalar function over a box domain; lower is better everywhere in this library.
using Objective = std::function<double(const Point&)>;

/// Independent random streams carved out of one run seed. Adding or removing a
/// consumer never shifts the draws of another.
enum class Stream : std::uint32_t {
  init_design = 1,
  acquisition = 2,
  gp_restarts = 3,
  noise = 4,
  perturb = 5,
};

inline Rng make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x6b736f73u};
  return Rng(seq);
}

/// Axis-aligned box [lower, upper] with lower_j < upper_j.
class BoxDomain {
 public:
  BoxDomain() = default;
  BoxDomain(Point lower, Point upper);
  /// The cube [lo, hi]^dim.
  static BoxDomain cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  Point range() const { return upper_ - lower_; }
  double mean_range() const { return range().mean(); }
  Point center() const { return 0.5 * (lower_ + upper_); }

  bool contains(const Point& x) const;
  /// Euclidean projection (coordinate-wise clamp).
  Point project(const Point& x) const;

 private:
  Point lower_;
  Point upper_;
};

}  // namespace ksosbo
