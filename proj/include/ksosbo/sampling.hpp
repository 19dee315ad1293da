#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ksosbo/types.hpp"

namespace ksosbo {

enum class SamplingKind { sobol, uniform };

std::string to_string(SamplingKind kind);
SamplingKind sampling_kind_from_string(std::string_view name);

/// Sobol sequence in up to 16 dimensions (Joe-Kuo direction numbers), Gray-code
/// ordering, 32-bit resolution. The all-zeros first point is skipped. An
/// optional per-coordinate digital shift (XOR) randomizes the set while
/// keeping its net structure.
class SobolSequence {
 public:
  static constexpr int kMaxDim = 16;
  static constexpr int kBits = 32;

  explicit SobolSequence(int dim);
  SobolSequence(int dim, std::vector<std::uint32_t> shift);

  int dim() const { return dim_; }
  /// Next point in [0,1)^dim.
  Point next();

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<std::array<std::uint32_t, kBits>> directions_;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> shift_;
};

/// n scrambled Sobol points in [0,1)^d; the shift is drawn from `rng`.
PointSet sobol_points(int n, int d, Rng& rng);
/// Unscrambled variant (reference ordering, zero point skipped).
PointSet sobol_points_unscrambled(int n, int d);

/// n i.i.d. uniform points in [0,1)^d.
PointSet uniform_points(int n, int d, Rng& rng);

PointSet sample_unit(SamplingKind kind, int n, int d, Rng& rng);

/// Affine map lower + u * (upper - lower), kept strictly below `upper`.
PointSet scale_to_box(const PointSet& unit, const BoxDomain& box);
Point scale_to_box(const Point& unit, const BoxDomain& box);

}  // namespace ksosbo
