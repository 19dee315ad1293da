#include "ksosbo/sampling.hpp"

#include <bit>
#include <cmath>

#include "ksosbo/errors.hpp"

namespace ksosbo {

BoxDomain::BoxDomain(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw InputError("BoxDomain: bound dimensions differ");
  if (lower_.size() == 0) throw InputError("BoxDomain: empty bounds");
  for (Eigen::Index j = 0; j < lower_.size(); ++j) {
    if (!(lower_(j) < upper_(j))) {
      throw InputError("BoxDomain: lower bound must be below upper bound in coordinate " +
                       std::to_string(j));
    }
  }
}

BoxDomain BoxDomain::cube(int dim, double lo, double hi) {
  return BoxDomain(Point::Constant(dim, lo), Point::Constant(dim, hi));
}

bool BoxDomain::contains(const Point& x) const {
  if (x.size() != lower_.size()) return false;
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

Point BoxDomain::project(const Point& x) const {
  if (x.size() != lower_.size()) throw InputError("BoxDomain::project: dimension mismatch");
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

std::string to_string(SamplingKind kind) {
  return kind == SamplingKind::sobol ? "sobol" : "uniform";
}

SamplingKind sampling_kind_from_string(std::string_view name) {
  if (name == "sobol") return SamplingKind::sobol;
  if (name == "uniform") return SamplingKind::uniform;
  throw ConfigError("unknown sampling kind '" + std::string(name) + "'");
}

namespace {

// Primitive polynomial degree s, coefficient bits a, initial m_1..m_s for
// dimensions 2..16 (new-joe-kuo-6.21201). Dimension 1 is van der Corput.
struct DirectionSeed {
  int s;
  unsigned a;
  std::array<unsigned, 6> m;
};

constexpr std::array<DirectionSeed, SobolSequence::kMaxDim - 1> kSeeds{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

std::array<std::uint32_t, SobolSequence::kBits> directions_for(int dim_index) {
  constexpr int bits = SobolSequence::kBits;
  std::array<std::uint32_t, bits> v{};
  if (dim_index == 0) {
    for (int i = 0; i < bits; ++i) v[i] = std::uint32_t{1} << (bits - 1 - i);
    return v;
  }
  const DirectionSeed& seed = kSeeds[dim_index - 1];
  const int s = seed.s;
  for (int i = 0; i < s; ++i) v[i] = static_cast<std::uint32_t>(seed.m[i]) << (bits - 1 - i);
  for (int i = s; i < bits; ++i) {
    std::uint32_t value = v[i - s] ^ (v[i - s] >> s);
    for (int k = 1; k < s; ++k) {
      if ((seed.a >> (s - 1 - k)) & 1u) value ^= v[i - k];
    }
    v[i] = value;
  }
  return v;
}

constexpr double kTwoPowMinus32 = 1.0 / 4294967296.0;

}  // namespace

SobolSequence::SobolSequence(int dim) : SobolSequence(dim, std::vector<std::uint32_t>(dim > 0 ? dim : 0, 0u)) {}

SobolSequence::SobolSequence(int dim, std::vector<std::uint32_t> shift) : dim_(dim), shift_(std::move(shift)) {
  if (dim < 1 || dim > kMaxDim) {
    throw ConfigError("Sobol sequence supports 1.." + std::to_string(kMaxDim) + " dimensions, got " +
                      std::to_string(dim));
  }
  if (static_cast<int>(shift_.size()) != dim) throw InputError("Sobol shift length must equal dimension");
  directions_.reserve(dim);
  for (int j = 0; j < dim; ++j) directions_.push_back(directions_for(j));
  state_.assign(dim, 0u);
}

Point SobolSequence::next() {
  // Gray-code step from point index_ to index_ + 1: flip the direction of the
  // lowest zero bit of index_. Point 0 (all zeros) is never emitted.
  if (index_ + 1 >= (std::uint64_t{1} << kBits)) throw ConfigError("Sobol sequence exhausted");
  const int c = std::countr_one(index_);
  ++index_;
  Point x(dim_);
  for (int j = 0; j < dim_; ++j) {
    state_[j] ^= directions_[j][c];
    x(j) = static_cast<double>(state_[j] ^ shift_[j]) * kTwoPowMinus32;
  }
  return x;
}

namespace {

void check_count(int n, int d) {
  if (n < 0) throw InputError("point count must be non-negative");
  if (d < 1) throw InputError("dimension must be at least 1");
}

}  // namespace

PointSet sobol_points(int n, int d, Rng& rng) {
  check_count(n, d);
  if (n > (1 << 20)) throw ConfigError("Sobol point count limited to 2^20");
  std::vector<std::uint32_t> shift(d > 0 ? d : 0);
  std::uniform_int_distribution<std::uint32_t> bits;
  for (auto& s : shift) s = bits(rng);
  SobolSequence seq(d, std::move(shift));
  PointSet out(n, d);
  for (int i = 0; i < n; ++i) out.row(i) = seq.next().transpose();
  return out;
}

PointSet sobol_points_unscrambled(int n, int d) {
  check_count(n, d);
  SobolSequence seq(d);
  PointSet out(n, d);
  for (int i = 0; i < n; ++i) out.row(i) = seq.next().transpose();
  return out;
}

PointSet uniform_points(int n, int d, Rng& rng) {
  check_count(n, d);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointSet out(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) out(i, j) = u(rng);
  }
  return out;
}

PointSet sample_unit(SamplingKind kind, int n, int d, Rng& rng) {
  return kind == SamplingKind::sobol ? sobol_points(n, d, rng) : uniform_points(n, d, rng);
}

Point scale_to_box(const Point& unit, const BoxDomain& box) {
  if (unit.size() != box.dim()) throw InputError("scale_to_box: dimension mismatch");
  Point x = box.lower() + unit.cwiseProduct(box.range());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) >= box.upper()(j)) x(j) = std::nextafter(box.upper()(j), box.lower()(j));
    if (x(j) < box.lower()(j)) x(j) = box.lower()(j);
  }
  return x;
}

PointSet scale_to_box(const PointSet& unit, const BoxDomain& box) {
  if (unit.cols() != box.dim()) throw InputError("scale_to_box: dimension mismatch");
  PointSet out(unit.rows(), unit.cols());
  for (Eigen::Index i = 0; i < unit.rows(); ++i) {
    out.row(i) = scale_to_box(Point(unit.row(i).transpose()), box).transpose();
  }
  return out;
}

}  // namespace ksosbo
