#include <gtest/gtest.h>

#include "ksosbo/errors.hpp"
#include "ksosbo/sampling.hpp"

using namespace ksosbo;

// Frozen from tests/oracles/sobol_oracle.py.
TEST(Sobol, MatchesReferenceSequence) {
  const PointSet p1 = sobol_points_unscrambled(64, 1);
  EXPECT_EQ(p1(0, 0), 0.5);
  EXPECT_EQ(p1(1, 0), 0.75);
  EXPECT_EQ(p1(2, 0), 0.25);
  EXPECT_EQ(p1(63, 0), 0.0234375);

  const PointSet p3 = sobol_points_unscrambled(64, 3);
  EXPECT_EQ(p3(6, 0), 0.125);
  EXPECT_EQ(p3(6, 1), 0.625);
  EXPECT_EQ(p3(6, 2), 0.375);
  EXPECT_EQ(p3(63, 2), 0.8203125);

  const PointSet p16 = sobol_points_unscrambled(64, 16);
  const double row30[16] = {0.03125, 0.53125, 0.90625, 0.96875, 0.96875, 0.78125, 0.34375, 0.53125,
                            0.15625, 0.59375, 0.03125, 0.34375, 0.96875, 0.21875, 0.65625, 0.84375};
  const double row63[16] = {0.0234375, 0.3984375, 0.8203125, 0.8359375, 0.6484375, 0.4453125,
                            0.6640625, 0.2109375, 0.7421875, 0.1171875, 0.9453125, 0.2265625,
                            0.4296875, 0.5234375, 0.8046875, 0.5078125};
  for (int j = 0; j < 16; ++j) {
    EXPECT_EQ(p16(30, j), row30[j]) << j;
    EXPECT_EQ(p16(63, j), row63[j]) << j;
  }
}

TEST(Sobol, ScrambledSetsStayBalanced) {
  Rng rng(3);
  const PointSet p = sobol_points(128, 4, rng);
  // A digital shift keeps each dyadic half of every coordinate exactly half full.
  for (int j = 0; j < 4; ++j) {
    int low = 0;
    for (int i = 0; i < 128; ++i) low += p(i, j) < 0.5;
    EXPECT_EQ(low, 64);
  }
  EXPECT_GE(p.minCoeff(), 0.0);
  EXPECT_LT(p.maxCoeff(), 1.0);
}

TEST(Sobol, SameRngStateSamePoints) {
  Rng a(11), b(11);
  EXPECT_EQ(sobol_points(50, 3, a), sobol_points(50, 3, b));
  Rng c(12);
  EXPECT_NE(sobol_points(50, 3, a), sobol_points(50, 3, c));
}

TEST(Sobol, Limits) {
  Rng rng(0);
  EXPECT_THROW(sobol_points(4, 17, rng), ConfigError);
  EXPECT_THROW(sobol_points(-1, 2, rng), InputError);
  EXPECT_EQ(sobol_points(0, 2, rng).rows(), 0);
}

TEST(Sampling, ScaleToBoxStaysInside) {
  const BoxDomain box = BoxDomain::cube(2, -5.0, 5.0);
  PointSet u(3, 2);
  u << 0.0, 0.5, 1.0, 0.999999999999, 0.25, 1.0;
  const PointSet x = scale_to_box(u, box);
  EXPECT_EQ(x(0, 0), -5.0);
  EXPECT_EQ(x(0, 1), 0.0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(box.contains(Point(x.row(i).transpose())));
    EXPECT_LT(x.row(i).maxCoeff(), 5.0);
  }
}

TEST(Sampling, BoxDomainValidation) {
  EXPECT_THROW(BoxDomain(Point::Zero(2), Point::Zero(2)), InputError);
  EXPECT_THROW(BoxDomain(Point::Zero(2), Point::Ones(3)), InputError);
  const BoxDomain box = BoxDomain::cube(3, -1.0, 2.0);
  Point far(3);
  far << -4.0, 0.5, 9.0;
  const Point p = box.project(far);
  EXPECT_EQ(p(0), -1.0);
  EXPECT_EQ(p(1), 0.5);
  EXPECT_EQ(p(2), 2.0);
  EXPECT_DOUBLE_EQ(box.mean_range(), 3.0);
}
