#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "ksosbo/acquisition.hpp"
#include "ksosbo/errors.hpp"

using namespace ksosbo;

TEST(Acquisition, ClosedFormValues) {
  // z = 1: 1 * Phi(1) + phi(1)
  EXPECT_NEAR(ei_value(0.0, 1.0, 1.0, 0.0), 1.0833154705876864, 1e-12);
  // z = 0: phi(0)
  EXPECT_NEAR(ei_value(0.0, 1.0, 0.0, 0.0), 0.3989422804014327, 1e-12);
  EXPECT_DOUBLE_EQ(ei_value(0.0, 0.0, 1.0, 0.1), 0.9);
  EXPECT_DOUBLE_EQ(ei_value(2.0, 0.0, 1.0, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(lcb_value(1.0, 0.5, 2.0), 0.0);
  EXPECT_NEAR(normal_cdf(-10.0), 7.619853024160527e-24, 1e-36);
}

TEST(Acquisition, EiProperties) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0), s(0.0, 2.0);
  for (int k = 0; k < 10000; ++k) {
    const double m = u(rng), sd = s(rng), fb = u(rng), xi = 0.01;
    const double e = ei_value(m, sd, fb, xi);
    EXPECT_GE(e, 0.0);
    EXPECT_GE(ei_value(m, sd * 1.01 + 1e-6, fb, xi), e - 1e-15);
    EXPECT_GE(ei_value(m, sd, fb + 0.1, xi), e - 1e-15);
    EXPECT_GE(e, std::max(fb - xi - m, 0.0) - 1e-12);
  }
}

TEST(Acquisition, ContinuousAtZeroStd) {
  for (double m : {-1.0, 0.5, 2.0}) {
    EXPECT_NEAR(ei_value(m, 1e-12, 1.0, 0.01), ei_value(m, 0.0, 1.0, 0.01), 1e-11);
  }
}

TEST(Acquisition, ObjectiveIsMinimized) {
  Dataset d;
  d.X.resize(2, 1);
  d.X << 0.0, 1.0;
  d.y = Eigen::Vector2d(1.0, 0.0);
  auto gp = std::make_shared<GpModel>(d, GpHyperparams{1.0, 0.5, 1e-8});
  const AcquisitionObjective ei(gp, {AcquisitionKind::ei, 0.01, 2.0});
  EXPECT_EQ(ei.f_best(), 0.0);
  const Point x = Point::Constant(1, 0.4);
  EXPECT_DOUBLE_EQ(ei(x), -ei.ei(x));
  const AcquisitionObjective lcb(gp, {AcquisitionKind::lcb, 0.01, 2.0});
  const auto p = gp->posterior(x);
  EXPECT_DOUBLE_EQ(lcb(x), p.mean - 2.0 * p.std);
}

TEST(Acquisition, ParamValidation) {
  EXPECT_THROW((AcquisitionParams{AcquisitionKind::ei, -0.1, 2.0}.validate()), ConfigError);
  EXPECT_THROW((AcquisitionParams{AcquisitionKind::lcb, 0.01, -1.0}.validate()), ConfigError);
  EXPECT_THROW(acquisition_kind_from_string("pi"), ConfigError);
}
