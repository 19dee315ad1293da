#include <gtest/gtest.h>

#include <cmath>

#include "ksosbo/baselines.hpp"
#include "ksosbo/errors.hpp"
#include "ksosbo/sampling.hpp"

using namespace ksosbo;

namespace {

const Objective kSphere = [](const Point& x) { return x.squaredNorm(); };

}  // namespace

TEST(Baselines, SobolSearchFirstIndexWinsTies) {
  const BoxDomain box = BoxDomain::cube(2, -1.0, 1.0);
  Rng a(5), b(5);
  const PointSet pts = scale_to_box(sobol_points(16, 2, a), box);
  const OptimizeResult r = sobol_search([](const Point&) { return 1.0; }, box, 16, b);
  EXPECT_EQ(r.x, Point(pts.row(0).transpose()));
  EXPECT_EQ(r.evaluations, 16);
}

TEST(Baselines, SobolSearchReturnsBestSample) {
  const BoxDomain box = BoxDomain::cube(3, -2.0, 2.0);
  Rng a(8), b(8);
  const PointSet pts = scale_to_box(sobol_points(64, 3, a), box);
  const Objective lin = [](const Point& x) { return x.sum(); };
  const OptimizeResult r = sobol_search(lin, box, 64, b);
  EXPECT_EQ(r.value, pts.rowwise().sum().minCoeff());
}

TEST(Baselines, BudgetsAreCounted) {
  const BoxDomain box10 = BoxDomain::cube(10, -5.0, 5.0);
  const BoxDomain box2 = BoxDomain::cube(2, -5.0, 5.0);
  Rng rng(1);
  for (OptimizerKind kind : {OptimizerKind::ksos, OptimizerKind::sobol, OptimizerKind::cmaes, OptimizerKind::de}) {
    OptimizerSpec spec;
    spec.kind = kind;
    for (const BoxDomain* box : {&box2, &box10}) {
      const OptimizeResult r = optimize(spec, kSphere, *box, 128, rng);
      if (kind == OptimizerKind::ksos || kind == OptimizerKind::sobol) {
        EXPECT_EQ(r.evaluations, 128) << to_string(kind);
      } else {
        EXPECT_LE(r.evaluations, 128) << to_string(kind);
      }
      if (kind == OptimizerKind::de && box->dim() == 10) EXPECT_EQ(r.evaluations, 120);
      EXPECT_TRUE(box->contains(r.x));
    }
  }
}

TEST(Baselines, DePopulation) {
  DeConfig c;
  EXPECT_EQ(c.population(10), 20);
  EXPECT_EQ(c.population(1), 4);
  c.maxiter = 100;
  Rng rng(2);
  CountingObjective counted(kSphere, BoxDomain::cube(2, -1.0, 1.0), 50);
  const OptimizeResult r =
      de_minimize([&](const Point& x) { return counted(x); }, BoxDomain::cube(2, -1.0, 1.0), 50, c, rng);
  EXPECT_LE(counted.count(), 50);
  EXPECT_EQ(r.evaluations, counted.count());
}

TEST(Baselines, CmaesFindsSphereMinimum) {
  Rng rng(3);
  const OptimizeResult r = cmaes_minimize(kSphere, BoxDomain::cube(2, -5.0, 5.0), 128, {}, rng);
  EXPECT_LE(r.value, 0.5);
  EXPECT_NEAR(r.value, kSphere(r.x), 0.0);
}

TEST(Baselines, DeFindsSphereMinimum) {
  Rng rng(4);
  DeConfig c;
  c.popsize_multiplier = 10;
  c.maxiter = 40;
  const OptimizeResult r = de_minimize(kSphere, BoxDomain::cube(2, -5.0, 5.0), 1000, c, rng);
  EXPECT_EQ(r.evaluations, 820);
  EXPECT_LE(r.value, 0.1);
}

TEST(Baselines, CmaesHandlesFlatObjective) {
  Rng rng(5);
  const BoxDomain box = BoxDomain::cube(3, 0.0, 1.0);
  const OptimizeResult r = cmaes_minimize([](const Point&) { return 0.0; }, box, 128, {}, rng);
  EXPECT_TRUE(box.contains(r.x));
  EXPECT_LE(r.evaluations, 128);
}

TEST(Baselines, Deterministic) {
  for (OptimizerKind kind : {OptimizerKind::cmaes, OptimizerKind::de, OptimizerKind::ksos}) {
    OptimizerSpec spec;
    spec.kind = kind;
    Rng a(6), b(6);
    const BoxDomain box = BoxDomain::cube(3, -5.0, 5.0);
    EXPECT_EQ(optimize(spec, kSphere, box, 128, a).x, optimize(spec, kSphere, box, 128, b).x);
  }
}

TEST(Baselines, CountingObjectiveEnforcesContract) {
  const BoxDomain box = BoxDomain::cube(1, 0.0, 1.0);
  CountingObjective c(kSphere, box, 2);
  c(Point::Constant(1, 0.5));
  c(Point::Constant(1, 0.25));
  EXPECT_EQ(c.best_value(), 0.0625);
  EXPECT_THROW(c(Point::Constant(1, 0.1)), InputError);
  CountingObjective d(kSphere, box, 5);
  EXPECT_THROW(d(Point::Constant(1, 2.0)), InputError);
}

TEST(Baselines, SpecValidation) {
  OptimizerSpec s;
  s.kind = OptimizerKind::cmaes;
  s.cmaes.pop_size = 1;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.kind = OptimizerKind::de;
  s.de.recombination = 1.5;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(optimizer_kind_from_string("pso"), ConfigError);
  EXPECT_EQ(s.name(), "de");
}
