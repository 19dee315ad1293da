#include <gtest/gtest.h>

#include "ksosbo/bo.hpp"
#include "ksosbo/errors.hpp"

using namespace ksosbo;

namespace {

BoConfig small_config(OptimizerKind kind) {
  BoConfig c;
  c.n_init = 5;
  c.n_iters = 4;
  c.optimizer.kind = kind;
  c.budget = 32;
  c.gp_restarts = 1;
  return c;
}

}  // namespace

TEST(Bo, DesignOnlyRun) {
  BoConfig c = small_config(OptimizerKind::sobol);
  c.n_iters = 0;
  const Benchmark b = make_benchmark(BenchmarkName::sphere, 2);
  const RunRecord r = run_bo(b, c, 0);
  ASSERT_FALSE(r.failed) << r.error;
  ASSERT_EQ(r.rows.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(r.rows[i].iteration, i + 1);
    EXPECT_FALSE(r.rows[i].diagnostics.has_value());
  }
}

TEST(Bo, RowsAreConsistent) {
  for (OptimizerKind kind : {OptimizerKind::ksos, OptimizerKind::sobol, OptimizerKind::cmaes, OptimizerKind::de}) {
    const Benchmark b = make_benchmark(BenchmarkName::sum_of_different_powers, 2);
    BoConfig c = small_config(kind);
    if (kind == OptimizerKind::de) c.budget = 64;
    const RunRecord r = run_bo(b, c, 3);
    ASSERT_FALSE(r.failed) << r.error;
    ASSERT_EQ(r.rows.size(), 9u);
    double best = r.rows[0].observed;
    for (const RunRow& row : r.rows) {
      best = std::min(best, row.observed);
      EXPECT_EQ(row.best_so_far, best);
      EXPECT_NEAR(row.regret, best - 0.0, 0.0);
      EXPECT_TRUE(b.box.contains(row.query));
      EXPECT_GE(row.cum_wall_seconds, row.iter_wall_seconds);
    }
    const auto& d = r.rows.back().diagnostics;
    ASSERT_TRUE(d.has_value());
    EXPECT_LE(d->acquisition_evaluations, c.budget);
    EXPECT_EQ(d->status.has_value(), kind == OptimizerKind::ksos);
  }
}

TEST(Bo, SameSeedSameRegrets) {
  const Benchmark b = make_benchmark(BenchmarkName::ackley, 2);
  const BoConfig c = small_config(OptimizerKind::ksos);
  const RunRecord x = run_bo(b, c, 7), y = run_bo(b, c, 7), z = run_bo(b, c, 8);
  ASSERT_EQ(x.rows.size(), y.rows.size());
  for (std::size_t i = 0; i < x.rows.size(); ++i) {
    EXPECT_EQ(x.rows[i].regret, y.rows[i].regret);
    EXPECT_EQ(x.rows[i].query, y.rows[i].query);
  }
  EXPECT_NE(x.rows.back().query, z.rows.back().query);
}

TEST(Bo, NoisyObservationsKeepNoiselessRegret) {
  const Benchmark b = make_benchmark(BenchmarkName::sphere, 2);
  BoConfig c = small_config(OptimizerKind::sobol);
  c.inject_observation_noise = true;
  c.noise_factor = 0.5;
  const RunRecord r = run_bo(b, c, 1);
  ASSERT_FALSE(r.failed);
  bool differs = false;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const RunRow& row = r.rows[i];
    differs |= row.observed != evaluate(b, row.query);
    bool found = false;
    for (std::size_t j = 0; j <= i; ++j) found |= evaluate(b, r.rows[j].query) == row.regret;
    EXPECT_TRUE(found) << i;
  }
  EXPECT_TRUE(differs);
}

TEST(Bo, InitialDesignInsideBox) {
  const BoxDomain box = BoxDomain::cube(3, -2.0, 1.0);
  Rng rng(0);
  for (SamplingKind kind : {SamplingKind::sobol, SamplingKind::uniform}) {
    const PointSet p = initial_design(10, box, kind, rng);
    for (int i = 0; i < 10; ++i) EXPECT_TRUE(box.contains(Point(p.row(i).transpose())));
  }
}

TEST(Bo, ConfigErrorsBeforeRunning) {
  const Benchmark b = make_benchmark(BenchmarkName::sphere, 2);
  BoConfig c = small_config(OptimizerKind::sobol);
  c.n_init = 1;
  EXPECT_THROW(run_bo(b, c, 0), ConfigError);
  c = small_config(OptimizerKind::cmaes);
  c.budget = 4;
  EXPECT_THROW(run_bo(b, c, 0), ConfigError);
  EXPECT_THROW(run_bo(make_benchmark(BenchmarkName::michalewicz, 2), small_config(OptimizerKind::sobol), 0),
               ConfigError);
}
