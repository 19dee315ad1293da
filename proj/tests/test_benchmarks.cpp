#include <gtest/gtest.h>

#include <cmath>

#include "ksosbo/benchmarks.hpp"
#include "ksosbo/errors.hpp"

using namespace ksosbo;

TEST(Benchmarks, KnownPoints) {
  const Benchmark r = make_benchmark(BenchmarkName::rastrigin, 2);
  EXPECT_NEAR(evaluate(r, Point::Ones(2)), 2.0, 1e-12);
  const Benchmark s = make_benchmark(BenchmarkName::sphere, 3);
  EXPECT_DOUBLE_EQ(evaluate(s, Point::Constant(3, 2.0)), 12.0);
  const Benchmark p = make_benchmark(BenchmarkName::sum_of_different_powers, 2);
  Point x(2);
  x << -2.0, 2.0;
  EXPECT_DOUBLE_EQ(evaluate(p, x), 4.0 + 8.0);
  const Benchmark rb = make_benchmark(BenchmarkName::rosenbrock, 2);
  EXPECT_DOUBLE_EQ(evaluate(rb, Point::Zero(2)), 1.0);
}

TEST(Benchmarks, TridOptimum) {
  EXPECT_DOUBLE_EQ(optimum_value(BenchmarkName::trid, 10), -210.0);
  EXPECT_DOUBLE_EQ(optimum_value(BenchmarkName::trid, 5), -30.0);
  const Benchmark t = make_benchmark(BenchmarkName::trid, 5);
  EXPECT_NEAR(evaluate(t, *t.x_star, BoundsPolicy::lenient), -30.0, 1e-12);
}

TEST(Benchmarks, SchwefelNearZeroAtPublishedMinimizer) {
  const Benchmark b = make_benchmark(BenchmarkName::schwefel, 10);
  EXPECT_LT(std::abs(evaluate(b, *b.x_star)), 1e-3);
}

TEST(Benchmarks, NoKnownPointBeatsOptimum) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (BenchmarkName name : all_benchmarks()) {
    const int d = name == BenchmarkName::powell ? 4 : (name == BenchmarkName::michalewicz ? 10 : 3);
    const Benchmark b = make_benchmark(name, d);
    ASSERT_TRUE(b.f_star.has_value()) << to_string(name);
    for (int k = 0; k < 200; ++k) {
      Point x(d);
      for (int j = 0; j < d; ++j) x(j) = b.box.lower()(j) + u(rng) * b.box.range()(j);
      EXPECT_GE(evaluate(b, x), *b.f_star - 1e-3) << to_string(name);
    }
  }
}

TEST(Benchmarks, DimensionRules) {
  EXPECT_THROW(make_benchmark(BenchmarkName::powell, 6), ConfigError);
  EXPECT_NO_THROW(make_benchmark(BenchmarkName::powell, 8));
  EXPECT_THROW(make_benchmark(BenchmarkName::rosenbrock, 1), ConfigError);
  EXPECT_THROW(make_benchmark(BenchmarkName::sphere, 0), ConfigError);
  const Benchmark m = make_benchmark(BenchmarkName::michalewicz, 3);
  EXPECT_FALSE(m.f_star.has_value());
  EXPECT_THROW(m.require_f_star(), ConfigError);
}

TEST(Benchmarks, StrictBoundsAndDimension) {
  const Benchmark b = make_benchmark(BenchmarkName::ackley, 2);
  EXPECT_THROW(evaluate(b, Point::Constant(2, 6.0)), InputError);
  EXPECT_NO_THROW(evaluate(b, Point::Constant(2, 6.0), BoundsPolicy::lenient));
  EXPECT_THROW(evaluate(b, Point::Zero(3)), InputError);
}

TEST(Benchmarks, NamesRoundTrip) {
  EXPECT_EQ(all_benchmarks().size(), 15u);
  for (BenchmarkName name : all_benchmarks()) EXPECT_EQ(benchmark_from_string(to_string(name)), name);
  EXPECT_THROW(benchmark_from_string("beale"), ConfigError);
}
