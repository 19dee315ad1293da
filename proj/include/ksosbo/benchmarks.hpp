#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ksosbo/types.hpp"

namespace ksosbo {

enum class BenchmarkName {
  ackley,
  rastrigin,
  levy,
  griewank,
  schwefel,
  sphere,
  rotated_hyper_ellipsoid,
  sum_of_different_powers,
  trid,
  zakharov,
  rosenbrock,
  dixon_price,
  michalewicz,
  powell,
  styblinski_tang,
};

/// All 15 names in a fixed order.
const std::vector<BenchmarkName>& all_benchmarks();

std::string to_string(BenchmarkName name);
BenchmarkName benchmark_from_string(std::string_view name);

/// Analytic test function bound to a dimension. `f_star` is absent only for
/// Michalewicz at dimensions without a published optimum.
struct Benchmark {
  BenchmarkName name;
  int dim = 0;
  BoxDomain box;
  std::optional<double> f_star;
  std::optional<Point> x_star;

  /// f_star, or ConfigError when it is not known for this dimension.
  double require_f_star() const;
};

/// Minimum value for `name` at `dim`; ConfigError where none is published.
double optimum_value(BenchmarkName name, int dim);

/// Validates `dim` (>= 1; Rosenbrock >= 2; Powell a multiple of 4).
Benchmark make_benchmark(BenchmarkName name, int dim);

enum class BoundsPolicy { strict, lenient };

/// Evaluates the function. Strict mode rejects points outside the box.
double evaluate(const Benchmark& b, const Point& x, BoundsPolicy policy = BoundsPolicy::strict);

/// Michalewicz steepness parameter.
inline constexpr int kMichalewiczSteepness = 10;

}  // namespace ksosbo
