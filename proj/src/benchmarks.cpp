#include "ksosbo/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "ksosbo/errors.hpp"

namespace ksosbo {

namespace {

constexpr double kPi = std::numbers::pi;

struct Entry {
  BenchmarkName name;
  const char* id;
  double lo;
  double hi;
};

constexpr Entry kTable[] = {
    {BenchmarkName::ackley, "ackley", -5.0, 5.0},
    {BenchmarkName::rastrigin, "rastrigin", -5.12, 5.12},
    {BenchmarkName::levy, "levy", -10.0, 10.0},
    {BenchmarkName::griewank, "griewank", -600.0, 600.0},
    {BenchmarkName::schwefel, "schwefel", -500.0, 500.0},
    {BenchmarkName::sphere, "sphere", -5.0, 5.0},
    {BenchmarkName::rotated_hyper_ellipsoid, "rotated_hyper_ellipsoid", -5.0, 5.0},
    {BenchmarkName::sum_of_different_powers, "sum_of_different_powers", -5.0, 5.0},
    {BenchmarkName::trid, "trid", -5.0, 5.0},
    {BenchmarkName::zakharov, "zakharov", -5.0, 10.0},
    {BenchmarkName::rosenbrock, "rosenbrock", -2.0, 2.0},
    {BenchmarkName::dixon_price, "dixon_price", -10.0, 10.0},
    {BenchmarkName::michalewicz, "michalewicz", 0.0, kPi},
    {BenchmarkName::powell, "powell", -4.0, 5.0},
    {BenchmarkName::styblinski_tang, "styblinski_tang", -5.0, 5.0},
};

const Entry& entry(BenchmarkName name) {
  for (const auto& e : kTable) {
    if (e.name == name) return e;
  }
  throw ConfigError("unknown benchmark");
}

double ackley(const Point& x) {
  const double d = static_cast<double>(x.size());
  const double sq = x.squaredNorm() / d;
  const double cs = (2.0 * kPi * x.array()).cos().sum() / d;
  return -20.0 * std::exp(-0.2 * std::sqrt(sq)) - std::exp(cs) + 20.0 + std::numbers::e;
}

double rastrigin(const Point& x) {
  return 10.0 * static_cast<double>(x.size()) +
         (x.array().square() - 10.0 * (2.0 * kPi * x.array()).cos()).sum();
}

double levy(const Point& x) {
  const Eigen::ArrayXd w = 1.0 + (x.array() - 1.0) / 4.0;
  const Eigen::Index d = w.size();
  double f = std::pow(std::sin(kPi * w(0)), 2);
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    f += (w(i) - 1.0) * (w(i) - 1.0) * (1.0 + 10.0 * std::pow(std::sin(kPi * w(i) + 1.0), 2));
  }
  f += (w(d - 1) - 1.0) * (w(d - 1) - 1.0) * (1.0 + std::pow(std::sin(2.0 * kPi * w(d - 1)), 2));
  return f;
}

double griewank(const Point& x) {
  double prod = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) prod *= std::cos(x(i) / std::sqrt(static_cast<double>(i + 1)));
  return x.squaredNorm() / 4000.0 - prod + 1.0;
}

double schwefel(const Point& x) {
  return 418.9829 * static_cast<double>(x.size()) - (x.array() * x.array().abs().sqrt().sin()).sum();
}

double rotated_hyper_ellipsoid(const Point& x) {
  double f = 0.0;
  double partial = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    partial += x(i) * x(i);
    f += partial;
  }
  return f;
}

double sum_of_different_powers(const Point& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) f += std::pow(std::abs(x(i)), static_cast<double>(i + 2));
  return f;
}

double trid(const Point& x) {
  double f = (x.array() - 1.0).square().sum();
  for (Eigen::Index i = 1; i < x.size(); ++i) f -= x(i) * x(i - 1);
  return f;
}

double zakharov(const Point& x) {
  double lin = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) lin += 0.5 * static_cast<double>(i + 1) * x(i);
  return x.squaredNorm() + lin * lin + lin * lin * lin * lin;
}

double rosenbrock(const Point& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i + 1) - x(i) * x(i);
    f += 100.0 * a * a + (1.0 - x(i)) * (1.0 - x(i));
  }
  return f;
}

double dixon_price(const Point& x) {
  double f = (x(0) - 1.0) * (x(0) - 1.0);
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    const double t = 2.0 * x(i) * x(i) - x(i - 1);
    f += static_cast<double>(i + 1) * t * t;
  }
  return f;
}

double michalewicz(const Point& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double inner = std::sin(static_cast<double>(i + 1) * x(i) * x(i) / kPi);
    f -= std::sin(x(i)) * std::pow(inner, 2 * kMichalewiczSteepness);
  }
  return f;
}

double powell(const Point& x) {
  double f = 0.0;
  for (Eigen::Index k = 0; k + 3 < x.size(); k += 4) {
    const double a = x(k) + 10.0 * x(k + 1);
    const double b = x(k + 2) - x(k + 3);
    const double c = x(k + 1) - 2.0 * x(k + 2);
    const double e = x(k) - x(k + 3);
    f += a * a + 5.0 * b * b + c * c * c * c + 10.0 * e * e * e * e;
  }
  return f;
}

double styblinski_tang(const Point& x) {
  const Eigen::ArrayXd a = x.array();
  return 0.5 * (a.pow(4) - 16.0 * a.square() + 5.0 * a).sum();
}

void check_dim(BenchmarkName name, int dim) {
  if (dim < 1) throw ConfigError(to_string(name) + ": dimension must be at least 1");
  if (name == BenchmarkName::rosenbrock && dim < 2) throw ConfigError("rosenbrock requires dimension >= 2");
  if (name == BenchmarkName::powell && dim % 4 != 0) {
    throw ConfigError("powell requires a dimension divisible by 4, got " + std::to_string(dim));
  }
}

std::optional<Point> minimizer(BenchmarkName name, int dim) {
  switch (name) {
    case BenchmarkName::levy:
    case BenchmarkName::rosenbrock: return Point::Ones(dim);
    case BenchmarkName::schwefel: return Point::Constant(dim, 420.9687);
    case BenchmarkName::styblinski_tang: return Point::Constant(dim, -2.903534);
    case BenchmarkName::trid: {
      Point x(dim);
      for (int i = 0; i < dim; ++i) x(i) = static_cast<double>((i + 1) * (dim - i));
      return x;
    }
    case BenchmarkName::dixon_price: {
      Point x(dim);
      for (int i = 0; i < dim; ++i) {
        const double p = std::pow(2.0, i + 1);
        x(i) = std::pow(2.0, -(p - 2.0) / p);
      }
      return x;
    }
    case BenchmarkName::michalewicz: return std::nullopt;
    default: return Point::Zero(dim);
  }
}

}  // namespace

const std::vector<BenchmarkName>& all_benchmarks() {
  static const std::vector<BenchmarkName> names = [] {
    std::vector<BenchmarkName> v;
    for (const auto& e : kTable) v.push_back(e.name);
    return v;
  }();
  return names;
}

std::string to_string(BenchmarkName name) { return entry(name).id; }

BenchmarkName benchmark_from_string(std::string_view name) {
  for (const auto& e : kTable) {
    if (name == e.id) return e.name;
  }
  throw ConfigError("unknown benchmark '" + std::string(name) + "'");
}

double optimum_value(BenchmarkName name, int dim) {
  check_dim(name, dim);
  const double d = static_cast<double>(dim);
  switch (name) {
    case BenchmarkName::trid: return -d * (d + 4.0) * (d - 1.0) / 6.0;
    case BenchmarkName::styblinski_tang: return -39.16599 * d;
    case BenchmarkName::michalewicz:
      if (dim == 10) return -9.66;
      throw ConfigError("michalewicz optimum is only published for dimension 10, got " + std::to_string(dim));
    default: return 0.0;
  }
}

Benchmark make_benchmark(BenchmarkName name, int dim) {
  check_dim(name, dim);
  const Entry& e = entry(name);
  Benchmark b{name, dim, BoxDomain::cube(dim, e.lo, e.hi), std::nullopt, minimizer(name, dim)};
  if (name != BenchmarkName::michalewicz || dim == 10) b.f_star = optimum_value(name, dim);
  return b;
}

double Benchmark::require_f_star() const {
  if (!f_star) {
    throw ConfigError(to_string(name) + ": no known optimum for dimension " + std::to_string(dim) +
                      "; regret is undefined");
  }
  return *f_star;
}

double evaluate(const Benchmark& b, const Point& x, BoundsPolicy policy) {
  if (x.size() != b.dim) {
    throw InputError(to_string(b.name) + ": expected dimension " + std::to_string(b.dim) + ", got " +
                     std::to_string(x.size()));
  }
  if (policy == BoundsPolicy::strict && !b.box.contains(x)) {
    throw InputError(to_string(b.name) + ": point outside the domain");
  }
  switch (b.name) {
    case BenchmarkName::ackley: return ackley(x);
    case BenchmarkName::rastrigin: return rastrigin(x);
    case BenchmarkName::levy: return levy(x);
    case BenchmarkName::griewank: return griewank(x);
    case BenchmarkName::schwefel: return schwefel(x);
    case BenchmarkName::sphere: return x.squaredNorm();
    case BenchmarkName::rotated_hyper_ellipsoid: return rotated_hyper_ellipsoid(x);
    case BenchmarkName::sum_of_different_powers: return sum_of_different_powers(x);
    case BenchmarkName::trid: return trid(x);
    case BenchmarkName::zakharov: return zakharov(x);
    case BenchmarkName::rosenbrock: return rosenbrock(x);
    case BenchmarkName::dixon_price: return dixon_price(x);
    case BenchmarkName::michalewicz: return michalewicz(x);
    case BenchmarkName::powell: return powell(x);
    case BenchmarkName::styblinski_tang: return styblinski_tang(x);
  }
  return 0.0;
}

}  // namespace ksosbo
