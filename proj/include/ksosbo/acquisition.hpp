#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "ksosbo/gp.hpp"

namespace ksosbo {

enum class AcquisitionKind { ei, lcb };

std::string to_string(AcquisitionKind kind);
AcquisitionKind acquisition_kind_from_string(std::string_view name);

double normal_pdf(double z);
/// Phi(z) via erfc, accurate in both tails.
double normal_cdf(double z);

/// Expected improvement below f_best, minimization convention.
double ei_value(double mean, double std, double f_best, double xi);
double lcb_value(double mean, double std, double beta);

struct AcquisitionParams {
  AcquisitionKind kind = AcquisitionKind::ei;
  double xi = 0.01;
  double beta = 2.0;

  void validate() const;
};

/// Acquisition induced by a fitted model; lower values are better for every kind.
class AcquisitionObjective {
 public:
  AcquisitionObjective(std::shared_ptr<const GpModel> model, AcquisitionParams params);

  const GpModel& model() const { return *model_; }
  const AcquisitionParams& params() const { return params_; }
  double f_best() const { return f_best_; }

  /// -EI for the ei kind, LCB for the lcb kind.
  double operator()(const Point& x) const;
  /// The raw (non-negated) EI at x.
  double ei(const Point& x) const;

 private:
  std::shared_ptr<const GpModel> model_;
  AcquisitionParams params_;
  double f_best_;
};

double acquisition_min_objective(const AcquisitionObjective& obj, const Point& x);

}  // namespace ksosbo
