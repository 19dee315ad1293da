#include "ksosbo/acquisition.hpp"

#include <cmath>
#include <numbers>

#include "ksosbo/errors.hpp"

namespace ksosbo {

std::string to_string(AcquisitionKind kind) { return kind == AcquisitionKind::ei ? "ei" : "lcb"; }

AcquisitionKind acquisition_kind_from_string(std::string_view name) {
  if (name == "ei") return AcquisitionKind::ei;
  if (name == "lcb") return AcquisitionKind::lcb;
  throw ConfigError("unknown acquisition kind '" + std::string(name) + "'");
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double ei_value(double mean, double std, double f_best, double xi) {
  const double improvement = f_best - mean - xi;
  if (!(std > 0.0)) return std::max(improvement, 0.0);
  const double z = improvement / std;
  return std::max(improvement * normal_cdf(z) + std * normal_pdf(z), 0.0);
}

double lcb_value(double mean, double std, double beta) { return mean - beta * std; }

void AcquisitionParams::validate() const {
  if (!(xi >= 0.0)) throw ConfigError("xi must be non-negative");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
}

AcquisitionObjective::AcquisitionObjective(std::shared_ptr<const GpModel> model, AcquisitionParams params)
    : model_(std::move(model)), params_(params) {
  if (!model_) throw InputError("acquisition needs a model");
  params_.validate();
  f_best_ = model_->data().y.minCoeff();
}

double AcquisitionObjective::ei(const Point& x) const {
  const auto p = model_->posterior(x);
  return ei_value(p.mean, p.std, f_best_, params_.xi);
}

double AcquisitionObjective::operator()(const Point& x) const {
  const auto p = model_->posterior(x);
  if (params_.kind == AcquisitionKind::ei) return -ei_value(p.mean, p.std, f_best_, params_.xi);
  return lcb_value(p.mean, p.std, params_.beta);
}

double acquisition_min_objective(const AcquisitionObjective& obj, const Point& x) { return obj(x); }

}  // namespace ksosbo
