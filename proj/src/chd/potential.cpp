#include "chd/potential.hpp"

#include <cmath>
#include <limits>

#include "chd/errors.hpp"

namespace chd {

PotentialEvaluator::PotentialEvaluator(double theta, double theta0,
                                       PotentialMode mode, int n, double kappa)
    : theta_(theta), theta0_(theta0), mode_(mode), kappa_(kappa) {
  if (theta <= 0.0 || theta0 <= 0.0 || theta >= theta0)
    throw ConfigError("potential: need 0 < theta < theta0");
  if (mode_ == PotentialMode::Regularized) {
    if (n < 2) throw ConfigError("potential.n: must be >= 2");
    if (kappa <= 0.0) throw ConfigError("potential.kappa: must be > 0");
    delta_ = 1.0 - 1.0 / n;
  }
}

PotentialEvaluator PotentialEvaluator::logarithmic(double theta, double theta0) {
  return PotentialEvaluator(theta, theta0, PotentialMode::Logarithmic, 0, 0.0);
}

PotentialEvaluator PotentialEvaluator::regularized(double theta, double theta0,
                                                   int n, double kappa) {
  return PotentialEvaluator(theta, theta0, PotentialMode::Regularized, n, kappa);
}

PotentialEvaluator PotentialEvaluator::from_params(const ModelParams& p) {
  return p.pot_mode == PotentialMode::Logarithmic
             ? logarithmic(p.theta, p.theta0)
             : regularized(p.theta, p.theta0, p.pot_n, p.pot_kappa);
}

double PotentialEvaluator::domain_radius() const {
  return is_logarithmic() ? 1.0 : std::numeric_limits<double>::infinity();
}

double PotentialEvaluator::flog(double s) const {
  // (1+s)log(1+s) + (1-s)log(1-s), with the 0*log(0) = 0 limit at the ends.
  const double a = 1.0 + s, b = 1.0 - s;
  const double ta = (a > 0.0) ? a * std::log(a) : 0.0;
  const double tb = (b > 0.0) ? b * std::log(b) : 0.0;
  return 0.5 * theta_ * (ta + tb);
}

double PotentialEvaluator::flog_prime(double s) const {
  return 0.5 * theta_ * (std::log1p(s) - std::log1p(-s));
}

double PotentialEvaluator::flog_second(double s) const {
  return theta_ / ((1.0 - s) * (1.0 + s));
}

namespace {
[[noreturn]] void domain_fail(double s) {
  throw DomainError("potential: |s| >= 1 in logarithmic mode (s = " +
                    std::to_string(s) + ")");
}
}  // namespace

double PotentialEvaluator::f(double s) const {
  if (is_logarithmic()) {
    if (!(std::abs(s) < 1.0)) domain_fail(s);
    return flog(s);
  }
  const double a = std::abs(s);
  double val;
  if (a <= delta_) {
    val = flog(s);
  } else {
    const double e = a - delta_;
    val = flog(delta_) + flog_prime(delta_) * e + 0.5 * flog_second(delta_) * e * e;
  }
  if (a > 1.0) {
    const double w = a - 1.0;
    val += 0.5 * kappa_ * w * w * w * w * w * w;
  }
  return val;
}

double PotentialEvaluator::f_prime(double s) const {
  if (is_logarithmic()) {
    if (!(std::abs(s) < 1.0)) domain_fail(s);
    return flog_prime(s);
  }
  const double a = std::abs(s);
  const double sgn = (s >= 0.0) ? 1.0 : -1.0;
  double val;
  if (a <= delta_) {
    val = flog_prime(s);
  } else {
    const double e = a - delta_;
    val = sgn * (flog_prime(delta_) + flog_second(delta_) * e);
  }
  if (a > 1.0) {
    const double w = a - 1.0;
    val += sgn * 3.0 * kappa_ * w * w * w * w * w;
  }
  return val;
}

double PotentialEvaluator::f_second(double s) const {
  if (is_logarithmic()) {
    if (!(std::abs(s) < 1.0)) domain_fail(s);
    return flog_second(s);
  }
  const double a = std::abs(s);
  double val = (a <= delta_) ? flog_second(s) : flog_second(delta_);
  if (a > 1.0) {
    const double w = a - 1.0;
    val += 15.0 * kappa_ * w * w * w * w;
  }
  return val;
}

}  // namespace chd
