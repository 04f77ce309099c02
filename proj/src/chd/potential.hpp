#pragma once

#include "chd/model.hpp"

namespace chd {

// Flory-Huggins potential Psi(s) = F(s) - (theta0/2) s^2, where F is the
// convex logarithmic part (theta/2)[(1+s)log(1+s) + (1-s)log(1-s)].
//
// Regularized mode replaces F by F_n = T2[F] + G: the second-order Taylor
// extension of F beyond |s| = 1 - 1/n plus the sextic tail
// G(s) = (kappa/2)(|s|-1)^6 for |s| > 1, so F_n'(r) sign(r)/|r|^5 -> 3 kappa.
class PotentialEvaluator {
 public:
  static PotentialEvaluator logarithmic(double theta, double theta0);
  static PotentialEvaluator regularized(double theta, double theta0, int n,
                                        double kappa);
  static PotentialEvaluator from_params(const ModelParams& p);

  double psi(double s) const { return f(s) - 0.5 * theta0_ * s * s; }
  double psi_prime(double s) const { return f_prime(s) - theta0_ * s; }
  double psi_second(double s) const { return f_second(s) - theta0_; }

  double f(double s) const;
  double f_prime(double s) const;
  double f_second(double s) const;

  bool is_logarithmic() const { return mode_ == PotentialMode::Logarithmic; }
  double domain_radius() const;  // 1 in logarithmic mode, +inf otherwise
  double delta_n() const { return delta_; }
  double theta() const { return theta_; }
  double theta0() const { return theta0_; }

 private:
  PotentialEvaluator(double theta, double theta0, PotentialMode mode, int n,
                     double kappa);
  double flog(double s) const;
  double flog_prime(double s) const;
  double flog_second(double s) const;

  double theta_, theta0_;
  PotentialMode mode_;
  double delta_ = 0.0;  // 1 - 1/n cutoff (regularized mode)
  double kappa_ = 0.0;
};

}  // namespace chd
