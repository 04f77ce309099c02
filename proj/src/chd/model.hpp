#pragma once

#include <string>
#include <vector>

#include "chd/field.hpp"

namespace chd {

enum class PotentialMode { Logarithmic, Regularized };

// Built-in source shape h on [-1,1].
struct HSpec {
  enum class Kind { Zero, Constant, LinearHalf, Parabolic, Spline };
  Kind kind = Kind::Zero;
  double c = 0.0;  // constant value, or lambda for the parabolic shape
  std::vector<double> spline_s, spline_y;  // strictly increasing s covering [-1,1]
  std::string spline_path;                 // origin file, kept for round-trips

  static HSpec zero() { return {}; }
  static HSpec constant(double v) { return {Kind::Constant, v, {}, {}, {}}; }
  static HSpec linear_half() { return {Kind::LinearHalf, 0.0, {}, {}, {}}; }
  static HSpec parabolic(double lambda) { return {Kind::Parabolic, lambda, {}, {}, {}}; }
  static HSpec spline(std::vector<double> s, std::vector<double> y) {
    return {Kind::Spline, 0.0, std::move(s), std::move(y), {}};
  }
};

struct ModelParams {
  double m = 1.0;        // proliferation rate, > 0
  HSpec h;
  double eps_ext = 0.05; // extension margin for h-tilde
  double theta = 1.0;    // 0 < theta < theta0
  double theta0 = 2.0;
  PotentialMode pot_mode = PotentialMode::Logarithmic;
  int pot_n = 4;         // regularized cutoff index, >= 2
  double pot_kappa = 1.0;
  bool source_off = false;        // debug: force S = 0 regardless of m, h
  bool paper_mass_bounds = false; // use the |Omega|-normalized asymptotes

  void validate() const;
};

// C^2 total-line extension h-tilde of h: equal to h on [-1,1], quintic
// Hermite blends over [1, 1+delta] / [-1-delta, -1] onto constant plateaus,
// range within [h_min - eps, h_max + eps].
class SourceTerm {
 public:
  SourceTerm(const HSpec& spec, double eps_ext);

  double h(double s) const;
  double dh(double s) const;
  double d2h(double s) const;

  double h_min() const { return hmin_; }   // min of h over [-1,1]
  double h_max() const { return hmax_; }
  double range_lo() const { return hmin_ - eps_; }
  double range_hi() const { return hmax_ + eps_; }
  double sup_dh() const { return sup_dh_; }
  double sup_d2h() const { return sup_d2h_; }
  double blend_width_upper() const { return dplus_; }
  double blend_width_lower() const { return dminus_; }

 private:
  struct Blend {             // quintic on [0, delta], measured from the junction
    double delta = 0.0;
    double v0 = 0.0, d0 = 0.0, c0 = 0.0;  // value/1st/2nd derivative at u=0
    double plateau = 0.0;
    double eval(double u) const;
    double deriv(double u) const;
    double deriv2(double u) const;
  };

  double h_base(double s) const;
  double dh_base(double s) const;
  double d2h_base(double s) const;
  Blend fit_blend(double v0, double d0, double c0) const;

  HSpec spec_;
  double eps_;
  double hmin_ = 0.0, hmax_ = 0.0;
  double dplus_ = 0.0, dminus_ = 0.0;
  Blend up_, down_;  // s > 1 and s < -1 closures (down_ in mirrored coords)
  double sup_dh_ = 0.0, sup_d2h_ = 0.0;
  std::vector<double> spl_m_;  // spline second derivatives
};

// S = -m*phi + h-tilde(phi), pointwise; identically zero under source_off.
ScalarField source_eval(const ScalarField& phi, const ModelParams& params,
                        const SourceTerm& source);

// Closed-form solution of d/dt pb + m pb = c.
double mass_ode_solution(double phi_bar0, double m, double c, double t);

struct MassBounds {
  double c1 = 0.0, c2 = 0.0;
};

// Envelope [min(pb0, hmin/m), max(pb0, hmax/m)] of the mass law; throws
// AdmissibilityError if it is not contained in (-1,1) or pb0 is outside.
// paper_variant applies the printed 1/|Omega| normalization instead (kept
// for comparison; inconsistent with the displayed ODE unless |Omega| = 1).
MassBounds mass_bounds(const ModelParams& params, const SourceTerm& source,
                       double phi_bar0);
MassBounds mass_bounds_paper(const ModelParams& params, const SourceTerm& source,
                             double phi_bar0, double omega_area);

}  // namespace chd
