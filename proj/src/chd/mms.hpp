#pragma once

#include "chd/stepper.hpp"

namespace chd {

// Manufactured solution for the forced system:
//   phi*(x,y,t) = a cos(pi x/lx) cos(pi y/ly) (1 + t/2)
//   q*(x,y,t)   = b sin(pi x/lx) sin(pi y/ly) (1 + t/2)
//   mu*         = -lap phi* + Psi'(phi*),  u* = -grad q* - phi* grad mu*.
// phi* has zero normal derivative and q* zero trace on all edges. Forcings
// f_phi (phi equation), f_q (pressure equation) and g_mu (mu-flux data) are
// closed forms derived from these fields; they vanish when a = b = 0.
// Requires the regularized potential with a (1 + t_end/2) < 1 - 1/n so the
// logarithmic branch formulas hold along the exact solution.
class MmsSolution {
 public:
  MmsSolution(const Grid& grid, const ModelParams& params,
              const SourceTerm& source, double a, double b, double t_end);

  ScalarField phi_exact(double t) const;
  ScalarField q_exact(double t) const;
  Forcing forcing(double t) const;

 private:
  struct Point {
    double phi, phi_t, phi_x, phi_y, lap_phi;
    double mu, mu_x, mu_y, lap_mu;
    double q, q_x, q_y, lap_q;
  };
  Point eval(double x, double y, double t) const;

  Grid grid_;
  ModelParams params_;
  const SourceTerm* source_;
  double a_, b_;
  double kx_, ky_;
};

}  // namespace chd
