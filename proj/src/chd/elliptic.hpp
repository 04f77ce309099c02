#pragma once

#include "chd/ops.hpp"

namespace chd {

struct EllipticOptions {
  double tol = 1e-10;  // relative residual target
  int max_iter = 0;    // 0 -> 20*(nx+ny)
  enum class Method { Cg, Direct } method = Method::Cg;
};

struct SolveStats {
  int iters = 0;
  double rel_residual = 0.0;
};

// -lap q = f with homogeneous Dirichlet walls (odd ghosts).
ScalarField solve_dirichlet(const ScalarField& f, const EllipticOptions& opts,
                            SolveStats* stats = nullptr);

// -lap q = f with prescribed outward flux g, solved on the mean-zero
// subspace by deflated CG and shifted to target_mean. Requires the discrete
// compatibility |int f + bdry int g| <= 1e-8 (||f|| + ||g|| + 1).
ScalarField solve_neumann(const ScalarField& f, const BoundaryFlux& g,
                          double target_mean, const EllipticOptions& opts,
                          SolveStats* stats = nullptr);

// Pressure/velocity subsystem for a given (phi, mu) pair:
//   -lap q = source + div(face_interp(phi) grad mu) + extra_pressure_rhs
//   with q = 0 on walls and the mu-flux boundary relation
//   (1 + phi_b^2) dn_mu = -phi_b dn_q + extra_mu_flux
// folded into the operator (boundary-face coefficient scaled by
// 1/(1+phi_b^2)), then
//   u = -grad(q, dirichlet) - face_interp(phi) grad(mu, flux dn_mu).
// By construction div u = source + extra_pressure_rhs up to the CG residual.
struct DarcyResult {
  ScalarField q;
  VectorField u;
  BoundaryFlux mu_flux;  // resulting total dn_mu at boundary faces
  SolveStats stats;
};

DarcyResult solve_darcy(const ScalarField& phi, const ScalarField& mu,
                        const ScalarField& source, const EllipticOptions& opts,
                        const BoundaryFlux* extra_mu_flux = nullptr,
                        const ScalarField* extra_pressure_rhs = nullptr,
                        const ScalarField* q_warm = nullptr);

// Velocity assembly u = -grad(q, dirichlet) - face_interp(phi) grad(mu, flux).
VectorField darcy_update(const ScalarField& q, const ScalarField& phi,
                         const ScalarField& mu, const BoundaryFlux& mu_flux);

}  // namespace chd
