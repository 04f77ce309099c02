#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <memory>

#include "chd/elliptic.hpp"
#include "chd/model.hpp"
#include "chd/potential.hpp"

namespace chd {

struct State {
  double t = 0.0;
  ScalarField phi, mu, q;
  VectorField u;
  BoundaryFlux mu_flux;  // total normal mu-flux consistent with (q, u)
};

struct StepOptions {
  double dt = 1e-3;
  double newton_tol = 1e-10;  // L2 norm of the CH residual in d(phi)/dt units
  int newton_max = 50;
  int picard_iters = 1;       // minimum phi -> q -> u recoupling sweeps
  double picard_tol = 1e-11;  // relative velocity-update tolerance; iterate the
                              // sweeps to the coupled fixed point (0 = run
                              // exactly picard_iters sweeps, lagged velocity)
  int picard_max = 200;
  double damping = 0.9;       // Newton step keeps this fraction of the
                              // distance to the poles +-1 (logarithmic mode)

  void validate() const;
};

// Scheme-evaluation-point data of the producing step, consumed by the
// diagnostics so residuals that the scheme enforces vanish to solver
// tolerance rather than O(dt).
struct StepTrace {
  ScalarField dphi_dt;        // (phi+ - phi n)/dt
  ScalarField source;         // S(phi n)
  ScalarField transport_div;  // div(face_interp(phi n) u~), final sweep
  VectorField transport_u;    // in-step velocity u~
  BoundaryFlux mu_flux;       // in-step mu-flux BC
  int newton_iters = 0;       // largest single Newton solve in the step
  int picard_sweeps = 0;
  long cg_iters = 0;
};

// Optional manufactured-solution forcing, evaluated at t + dt.
struct Forcing {
  ScalarField f_phi;   // added to the phi equation
  ScalarField f_q;     // added to the pressure right-hand side
  BoundaryFlux g_mu;   // added to the mu-flux boundary condition
};

// First-order convex-splitting integrator. Per sweep the CH block
//   (phi+ - phi n)/dt + div(face_interp(phi n) u~) = lap mu+ + S(phi n)
//   mu+ = -lap phi+ + F'(phi+) - theta0 phi n
// is solved by Newton on phi (mu eliminated), then the pressure/velocity
// subsystem is refreshed from mu+ with phi n coefficients; sweeps repeat
// until the velocity update stalls below picard_tol, so the transport
// velocity is the implicit one and the discrete energy law is exact.
// The returned state carries q and u rebuilt from phi+ (div u = S(phi+)).
class Stepper {
 public:
  Stepper(const ModelParams& params, const EllipticOptions& eopts,
          const StepOptions& sopts);

  State initialize(const ScalarField& phi0) const;
  State step(const State& s, StepTrace* trace = nullptr,
             const Forcing* forcing = nullptr);

  const ModelParams& params() const { return params_; }
  const SourceTerm& source() const { return source_; }
  const PotentialEvaluator& potential() const { return pot_; }
  const StepOptions& options() const { return sopts_; }
  const EllipticOptions& elliptic_options() const { return eopts_; }

 private:
  struct NewtonResult {
    int iters = 0;
  };
  NewtonResult newton_solve(ScalarField& phi, ScalarField& mu,
                            const ScalarField& phin, const ScalarField& source_n,
                            const ScalarField& transport_div,
                            const BoundaryFlux& mu_flux,
                            const ScalarField* f_phi);
  ScalarField mu_of(const ScalarField& phi, const ScalarField& phin) const;
  ScalarField ch_residual(const ScalarField& phi, const ScalarField& mu,
                          const ScalarField& phin, const ScalarField& source_n,
                          const ScalarField& transport_div,
                          const BoundaryFlux& mu_flux,
                          const ScalarField* f_phi) const;
  void ensure_grid(const Grid& g);
  void factorize(const ScalarField& phi);
  double damping_limit(const ScalarField& phi, const ScalarField& dphi) const;

  ModelParams params_;
  SourceTerm source_;
  PotentialEvaluator pot_;
  EllipticOptions eopts_;
  StepOptions sopts_;

  Grid grid_;
  bool grid_set_ = false;
  Eigen::SparseMatrix<double> lap_;  // -lap with Neumann closure (SPD part)
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
  bool pattern_analyzed_ = false;
  bool factored_ = false;
};

// Uniqueness functional between two states on the same grid:
//   Y = 1/2 ||grad(phi_a - phi_b)||^2 + 1/2 int L(phi_a, phi_b) |phi_a - phi_b|^2,
//   L = int_0^1 F''(tau phi_a + (1-tau) phi_b) dtau (8-point Gauss-Legendre).
double uniqueness_gap(const State& a, const State& b,
                      const PotentialEvaluator& pot);

}  // namespace chd
