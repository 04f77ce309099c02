#pragma once

#include <string>

#include "chd/stepper.hpp"

namespace chd {

// Per-step scalar diagnostics. Column order matches the CSV contract:
// t, E, phi_bar, grad_mu_sq, u_sq, forcing, ei_residual, mass_residual,
// pp2_res, mup_res_int, mup_res_bc, phiqp_res, phi_min, phi_max,
// newton_iters, cg_iters.
struct DiagnosticsRecord {
  double t = 0.0;
  double E = 0.0;
  double phi_bar = 0.0;
  double grad_mu_sq = 0.0;   // interior-face quadrature of |grad mu|^2
  double u_sq = 0.0;         // face quadrature of |u|^2 (half-weight walls)
  double forcing = 0.0;      // int S q + S mu, S at the scheme's point
  double ei_residual = 0.0;
  double mass_residual = 0.0;
  double pp2_res = 0.0;
  double mup_res_int = 0.0;
  double mup_res_bc = 0.0;
  double phiqp_res = 0.0;
  double phi_min = 0.0;
  double phi_max = 0.0;
  int newton_iters = 0;
  long cg_iters = 0;
};

// Discrete Ginzburg-Landau energy: 1/2 |grad phi|^2 faces + Psi(phi) cells.
double energy(const ScalarField& phi, const PotentialEvaluator& pot);

// (E+ - En)/dt + ||grad mu+||^2 + ||u+||^2 - int(S q+ + S mu+), with S the
// scheme's source S(phi n).
double energy_identity_residual(const State& prev, const State& cur,
                                const ScalarField& scheme_source,
                                const PotentialEvaluator& pot, double dt);

// L2 residual of the pressure reformulation
// -lap q = (-phi - phi^3)/(1+phi^2) grad phi . grad q
//          + (1 - phi^2) grad mu . grad phi + phi d_t phi + S (1+phi^2-phi).
double pp2_residual(const State& s, const ScalarField& dphi_dt,
                    const ModelParams& params, const SourceTerm& source);

// Interior: ||-lap mu - S + d_t phi + div(u phi_face)||, with the transport
// divergence supplied by the caller (state-rebuilt for the record; the
// scheme's own terms drive it to Newton tolerance).
double mup_residual_interior(const State& s, const ScalarField& dphi_dt,
                             const ScalarField& source,
                             const ScalarField& transport_div);
// Edge-quadrature norm of (1+phi^2) dn_mu + phi dn_q via one-sided
// second-order differences, corner-adjacent faces excluded.
double mup_residual_bc(const State& s);

// L2 residual of the identity for lap(phi q / (1+phi^2)).
double phiqp_residual(const State& s, const ScalarField& dphi_dt,
                      const ModelParams& params, const SourceTerm& source);

DiagnosticsRecord record(const State& prev, const State& cur,
                         const StepTrace& trace, const ModelParams& params,
                         const SourceTerm& source, const PotentialEvaluator& pot,
                         double dt);

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);

}  // namespace chd
