#include "chd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chd {

double energy(const ScalarField& phi, const PotentialEvaluator& pot) {
  const VectorField gp = grad(phi, GradBc::NeumannZero);
  std::vector<double> psi(phi.v.size());
  for (size_t k = 0; k < phi.v.size(); ++k) psi[k] = pot.psi(phi.v[k]);
  return 0.5 * inner_faces(gp, gp) +
         pairwise_sum(psi) * phi.grid.cell_area();
}

double energy_identity_residual(const State& prev, const State& cur,
                                const ScalarField& scheme_source,
                                const PotentialEvaluator& pot, double dt) {
  const double ep = energy(prev.phi, pot);
  const double ec = energy(cur.phi, pot);
  const VectorField gm = grad(cur.mu, GradBc::NeumannZero);
  const double gm2 = inner_faces_interior(gm, gm);
  const double u2 = inner_faces(cur.u, cur.u);
  const double f = inner(scheme_source, cur.q) + inner(scheme_source, cur.mu);
  return (ec - ep) / dt + gm2 + u2 - f;
}

namespace {

struct CellGrads {
  ScalarField px, py, mx, my, qx, qy;
};

CellGrads cell_gradients(const State& s) {
  CellGrads c;
  auto [px, py] = avg_to_centers(grad(s.phi, GradBc::NeumannZero));
  auto [mx, my] = avg_to_centers(grad(s.mu, GradBc::Flux, &s.mu_flux));
  auto [qx, qy] = avg_to_centers(grad(s.q, GradBc::DirichletZero));
  c.px = std::move(px); c.py = std::move(py);
  c.mx = std::move(mx); c.my = std::move(my);
  c.qx = std::move(qx); c.qy = std::move(qy);
  return c;
}

}  // namespace

double pp2_residual(const State& s, const ScalarField& dphi_dt,
                    const ModelParams& params, const SourceTerm& source) {
  const Grid& g = s.phi.grid;
  const ScalarField lapq = laplacian_dirichlet_diag(s.q);
  const CellGrads c = cell_gradients(s);
  const ScalarField S = source_eval(s.phi, params, source);
  std::vector<double> r2(static_cast<size_t>(g.cells()));
  for (size_t k = 0; k < r2.size(); ++k) {
    const double p = s.phi.v[k];
    const double gp_gq = c.px.v[k] * c.qx.v[k] + c.py.v[k] * c.qy.v[k];
    const double gm_gp = c.mx.v[k] * c.px.v[k] + c.my.v[k] * c.py.v[k];
    const double rhs = (-p - p * p * p) / (1.0 + p * p) * gp_gq +
                       (1.0 - p * p) * gm_gp + p * dphi_dt.v[k] +
                       S.v[k] * (1.0 + p * p - p);
    const double diff = -lapq.v[k] - rhs;
    r2[k] = diff * diff;
  }
  return std::sqrt(pairwise_sum(r2) * g.cell_area());
}

double mup_residual_interior(const State& s, const ScalarField& dphi_dt,
                             const ScalarField& source,
                             const ScalarField& transport_div) {
  const Grid& g = s.phi.grid;
  const ScalarField lapmu = div(grad(s.mu, GradBc::Flux, &s.mu_flux));
  std::vector<double> r2(static_cast<size_t>(g.cells()));
  for (size_t k = 0; k < r2.size(); ++k) {
    const double diff =
        -lapmu.v[k] - source.v[k] + dphi_dt.v[k] + transport_div.v[k];
    r2[k] = diff * diff;
  }
  return std::sqrt(pairwise_sum(r2) * g.cell_area());
}

double mup_residual_bc(const State& s) {
  const Grid& g = s.phi.grid;
  const BoundaryFlux dmu = wall_normal_derivative(s.mu);
  const BoundaryFlux dq = wall_normal_derivative(s.q);
  const BoundaryFlux pw = wall_trace(s.phi);
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(2 * (g.nx + g.ny)));
  auto add = [&](double phi_w, double dnmu, double dnq, double h_edge) {
    const double e = (1.0 + phi_w * phi_w) * dnmu + phi_w * dnq;
    terms.push_back(e * e * h_edge);
  };
  for (int j = 1; j < g.ny - 1; ++j) {  // corner-adjacent faces excluded
    add(pw.left[static_cast<size_t>(j)], dmu.left[static_cast<size_t>(j)],
        dq.left[static_cast<size_t>(j)], g.hy);
    add(pw.right[static_cast<size_t>(j)], dmu.right[static_cast<size_t>(j)],
        dq.right[static_cast<size_t>(j)], g.hy);
  }
  for (int i = 1; i < g.nx - 1; ++i) {
    add(pw.bottom[static_cast<size_t>(i)], dmu.bottom[static_cast<size_t>(i)],
        dq.bottom[static_cast<size_t>(i)], g.hx);
    add(pw.top[static_cast<size_t>(i)], dmu.top[static_cast<size_t>(i)],
        dq.top[static_cast<size_t>(i)], g.hx);
  }
  return std::sqrt(pairwise_sum(terms));
}

double phiqp_residual(const State& s, const ScalarField& dphi_dt,
                      const ModelParams& params, const SourceTerm& source) {
  const Grid& g = s.phi.grid;
  ScalarField w(g);
  for (size_t k = 0; k < w.v.size(); ++k) {
    const double p = s.phi.v[k];
    w.v[k] = p / (1.0 + p * p) * s.q.v[k];
  }
  const ScalarField lapw = laplacian_dirichlet_diag(w);
  const ScalarField lapphi = laplacian_neumann(s.phi);
  const CellGrads c = cell_gradients(s);
  const ScalarField S = source_eval(s.phi, params, source);
  std::vector<double> r2(static_cast<size_t>(g.cells()));
  for (size_t k = 0; k < r2.size(); ++k) {
    const double p = s.phi.v[k];
    const double opp = 1.0 + p * p;
    const double omp = 1.0 - p * p;
    const double gp_gm = c.px.v[k] * c.mx.v[k] + c.py.v[k] * c.my.v[k];
    const double gp_gq = c.px.v[k] * c.qx.v[k] + c.py.v[k] * c.qy.v[k];
    const double gp2 = c.px.v[k] * c.px.v[k] + c.py.v[k] * c.py.v[k];
    const double gprime = omp / (opp * opp);
    const double gsecond = (2.0 * p * p * p - 6.0 * p) / (opp * opp * opp);
    const double lap_gphi = gprime * lapphi.v[k] + gsecond * gp2;
    const double rhs = -p * omp / opp * gp_gm +
                       (opp + omp * omp) / (opp * opp) * gp_gq -
                       p * p / opp * (dphi_dt.v[k] - S.v[k]) - p * S.v[k] +
                       lap_gphi * s.q.v[k];
    const double diff = lapw.v[k] - rhs;
    r2[k] = diff * diff;
  }
  return std::sqrt(pairwise_sum(r2) * g.cell_area());
}

DiagnosticsRecord record(const State& prev, const State& cur,
                         const StepTrace& trace, const ModelParams& params,
                         const SourceTerm& source, const PotentialEvaluator& pot,
                         double dt) {
  DiagnosticsRecord r;
  r.t = cur.t;
  r.E = energy(cur.phi, pot);
  r.phi_bar = mean(cur.phi);
  const VectorField gm = grad(cur.mu, GradBc::NeumannZero);
  r.grad_mu_sq = inner_faces_interior(gm, gm);
  r.u_sq = inner_faces(cur.u, cur.u);
  r.forcing = inner(trace.source, cur.q) + inner(trace.source, cur.mu);
  r.ei_residual = (r.E - energy(prev.phi, pot)) / dt + r.grad_mu_sq + r.u_sq -
                  r.forcing;
  r.mass_residual =
      (mean(cur.phi) - mean(prev.phi)) / dt - mean(trace.source);
  r.pp2_res = pp2_residual(cur, trace.dphi_dt, params, source);
  const ScalarField transport_state =
      div(face_multiply(face_interp(cur.phi), cur.u));
  r.mup_res_int =
      mup_residual_interior(cur, trace.dphi_dt, trace.source, transport_state);
  r.mup_res_bc = mup_residual_bc(cur);
  r.phiqp_res = phiqp_residual(cur, trace.dphi_dt, params, source);
  r.phi_min = *std::min_element(cur.phi.v.begin(), cur.phi.v.end());
  r.phi_max = *std::max_element(cur.phi.v.begin(), cur.phi.v.end());
  r.newton_iters = trace.newton_iters;
  r.cg_iters = trace.cg_iters;
  return r;
}

std::string csv_header() {
  return "t,E,phi_bar,grad_mu_sq,u_sq,forcing,ei_residual,mass_residual,"
         "pp2_res,mup_res_int,mup_res_bc,phiqp_res,phi_min,phi_max,"
         "newton_iters,cg_iters";
}

std::string csv_row(const DiagnosticsRecord& r) {
  char buf[640];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                "%.17g,%.17g,%.17g,%.17g,%d,%ld",
                r.t, r.E, r.phi_bar, r.grad_mu_sq, r.u_sq, r.forcing,
                r.ei_residual, r.mass_residual, r.pp2_res, r.mup_res_int,
                r.mup_res_bc, r.phiqp_res, r.phi_min, r.phi_max,
                r.newton_iters, r.cg_iters);
  return std::string(buf);
}

}  // namespace chd
