#include "chd/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "chd/errors.hpp"

namespace chd {

void StepOptions::validate() const {
  if (dt <= 0.0) throw ConfigError("time.dt: must be > 0");
  if (newton_tol <= 0.0) throw ConfigError("step.newton_tol: must be > 0");
  if (newton_max < 1) throw ConfigError("step.newton_max: must be >= 1");
  if (picard_iters < 1) throw ConfigError("step.picard_iters: must be >= 1");
  if (picard_tol < 0.0) throw ConfigError("step.picard_tol: must be >= 0");
  if (picard_max < picard_iters)
    throw ConfigError("step.picard_max: must be >= picard_iters");
  if (damping <= 0.0 || damping >= 1.0)
    throw ConfigError("step.damping: must lie in (0,1)");
}

Stepper::Stepper(const ModelParams& params, const EllipticOptions& eopts,
                 const StepOptions& sopts)
    : params_(params),
      source_(params.h, params.eps_ext),
      pot_(PotentialEvaluator::from_params(params)),
      eopts_(eopts),
      sopts_(sopts) {
  params_.validate();
  sopts_.validate();
}

void Stepper::ensure_grid(const Grid& g) {
  if (grid_set_ && grid_.same_layout(g)) return;
  grid_ = g;
  grid_set_ = true;
  // Assemble -lap with the homogeneous Neumann closure.
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  trips.reserve(static_cast<size_t>(5 * g.cells()));
  const double ax = 1.0 / (g.hx * g.hx), ay = 1.0 / (g.hy * g.hy);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cidx(i, j);
      double diag = 0.0;
      if (i > 0) { trips.emplace_back(c, g.cidx(i - 1, j), -ax); diag += ax; }
      if (i < g.nx - 1) { trips.emplace_back(c, g.cidx(i + 1, j), -ax); diag += ax; }
      if (j > 0) { trips.emplace_back(c, g.cidx(i, j - 1), -ay); diag += ay; }
      if (j < g.ny - 1) { trips.emplace_back(c, g.cidx(i, j + 1), -ay); diag += ay; }
      trips.emplace_back(c, c, diag);
    }
  lap_.resize(g.cells(), g.cells());
  lap_.setFromTriplets(trips.begin(), trips.end());
  lap_.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  pattern_analyzed_ = false;
  factored_ = false;
}

void Stepper::factorize(const ScalarField& phi) {
  // J = I/dt + L (L + diag(F''(phi))), L = -lap_N.
  Eigen::SparseMatrix<double> K = lap_;
  for (int c = 0; c < grid_.cells(); ++c)
    K.coeffRef(c, c) += pot_.f_second(phi.v[static_cast<size_t>(c)]);
  Eigen::SparseMatrix<double> J = lap_ * K;
  const double idt = 1.0 / sopts_.dt;
  for (int c = 0; c < grid_.cells(); ++c) J.coeffRef(c, c) += idt;
  J.makeCompressed();
  if (!pattern_analyzed_) {
    lu_->analyzePattern(J);
    pattern_analyzed_ = true;
  }
  lu_->factorize(J);
  if (lu_->info() != Eigen::Success)
    throw SolverError("stepper: Jacobian factorization failed");
  factored_ = true;
}

ScalarField Stepper::mu_of(const ScalarField& phi, const ScalarField& phin) const {
  ScalarField mu = laplacian_neumann(phi);
  for (size_t k = 0; k < mu.v.size(); ++k)
    mu.v[k] = -mu.v[k] + pot_.f_prime(phi.v[k]) - params_.theta0 * phin.v[k];
  return mu;
}

ScalarField Stepper::ch_residual(const ScalarField& phi, const ScalarField& mu,
                                 const ScalarField& phin,
                                 const ScalarField& source_n,
                                 const ScalarField& transport_div,
                                 const BoundaryFlux& mu_flux,
                                 const ScalarField* f_phi) const {
  const ScalarField lap_mu = div(grad(mu, GradBc::Flux, &mu_flux));
  ScalarField rho(phi.grid);
  const double idt = 1.0 / sopts_.dt;
  for (size_t k = 0; k < rho.v.size(); ++k) {
    rho.v[k] = (phi.v[k] - phin.v[k]) * idt + transport_div.v[k] - lap_mu.v[k] -
               source_n.v[k];
    if (f_phi) rho.v[k] -= f_phi->v[k];
  }
  return rho;
}

double Stepper::damping_limit(const ScalarField& phi,
                              const ScalarField& dphi) const {
  if (!pot_.is_logarithmic()) return 1.0;
  double lam = 1.0;
  for (size_t k = 0; k < phi.v.size(); ++k) {
    const double d = dphi.v[k];
    if (d > 0.0)
      lam = std::min(lam, sopts_.damping * (1.0 - phi.v[k]) / d);
    else if (d < 0.0)
      lam = std::min(lam, sopts_.damping * (1.0 + phi.v[k]) / (-d));
  }
  if (lam < 1e-12)
    throw DomainError(
        "stepper: Newton damping cannot keep |phi| < 1 (step collapsed)");
  return lam;
}

Stepper::NewtonResult Stepper::newton_solve(
    ScalarField& phi, ScalarField& mu, const ScalarField& phin,
    const ScalarField& source_n, const ScalarField& transport_div,
    const BoundaryFlux& mu_flux, const ScalarField* f_phi) {
  NewtonResult res;
  mu = mu_of(phi, phin);
  ScalarField rho =
      ch_residual(phi, mu, phin, source_n, transport_div, mu_flux, f_phi);
  double rn = norm_l2(rho);
  bool fresh = false;
  Eigen::VectorXd rhs(grid_.cells()), dphi_vec(grid_.cells());
  ScalarField dphi(grid_);
  while (rn > sopts_.newton_tol) {
    if (res.iters >= sopts_.newton_max)
      throw SolverError("stepper: Newton did not converge in " +
                        std::to_string(sopts_.newton_max) +
                        " iterations (residual " + std::to_string(rn) +
                        "); a smaller dt should help");
    if (!factored_) {
      factorize(phi);
      fresh = true;
    }
    for (int c = 0; c < grid_.cells(); ++c)
      rhs[c] = -rho.v[static_cast<size_t>(c)];
    dphi_vec = lu_->solve(rhs);
    for (int c = 0; c < grid_.cells(); ++c)
      dphi.v[static_cast<size_t>(c)] = dphi_vec[c];
    const double lam = damping_limit(phi, dphi);
    for (size_t k = 0; k < phi.v.size(); ++k) phi.v[k] += lam * dphi.v[k];
    mu = mu_of(phi, phin);
    rho = ch_residual(phi, mu, phin, source_n, transport_div, mu_flux, f_phi);
    const double rn_new = norm_l2(rho);
    ++res.iters;
    // A stale factorization that no longer contracts gets refreshed once at
    // the current iterate before counting the next iteration.
    if (rn_new > 0.5 * rn && !fresh) {
      factorize(phi);
      fresh = true;
    } else {
      fresh = false;
    }
    rn = rn_new;
  }
  return res;
}

State Stepper::initialize(const ScalarField& phi0) const {
  if (pot_.is_logarithmic()) {
    for (double v : phi0.v)
      if (!(std::abs(v) <= 1.0 - 1e-6))
        throw DomainError(
            "initialize: |phi0| must stay <= 1 - 1e-6 in logarithmic mode");
  }
  State s;
  s.t = 0.0;
  s.phi = phi0;
  s.mu = laplacian_neumann(phi0);
  for (size_t k = 0; k < s.mu.v.size(); ++k)
    s.mu.v[k] = -s.mu.v[k] + pot_.psi_prime(phi0.v[k]);
  const ScalarField s0 = source_eval(phi0, params_, source_);
  DarcyResult d = solve_darcy(phi0, s.mu, s0, eopts_);
  s.q = std::move(d.q);
  s.u = std::move(d.u);
  s.mu_flux = std::move(d.mu_flux);
  return s;
}

State Stepper::step(const State& s, StepTrace* trace, const Forcing* forcing) {
  ensure_grid(s.phi.grid);
  const ScalarField& phin = s.phi;
  const ScalarField source_n = source_eval(phin, params_, source_);
  const VectorField phin_faces = face_interp(phin);

  const BoundaryFlux* g_extra = forcing ? &forcing->g_mu : nullptr;
  const ScalarField* f_q = forcing ? &forcing->f_q : nullptr;
  const ScalarField* f_phi = forcing ? &forcing->f_phi : nullptr;

  ScalarField phi = phin;
  ScalarField mu = s.mu;
  VectorField ut = s.u;
  BoundaryFlux gt = s.mu_flux;
  ScalarField q_warm = s.q;

  int newton_max_iters = 0;
  long cg_total = 0;
  int sweeps = 0;
  const bool fixed_sweeps = (sopts_.picard_tol <= 0.0);
  for (;;) {
    ++sweeps;
    if (sweeps > sopts_.picard_max)
      throw SolverError("stepper: velocity coupling did not settle in " +
                        std::to_string(sopts_.picard_max) +
                        " sweeps; a smaller dt should help");
    const ScalarField transport_div = div(face_multiply(phin_faces, ut));
    NewtonResult nr = newton_solve(phi, mu, phin, source_n, transport_div,
                                   gt, f_phi);
    newton_max_iters = std::max(newton_max_iters, nr.iters);
    DarcyResult d =
        solve_darcy(phin, mu, source_n, eopts_, g_extra, f_q, &q_warm);
    cg_total += d.stats.iters;
    double du = 0.0, unorm = 0.0;
    for (size_t k = 0; k < ut.x.size(); ++k) {
      du = std::max(du, std::abs(d.u.x[k] - ut.x[k]));
      unorm = std::max(unorm, std::abs(d.u.x[k]));
    }
    for (size_t k = 0; k < ut.y.size(); ++k) {
      du = std::max(du, std::abs(d.u.y[k] - ut.y[k]));
      unorm = std::max(unorm, std::abs(d.u.y[k]));
    }
    ut = std::move(d.u);
    gt = std::move(d.mu_flux);
    q_warm = std::move(d.q);
    if (fixed_sweeps) {
      if (sweeps >= sopts_.picard_iters) break;
    } else if (sweeps >= sopts_.picard_iters &&
               du <= sopts_.picard_tol * std::max(1.0, unorm)) {
      break;
    }
  }

  // Final polish against the settled velocity so the returned fields satisfy
  // the CH block with the same transport that the trace reports. Skipped in
  // fixed-sweep mode, which requests the plainly lagged scheme.
  ScalarField transport_div = div(face_multiply(phin_faces, ut));
  if (!fixed_sweeps) {
    NewtonResult nr =
        newton_solve(phi, mu, phin, source_n, transport_div, gt, f_phi);
    newton_max_iters = std::max(newton_max_iters, nr.iters);
  }

  // State rebuild from phi+: div u+ = S(phi+) (+ f_q) to solver tolerance.
  const ScalarField source_p = source_eval(phi, params_, source_);
  DarcyResult dp = solve_darcy(phi, mu, source_p, eopts_, g_extra, f_q, &q_warm);
  cg_total += dp.stats.iters;

  State out;
  out.t = s.t + sopts_.dt;
  out.phi = phi;
  out.mu = mu;
  out.q = std::move(dp.q);
  out.u = std::move(dp.u);
  out.mu_flux = std::move(dp.mu_flux);

  if (trace) {
    trace->dphi_dt = ScalarField(grid_);
    const double idt = 1.0 / sopts_.dt;
    for (size_t k = 0; k < phi.v.size(); ++k)
      trace->dphi_dt.v[k] = (phi.v[k] - phin.v[k]) * idt;
    trace->source = source_n;
    trace->transport_div = std::move(transport_div);
    trace->transport_u = std::move(ut);
    trace->mu_flux = std::move(gt);
    trace->newton_iters = newton_max_iters;
    trace->picard_sweeps = sweeps;
    trace->cg_iters = cg_total;
  }
  return out;
}

double uniqueness_gap(const State& a, const State& b,
                      const PotentialEvaluator& pot) {
  const Grid& g = a.phi.grid;
  if (!g.same_layout(b.phi.grid))
    throw Error("uniqueness_gap: states on different grids");
  if (pot.is_logarithmic()) {
    for (double v : a.phi.v)
      if (!(std::abs(v) < 1.0)) throw DomainError("uniqueness_gap: |phi_a| >= 1");
    for (double v : b.phi.v)
      if (!(std::abs(v) < 1.0)) throw DomainError("uniqueness_gap: |phi_b| >= 1");
  }
  // 8-point Gauss-Legendre on [0,1].
  static const double gl_x[8] = {
      0.5 - 0.4801449282487682 , 0.5 - 0.3983332387068134,
      0.5 - 0.2627662049581645, 0.5 - 0.0917173212478249,
      0.5 + 0.0917173212478249, 0.5 + 0.2627662049581645,
      0.5 + 0.3983332387068134, 0.5 + 0.4801449282487682};
  static const double gl_w[8] = {
      0.0506142681451881, 0.1111905172266872, 0.1568533229389436,
      0.1813418916891810, 0.1813418916891810, 0.1568533229389436,
      0.1111905172266872, 0.0506142681451881};
  ScalarField diff(g);
  for (size_t k = 0; k < diff.v.size(); ++k)
    diff.v[k] = a.phi.v[k] - b.phi.v[k];
  const VectorField gd = grad(diff, GradBc::NeumannZero);
  double y = 0.5 * inner_faces(gd, gd);
  std::vector<double> terms(diff.v.size());
  for (size_t k = 0; k < diff.v.size(); ++k) {
    double L = 0.0;
    for (int q8 = 0; q8 < 8; ++q8) {
      const double s = gl_x[q8] * a.phi.v[k] + (1.0 - gl_x[q8]) * b.phi.v[k];
      L += gl_w[q8] * pot.f_second(s);
    }
    terms[k] = L * diff.v[k] * diff.v[k];
  }
  y += 0.5 * pairwise_sum(terms) * g.cell_area();
  return y;
}

}  // namespace chd
