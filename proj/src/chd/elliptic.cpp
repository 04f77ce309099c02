#include "chd/elliptic.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <functional>

#include "chd/errors.hpp"

namespace chd {

namespace {

int iter_cap(const Grid& g, const EllipticOptions& opts) {
  return opts.max_iter > 0 ? opts.max_iter : 20 * (g.nx + g.ny);
}

void check_opts(const EllipticOptions& opts) {
  if (!(opts.tol > 0.0 && opts.tol <= 1e-4))
    throw ConfigError("elliptic.tol: must lie in (0, 1e-4]");
}

// -div(grad(q, DirichletZero)) as a plain stencil application.
void apply_dirichlet_op(const ScalarField& q, ScalarField& out) {
  const Grid& g = q.grid;
  const double ax = 1.0 / (g.hx * g.hx), ay = 1.0 / (g.hy * g.hy);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double c = q(i, j);
      double acc = 0.0;
      acc += ax * ((i > 0) ? (c - q(i - 1, j)) : 2.0 * c);
      acc += ax * ((i < g.nx - 1) ? (c - q(i + 1, j)) : 2.0 * c);
      acc += ay * ((j > 0) ? (c - q(i, j - 1)) : 2.0 * c);
      acc += ay * ((j < g.ny - 1) ? (c - q(i, j + 1)) : 2.0 * c);
      out(i, j) = acc;
    }
}

// -div(grad(q, NeumannZero)).
void apply_neumann_op(const ScalarField& q, ScalarField& out) {
  const Grid& g = q.grid;
  const double ax = 1.0 / (g.hx * g.hx), ay = 1.0 / (g.hy * g.hy);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double c = q(i, j);
      double acc = 0.0;
      if (i > 0) acc += ax * (c - q(i - 1, j));
      if (i < g.nx - 1) acc += ax * (c - q(i + 1, j));
      if (j > 0) acc += ay * (c - q(i, j - 1));
      if (j < g.ny - 1) acc += ay * (c - q(i, j + 1));
      out(i, j) = acc;
    }
}

using ApplyFn = std::function<void(const ScalarField&, ScalarField&)>;

SolveStats cg_solve(const ApplyFn& apply, const ScalarField& b, ScalarField& x,
                    double tol, int max_iter, bool deflate) {
  const Grid& g = b.grid;
  ScalarField r(g), p(g), Ap(g);
  auto project = [&](ScalarField& f) {
    const double mz = mean(f);
    for (double& v : f.v) v -= mz;
  };
  ScalarField b2 = b;
  if (deflate) {
    project(b2);
    project(x);
  }
  const double bnorm = norm_l2(b2);
  SolveStats stats;
  if (bnorm == 0.0) {
    for (double& v : x.v) v = 0.0;
    return stats;
  }
  apply(x, Ap);
  for (int k = 0; k < g.cells(); ++k) r.v[k] = b2.v[k] - Ap.v[k];
  if (deflate) project(r);
  p = r;
  double rs = inner(r, r);
  double rnorm = std::sqrt(rs);
  for (int it = 0; it < max_iter; ++it) {
    if (rnorm <= tol * bnorm) break;
    apply(p, Ap);
    const double pAp = inner(p, Ap);
    const double alpha = rs / pAp;
    for (int k = 0; k < g.cells(); ++k) {
      x.v[k] += alpha * p.v[k];
      r.v[k] -= alpha * Ap.v[k];
    }
    if (deflate && (it % 16 == 15)) project(r);
    const double rs_new = inner(r, r);
    const double beta = rs_new / rs;
    rs = rs_new;
    rnorm = std::sqrt(rs);
    for (int k = 0; k < g.cells(); ++k) p.v[k] = r.v[k] + beta * p.v[k];
    stats.iters = it + 1;
  }
  stats.rel_residual = rnorm / bnorm;
  if (stats.rel_residual > tol)
    throw SolverError("cg: no convergence after " + std::to_string(stats.iters) +
                      " iterations, relative residual " +
                      std::to_string(stats.rel_residual));
  return stats;
}

ScalarField solve_dirichlet_direct(const ScalarField& f) {
  const Grid& g = f.grid;
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  trips.reserve(static_cast<size_t>(5 * g.cells()));
  const double ax = 1.0 / (g.hx * g.hx), ay = 1.0 / (g.hy * g.hy);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cidx(i, j);
      double diag = 0.0;
      if (i > 0) { trips.emplace_back(c, g.cidx(i - 1, j), -ax); diag += ax; }
      else diag += 2.0 * ax;
      if (i < g.nx - 1) { trips.emplace_back(c, g.cidx(i + 1, j), -ax); diag += ax; }
      else diag += 2.0 * ax;
      if (j > 0) { trips.emplace_back(c, g.cidx(i, j - 1), -ay); diag += ay; }
      else diag += 2.0 * ay;
      if (j < g.ny - 1) { trips.emplace_back(c, g.cidx(i, j + 1), -ay); diag += ay; }
      else diag += 2.0 * ay;
      trips.emplace_back(c, c, diag);
    }
  Eigen::SparseMatrix<double> A(g.cells(), g.cells());
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("direct: factorization failed");
  Eigen::VectorXd rhs(g.cells());
  for (int k = 0; k < g.cells(); ++k) rhs[k] = f.v[static_cast<size_t>(k)];
  Eigen::VectorXd sol = ldlt.solve(rhs);
  ScalarField out(g);
  for (int k = 0; k < g.cells(); ++k) out.v[static_cast<size_t>(k)] = sol[k];
  return out;
}

}  // namespace

ScalarField solve_dirichlet(const ScalarField& f, const EllipticOptions& opts,
                            SolveStats* stats) {
  check_opts(opts);
  if (opts.method == EllipticOptions::Method::Direct) {
    if (f.grid.cells() > 64 * 64)
      throw ConfigError("elliptic.method=direct is limited to grids <= 64^2");
    ScalarField out = solve_dirichlet_direct(f);
    if (stats) *stats = SolveStats{};
    return out;
  }
  ScalarField q(f.grid);
  SolveStats st = cg_solve(apply_dirichlet_op, f, q, opts.tol,
                           iter_cap(f.grid, opts), false);
  if (stats) *stats = st;
  return q;
}

ScalarField solve_neumann(const ScalarField& f, const BoundaryFlux& g,
                          double target_mean, const EllipticOptions& opts,
                          SolveStats* stats) {
  check_opts(opts);
  const Grid& gr = f.grid;
  // Fold the prescribed flux into the right-hand side: boundary cells gain
  // +g/h from the boundary-face contribution of div(grad(., flux g)).
  ScalarField b = f;
  double gl1 = 0.0, gint = 0.0;
  for (int j = 0; j < gr.ny; ++j) {
    b(0, j) += g.left[static_cast<size_t>(j)] / gr.hx;
    b(gr.nx - 1, j) += g.right[static_cast<size_t>(j)] / gr.hx;
    gint += (g.left[static_cast<size_t>(j)] + g.right[static_cast<size_t>(j)]) * gr.hy;
    gl1 += (std::abs(g.left[static_cast<size_t>(j)]) +
            std::abs(g.right[static_cast<size_t>(j)])) * gr.hy;
  }
  for (int i = 0; i < gr.nx; ++i) {
    b(i, 0) += g.bottom[static_cast<size_t>(i)] / gr.hy;
    b(i, gr.ny - 1) += g.top[static_cast<size_t>(i)] / gr.hy;
    gint += (g.bottom[static_cast<size_t>(i)] + g.top[static_cast<size_t>(i)]) * gr.hx;
    gl1 += (std::abs(g.bottom[static_cast<size_t>(i)]) +
            std::abs(g.top[static_cast<size_t>(i)])) * gr.hx;
  }
  const double fint = mean(f) * gr.area();
  if (std::abs(fint + gint) > 1e-8 * (norm_l2(f) + gl1 + 1.0))
    throw SolverError("solve_neumann: incompatible data, int f + bdry int g = " +
                      std::to_string(fint + gint));
  ScalarField x(gr);
  SolveStats st = cg_solve(apply_neumann_op, b, x, opts.tol, iter_cap(gr, opts), true);
  const double shift = target_mean - mean(x);
  for (double& v : x.v) v += shift;
  if (stats) *stats = st;
  return x;
}

VectorField darcy_update(const ScalarField& q, const ScalarField& phi,
                         const ScalarField& mu, const BoundaryFlux& mu_flux) {
  VectorField u = grad(q, GradBc::DirichletZero);
  const VectorField gm = grad(mu, GradBc::Flux, &mu_flux);
  const VectorField pf = face_interp(phi);
  for (size_t k = 0; k < u.x.size(); ++k) u.x[k] = -u.x[k] - pf.x[k] * gm.x[k];
  for (size_t k = 0; k < u.y.size(); ++k) u.y[k] = -u.y[k] - pf.y[k] * gm.y[k];
  return u;
}

DarcyResult solve_darcy(const ScalarField& phi, const ScalarField& mu,
                        const ScalarField& source, const EllipticOptions& opts,
                        const BoundaryFlux* extra_mu_flux,
                        const ScalarField* extra_pressure_rhs,
                        const ScalarField* q_warm) {
  check_opts(opts);
  const Grid& g = phi.grid;
  if (!g.same_layout(mu.grid) || !g.same_layout(source.grid))
    throw Error("solve_darcy: grid mismatch");

  // Boundary traces of phi (one-sided face_interp copies).
  BoundaryFlux pb(g);
  for (int j = 0; j < g.ny; ++j) {
    pb.left[static_cast<size_t>(j)] = phi(0, j);
    pb.right[static_cast<size_t>(j)] = phi(g.nx - 1, j);
  }
  for (int i = 0; i < g.nx; ++i) {
    pb.bottom[static_cast<size_t>(i)] = phi(i, 0);
    pb.top[static_cast<size_t>(i)] = phi(i, g.ny - 1);
  }

  // Operator: Dirichlet Laplacian with the boundary-face 2/h^2 terms scaled
  // by 1/(1+phi_b^2); this is the flux boundary relation eliminated into q.
  auto apply = [&](const ScalarField& x, ScalarField& out) {
    const double ax = 1.0 / (g.hx * g.hx), ay = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double c = x(i, j);
        double acc = 0.0;
        if (i > 0) acc += ax * (c - x(i - 1, j));
        else acc += 2.0 * ax * c / (1.0 + pb.left[static_cast<size_t>(j)] * pb.left[static_cast<size_t>(j)]);
        if (i < g.nx - 1) acc += ax * (c - x(i + 1, j));
        else acc += 2.0 * ax * c / (1.0 + pb.right[static_cast<size_t>(j)] * pb.right[static_cast<size_t>(j)]);
        if (j > 0) acc += ay * (c - x(i, j - 1));
        else acc += 2.0 * ay * c / (1.0 + pb.bottom[static_cast<size_t>(i)] * pb.bottom[static_cast<size_t>(i)]);
        if (j < g.ny - 1) acc += ay * (c - x(i, j + 1));
        else acc += 2.0 * ay * c / (1.0 + pb.top[static_cast<size_t>(i)] * pb.top[static_cast<size_t>(i)]);
        out(i, j) = acc;
      }
  };

  // RHS: source + div(face_interp(phi) grad_int mu) + forcing terms.
  const VectorField flux = face_multiply(face_interp(phi), grad(mu, GradBc::NeumannZero));
  ScalarField b = div(flux);
  for (int k = 0; k < g.cells(); ++k) b.v[static_cast<size_t>(k)] += source.v[static_cast<size_t>(k)];
  if (extra_pressure_rhs)
    for (int k = 0; k < g.cells(); ++k)
      b.v[static_cast<size_t>(k)] += extra_pressure_rhs->v[static_cast<size_t>(k)];
  if (extra_mu_flux) {
    for (int j = 0; j < g.ny; ++j) {
      const double pl = pb.left[static_cast<size_t>(j)], pr = pb.right[static_cast<size_t>(j)];
      b(0, j) += pl * extra_mu_flux->left[static_cast<size_t>(j)] / ((1.0 + pl * pl) * g.hx);
      b(g.nx - 1, j) += pr * extra_mu_flux->right[static_cast<size_t>(j)] / ((1.0 + pr * pr) * g.hx);
    }
    for (int i = 0; i < g.nx; ++i) {
      const double pbm = pb.bottom[static_cast<size_t>(i)], pt = pb.top[static_cast<size_t>(i)];
      b(i, 0) += pbm * extra_mu_flux->bottom[static_cast<size_t>(i)] / ((1.0 + pbm * pbm) * g.hy);
      b(i, g.ny - 1) += pt * extra_mu_flux->top[static_cast<size_t>(i)] / ((1.0 + pt * pt) * g.hy);
    }
  }

  DarcyResult res;
  res.q = q_warm ? *q_warm : ScalarField(g);
  res.stats = cg_solve(apply, b, res.q, opts.tol, iter_cap(g, opts), false);

  // Recover the total mu flux from the boundary relation.
  res.mu_flux = BoundaryFlux(g);
  auto gtot = [&](double phib, double qadj, double h, double extra) {
    return (2.0 * phib * qadj / h + extra) / (1.0 + phib * phib);
  };
  for (int j = 0; j < g.ny; ++j) {
    const double el = extra_mu_flux ? extra_mu_flux->left[static_cast<size_t>(j)] : 0.0;
    const double er = extra_mu_flux ? extra_mu_flux->right[static_cast<size_t>(j)] : 0.0;
    res.mu_flux.left[static_cast<size_t>(j)] =
        gtot(pb.left[static_cast<size_t>(j)], res.q(0, j), g.hx, el);
    res.mu_flux.right[static_cast<size_t>(j)] =
        gtot(pb.right[static_cast<size_t>(j)], res.q(g.nx - 1, j), g.hx, er);
  }
  for (int i = 0; i < g.nx; ++i) {
    const double eb = extra_mu_flux ? extra_mu_flux->bottom[static_cast<size_t>(i)] : 0.0;
    const double et = extra_mu_flux ? extra_mu_flux->top[static_cast<size_t>(i)] : 0.0;
    res.mu_flux.bottom[static_cast<size_t>(i)] =
        gtot(pb.bottom[static_cast<size_t>(i)], res.q(i, 0), g.hy, eb);
    res.mu_flux.top[static_cast<size_t>(i)] =
        gtot(pb.top[static_cast<size_t>(i)], res.q(i, g.ny - 1), g.hy, et);
  }

  res.u = darcy_update(res.q, phi, mu, res.mu_flux);
  return res;
}

}  // namespace chd
