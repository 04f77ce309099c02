#include "chd/mms.hpp"

#include <cmath>

#include "chd/errors.hpp"

namespace chd {

MmsSolution::MmsSolution(const Grid& grid, const ModelParams& params,
                         const SourceTerm& source, double a, double b,
                         double t_end)
    : grid_(grid), params_(params), source_(&source), a_(a), b_(b) {
  kx_ = M_PI / grid.lx;
  ky_ = M_PI / grid.ly;
  if (params_.pot_mode != PotentialMode::Regularized)
    throw ConfigError("mms: requires potential.mode = regularized");
  const double delta = 1.0 - 1.0 / params_.pot_n;
  if (!(std::abs(a) * (1.0 + t_end / 2.0) < delta))
    throw ConfigError(
        "mms: amplitude too large, need |a|(1 + t_end/2) < 1 - 1/n");
}

MmsSolution::Point MmsSolution::eval(double x, double y, double t) const {
  const double T = 1.0 + 0.5 * t;
  const double cx = std::cos(kx_ * x), sx = std::sin(kx_ * x);
  const double cy = std::cos(ky_ * y), sy = std::sin(ky_ * y);
  const double K2 = kx_ * kx_ + ky_ * ky_;
  const double th = params_.theta, th0 = params_.theta0;

  Point p;
  p.phi = a_ * cx * cy * T;
  p.phi_t = 0.5 * a_ * cx * cy;
  p.phi_x = -a_ * kx_ * sx * cy * T;
  p.phi_y = -a_ * ky_ * cx * sy * T;
  p.lap_phi = -K2 * p.phi;

  // Convex-part derivatives of the logarithmic branch (valid: |phi*| < delta_n).
  const double s = p.phi;
  const double f1 = 0.5 * th * (std::log1p(s) - std::log1p(-s));
  const double f2 = th / (1.0 - s * s);
  const double f3 = 2.0 * th * s / ((1.0 - s * s) * (1.0 - s * s));

  p.mu = K2 * p.phi + f1 - th0 * p.phi;
  const double W = K2 + f2 - th0;
  p.mu_x = W * p.phi_x;
  p.mu_y = W * p.phi_y;
  p.lap_mu = W * p.lap_phi + f3 * (p.phi_x * p.phi_x + p.phi_y * p.phi_y);

  p.q = b_ * sx * sy * T;
  p.q_x = b_ * kx_ * cx * sy * T;
  p.q_y = b_ * ky_ * sx * cy * T;
  p.lap_q = -K2 * p.q;
  return p;
}

ScalarField MmsSolution::phi_exact(double t) const {
  ScalarField f(grid_);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i)
      f(i, j) = eval(grid_.xc(i), grid_.yc(j), t).phi;
  return f;
}

ScalarField MmsSolution::q_exact(double t) const {
  ScalarField f(grid_);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i)
      f(i, j) = eval(grid_.xc(i), grid_.yc(j), t).q;
  return f;
}

Forcing MmsSolution::forcing(double t) const {
  Forcing fc;
  fc.f_phi = ScalarField(grid_);
  fc.f_q = ScalarField(grid_);
  fc.g_mu = BoundaryFlux(grid_);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      const Point p = eval(grid_.xc(i), grid_.yc(j), t);
      const double S = params_.source_off
                           ? 0.0
                           : -params_.m * p.phi + source_->h(p.phi);
      const double gp_gm = p.phi_x * p.mu_x + p.phi_y * p.mu_y;
      const double div_phi_gm = gp_gm + p.phi * p.lap_mu;
      const double div_u = -p.lap_q - div_phi_gm;
      const double ux = -p.q_x - p.phi * p.mu_x;
      const double uy = -p.q_y - p.phi * p.mu_y;
      const double div_uphi = ux * p.phi_x + uy * p.phi_y + p.phi * div_u;
      fc.f_phi(i, j) = p.phi_t + div_uphi - p.lap_mu - S;
      fc.f_q(i, j) = -p.lap_q - S - div_phi_gm;
    }
  // Boundary flux correction g_mu = dn_mu* - (u*.n) phi* = -(u*.n) phi*,
  // since dn_mu* and dn_phi* vanish on all edges; there u*.n = -dn_q*,
  // i.e. u*.n = +q_x on the left wall, -q_x on the right, and likewise in y.
  for (int j = 0; j < grid_.ny; ++j) {
    const double y = grid_.yc(j);
    const Point pl = eval(0.0, y, t);
    const Point pr = eval(grid_.lx, y, t);
    fc.g_mu.left[static_cast<size_t>(j)] = -pl.q_x * pl.phi;
    fc.g_mu.right[static_cast<size_t>(j)] = pr.q_x * pr.phi;
  }
  for (int i = 0; i < grid_.nx; ++i) {
    const double x = grid_.xc(i);
    const Point pb = eval(x, 0.0, t);
    const Point pt = eval(x, grid_.ly, t);
    fc.g_mu.bottom[static_cast<size_t>(i)] = -pb.q_y * pb.phi;
    fc.g_mu.top[static_cast<size_t>(i)] = pt.q_y * pt.phi;
  }
  return fc;
}

}  // namespace chd
