#include <doctest.h>

#include <cmath>

#include "chd/errors.hpp"
#include "chd/mms.hpp"
#include "chd/simulation.hpp"

using namespace chd;

namespace {

ModelParams mms_params() {
  ModelParams p;
  p.m = 1.0;
  p.h = HSpec::constant(0.3);
  p.pot_mode = PotentialMode::Regularized;
  p.pot_n = 4;
  p.pot_kappa = 1.0;
  return p;
}

}  // namespace

TEST_CASE("forcing fields agree with finite differences of the exact fields") {
  // Oracle: rebuild f_phi and f_q from the continuous operators applied to
  // the closed-form solution via high-order finite differences.
  Grid g(16, 16, 1.0, 1.0);
  ModelParams p = mms_params();
  SourceTerm src(p.h, p.eps_ext);
  const double a = 0.25, b = 0.1;
  MmsSolution mms(g, p, src, a, b, 1.0);
  const PotentialEvaluator pot = PotentialEvaluator::from_params(p);

  const double kx = M_PI / g.lx, ky = M_PI / g.ly;
  auto phi_f = [&](double x, double y, double t) {
    return a * std::cos(kx * x) * std::cos(ky * y) * (1.0 + 0.5 * t);
  };
  auto q_f = [&](double x, double y, double t) {
    return b * std::sin(kx * x) * std::sin(ky * y) * (1.0 + 0.5 * t);
  };
  auto mu_f = [&](double x, double y, double t) {
    const double d = 1e-5;
    const double lap = (phi_f(x + d, y, t) + phi_f(x - d, y, t) +
                        phi_f(x, y + d, t) + phi_f(x, y - d, t) -
                        4.0 * phi_f(x, y, t)) / (d * d);
    return -lap + pot.psi_prime(phi_f(x, y, t));
  };
  auto ux_f = [&](double x, double y, double t) {
    const double d = 1e-5;
    return -(q_f(x + d, y, t) - q_f(x - d, y, t)) / (2 * d) -
           phi_f(x, y, t) * (mu_f(x + d, y, t) - mu_f(x - d, y, t)) / (2 * d);
  };
  auto uy_f = [&](double x, double y, double t) {
    const double d = 1e-5;
    return -(q_f(x, y + d, t) - q_f(x, y - d, t)) / (2 * d) -
           phi_f(x, y, t) * (mu_f(x, y + d, t) - mu_f(x, y - d, t)) / (2 * d);
  };

  const double t = 0.35;
  Forcing fc = mms.forcing(t);
  const double d = 1e-4;
  for (int j : {3, 8}) {
    for (int i : {2, 11}) {
      const double x = g.xc(i), y = g.yc(j);
      const double S = -p.m * phi_f(x, y, t) + src.h(phi_f(x, y, t));
      const double phi_t = (phi_f(x, y, t + d) - phi_f(x, y, t - d)) / (2 * d);
      const double lap_mu = (mu_f(x + d, y, t) + mu_f(x - d, y, t) +
                             mu_f(x, y + d, t) + mu_f(x, y - d, t) -
                             4.0 * mu_f(x, y, t)) / (d * d);
      const double div_uphi =
          ((ux_f(x + d, y, t) * phi_f(x + d, y, t)) -
           (ux_f(x - d, y, t) * phi_f(x - d, y, t))) / (2 * d) +
          ((uy_f(x, y + d, t) * phi_f(x, y + d, t)) -
           (uy_f(x, y - d, t) * phi_f(x, y - d, t))) / (2 * d);
      const double f_phi_fd = phi_t + div_uphi - lap_mu - S;
      CHECK(fc.f_phi(i, j) == doctest::Approx(f_phi_fd).epsilon(5e-5));

      const double lap_q = (q_f(x + d, y, t) + q_f(x - d, y, t) +
                            q_f(x, y + d, t) + q_f(x, y - d, t) -
                            4.0 * q_f(x, y, t)) / (d * d);
      const double div_phigm =
          ((phi_f(x + d, y, t) * (mu_f(x + 2 * d, y, t) - mu_f(x, y, t)) / (2 * d)) -
           (phi_f(x - d, y, t) * (mu_f(x, y, t) - mu_f(x - 2 * d, y, t)) / (2 * d))) / (2 * d) +
          ((phi_f(x, y + d, t) * (mu_f(x, y + 2 * d, t) - mu_f(x, y, t)) / (2 * d)) -
           (phi_f(x, y - d, t) * (mu_f(x, y, t) - mu_f(x, y - 2 * d, t)) / (2 * d))) / (2 * d);
      const double f_q_fd = -lap_q - S - div_phigm;
      CHECK(fc.f_q(i, j) == doctest::Approx(f_q_fd).epsilon(5e-4));
    }
  }

  // Boundary flux forcing: g_mu = -(u*.n) phi* with dn_mu* = 0.
  for (int j : {1, 9}) {
    const double y = g.yc(j);
    const double un = ux_f(0.0, y, t) * -1.0;
    CHECK(fc.g_mu.left[static_cast<size_t>(j)] ==
          doctest::Approx(-un * phi_f(0.0, y, t)).epsilon(1e-5));
    const double un_r = ux_f(g.lx, y, t);
    CHECK(fc.g_mu.right[static_cast<size_t>(j)] ==
          doctest::Approx(-un_r * phi_f(g.lx, y, t)).epsilon(1e-5));
  }
}

TEST_CASE("zero-amplitude manufactured solution is preserved exactly") {
  SimConfig cfg;
  cfg.nx = cfg.ny = 16;
  cfg.params = mms_params();
  cfg.dt = 1e-3;
  cfg.t_end = 8e-3;
  const Grid g = cfg.make_grid();
  SourceTerm src(cfg.params.h, cfg.params.eps_ext);
  MmsSolution mms(g, cfg.params, src, 0.0, 0.0, cfg.t_end);
  RunSummary sum = run_simulation(cfg, true, false, &mms);
  double e = 0.0;
  for (double v : sum.final_state.phi.v) e = std::max(e, std::abs(v));
  for (double v : sum.final_state.q.v) e = std::max(e, std::abs(v));
  CHECK(e <= 1e-12);
}

TEST_CASE("mms rejects the logarithmic mode and oversized amplitudes") {
  Grid g(16, 16, 1.0, 1.0);
  ModelParams p = mms_params();
  SourceTerm src(p.h, p.eps_ext);
  ModelParams bad = p;
  bad.pot_mode = PotentialMode::Logarithmic;
  CHECK_THROWS_AS(MmsSolution(g, bad, src, 0.2, 0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(MmsSolution(g, p, src, 0.7, 0.1, 1.0), ConfigError);
}

TEST_CASE("short manufactured run tracks the exact solution") {
  SimConfig cfg;
  cfg.nx = cfg.ny = 32;
  cfg.params = mms_params();
  cfg.dt = 1e-3;
  cfg.t_end = 0.016;
  const Grid g = cfg.make_grid();
  SourceTerm src(cfg.params.h, cfg.params.eps_ext);
  MmsSolution mms(g, cfg.params, src, 0.25, 0.1, cfg.t_end);
  RunSummary sum = run_simulation(cfg, true, false, &mms);
  const ScalarField pe = mms.phi_exact(sum.final_state.t);
  ScalarField d = sum.final_state.phi;
  for (size_t k = 0; k < d.v.size(); ++k) d.v[k] -= pe.v[k];
  CHECK(norm_l2(d) < 5e-3);  // coarse-grid sanity bound
}
