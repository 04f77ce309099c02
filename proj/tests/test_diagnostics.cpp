#include <doctest.h>

#include <cmath>

#include "chd/diagnostics.hpp"
#include "chd/initdata.hpp"

using namespace chd;

namespace {

ModelParams default_params() {
  ModelParams p;
  p.m = 1.0;
  p.h = HSpec::constant(0.3);
  return p;
}

}  // namespace

TEST_CASE("energy: closed forms for flat fields") {
  Grid g(32, 32, 1.0, 1.0);
  PotentialEvaluator pot = PotentialEvaluator::logarithmic(1.0, 2.0);
  CHECK(energy(ScalarField(g, 0.0), pot) == 0.0);

  const double c = 0.5;
  const double psi_half = 0.5 * (1.5 * std::log(1.5) + 0.5 * std::log(0.5)) - 0.25;
  CHECK(energy(ScalarField(g, c), pot) ==
        doctest::Approx(psi_half * g.area()).epsilon(1e-13));

  // a blob with gradient content has higher energy than wells at the minima
  InitSpec spec;
  spec.kind = InitSpec::Kind::TanhDisc;
  spec.radius = 0.2;
  spec.width = 4.0 * g.hx;
  spec.inner = 0.957504;
  spec.outer = -0.957504;
  spec.clip_margin = 0.01;
  const ScalarField blob = generate(spec, g);
  CHECK(energy(blob, pot) > energy(ScalarField(g, 0.957504), pot));
}

TEST_CASE("record at the equilibrium state: all residuals at solver floor") {
  Grid g(16, 16, 1.0, 1.0);
  ModelParams p = default_params();
  const double c = 0.3;
  p.h = HSpec::constant(p.m * c);  // ODE equilibrium
  EllipticOptions eo;
  StepOptions so;
  so.dt = 1e-3;
  Stepper st(p, eo, so);
  State s0 = st.initialize(ScalarField(g, c));
  StepTrace tr;
  State s1 = st.step(s0, &tr);
  DiagnosticsRecord r = record(s0, s1, tr, p, st.source(), st.potential(), so.dt);
  CHECK(std::abs(r.ei_residual) < 1e-10);
  CHECK(std::abs(r.mass_residual) < 1e-10);
  CHECK(r.pp2_res < 1e-9);
  CHECK(r.mup_res_int < 1e-9);
  CHECK(r.mup_res_bc < 1e-9);
  CHECK(r.phiqp_res < 1e-9);
  CHECK(r.phi_min == doctest::Approx(c));
  CHECK(r.phi_max == doctest::Approx(c));
}

TEST_CASE("scheme-point mu residual vanishes to Newton tolerance") {
  Grid g(32, 32, 1.0, 1.0);
  ModelParams p = default_params();
  EllipticOptions eo;
  StepOptions so;
  so.dt = 1e-3;
  Stepper st(p, eo, so);
  InitSpec spec;
  spec.kind = InitSpec::Kind::Random;
  spec.amplitude = 0.05;
  spec.seed = 5;
  State s0 = st.initialize(generate(spec, g));
  StepTrace tr;
  State s1 = st.step(s0, &tr);
  // The step enforces -lap mu = S - d_t phi - div(u~ phi_f) with its own
  // transport terms; the residual is bounded by the Newton tolerance.
  State scheme_state = s1;
  scheme_state.mu_flux = tr.mu_flux;
  const double res = mup_residual_interior(scheme_state, tr.dphi_dt, tr.source,
                                           tr.transport_div);
  CHECK(res <= 10.0 * so.newton_tol);
}

TEST_CASE("ei residual: nonpositive without source, O(dt) with it") {
  Grid g(32, 32, 1.0, 1.0);
  ModelParams p = default_params();
  p.source_off = true;
  EllipticOptions eo;
  StepOptions so;
  so.dt = 1e-3;
  Stepper st(p, eo, so);
  InitSpec spec;
  spec.kind = InitSpec::Kind::Random;
  spec.amplitude = 0.05;
  spec.seed = 7;
  State s = st.initialize(generate(spec, g));
  for (int k = 0; k < 20; ++k) {
    StepTrace tr;
    State s1 = st.step(s, &tr);
    DiagnosticsRecord r = record(s, s1, tr, p, st.source(), st.potential(), so.dt);
    CHECK(r.ei_residual <= 1e-12);
    s = s1;
  }
}

TEST_CASE("ei residual halves with dt on a generic run") {
  Grid g(32, 32, 1.0, 1.0);
  ModelParams p = default_params();
  EllipticOptions eo;
  InitSpec spec;
  spec.kind = InitSpec::Kind::TanhDisc;
  spec.radius = 0.25;
  spec.width = 0.125;
  spec.inner = 0.7;
  spec.outer = -0.7;
  const ScalarField phi0 = generate(spec, g);
  const double T = 0.032;
  auto residual_at_T = [&](double dt) {
    StepOptions so;
    so.dt = dt;
    Stepper st(p, eo, so);
    State s = st.initialize(phi0);
    const int n = static_cast<int>(std::llround(T / dt));
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      StepTrace tr;
      State s1 = st.step(s, &tr);
      DiagnosticsRecord r =
          record(s, s1, tr, p, st.source(), st.potential(), dt);
      acc += std::abs(r.ei_residual) * dt;
      s = s1;
    }
    return acc / T;  // time-averaged magnitude
  };
  const double r1 = residual_at_T(4e-3);
  const double r2 = residual_at_T(2e-3);
  const double r3 = residual_at_T(1e-3);
  const double p1 = std::log2(r1 / r2);
  const double p2 = std::log2(r2 / r3);
  CHECK(p1 > 0.7);
  CHECK(p1 < 1.4);
  CHECK(p2 > 0.7);
  CHECK(p2 < 1.4);
}

TEST_CASE("phiqp residual: q-free state collapses the identity") {
  Grid g(16, 16, 1.0, 1.0);
  ModelParams p = default_params();
  p.source_off = true;
  p.h = HSpec::zero();
  EllipticOptions eo;
  StepOptions so;
  so.dt = 1e-3;
  Stepper st(p, eo, so);
  State s0 = st.initialize(ScalarField(g, 0.2));
  StepTrace tr;
  State s1 = st.step(s0, &tr);
  const double res = phiqp_residual(s1, tr.dphi_dt, p, st.source());
  CHECK(res < 1e-10);
}

TEST_CASE("csv row formatting is stable") {
  DiagnosticsRecord r;
  r.t = 0.5;
  r.E = -0.25;
  r.newton_iters = 3;
  r.cg_iters = 42;
  const std::string row = csv_row(r);
  CHECK(row.find("0.5,") == 0);
  CHECK(row.find(",3,42") != std::string::npos);
  CHECK(csv_header().rfind("t,E,", 0) == 0);
}
