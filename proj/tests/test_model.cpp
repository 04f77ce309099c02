#include <doctest.h>

#include <cmath>
#include <fstream>

#include "chd/errors.hpp"
#include "chd/model.hpp"
#include "chd/ops.hpp"

using namespace chd;

TEST_CASE("source evaluation: closed-form spot checks") {
  Grid g(4, 4, 1.0, 1.0);
  ModelParams p;
  p.m = 1.0;
  p.h = HSpec::zero();
  SourceTerm src(p.h, p.eps_ext);
  ScalarField phi(g, 0.0);
  ScalarField s = source_eval(phi, p, src);
  for (double v : s.v) CHECK(v == 0.0);

  p.h = HSpec::linear_half();
  SourceTerm src2(p.h, p.eps_ext);
  ScalarField phi1(g, 1.0);
  s = source_eval(phi1, p, src2);
  for (double v : s.v) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));

  p.m = 2.0;
  p.h = HSpec::zero();
  SourceTerm src3(p.h, p.eps_ext);
  ScalarField phih(g, 0.5);
  s = source_eval(phih, p, src3);
  for (double v : s.v) CHECK(v == doctest::Approx(-1.0));

  p.source_off = true;
  s = source_eval(phih, p, src3);
  for (double v : s.v) CHECK(v == 0.0);
}

TEST_CASE("h-tilde equals h on [-1,1] and stays within the band") {
  const double eps = 0.05;
  for (const HSpec& spec : {HSpec::zero(), HSpec::constant(0.4),
                            HSpec::linear_half(), HSpec::parabolic(0.8)}) {
    SourceTerm src(spec, eps);
    for (int k = 0; k <= 400; ++k) {
      const double s = -1.0 + 2.0 * k / 400;
      CHECK(std::abs(src.h(s)) <= 1.0 + 1e-14);
      // identical code path on [-1,1]: exact agreement by construction
    }
    for (int k = 0; k <= 400; ++k) {
      const double s = -6.0 + 12.0 * k / 400;
      const double v = src.h(s);
      CHECK(v >= src.range_lo() - 1e-12);
      CHECK(v <= src.range_hi() + 1e-12);
    }
    // plateau reached far out
    CHECK(src.h(50.0) == src.h(1e6));
    CHECK(src.dh(50.0) == 0.0);
  }
}

TEST_CASE("h-tilde is C^2 at the junctions (finite-difference oracle)") {
  // Second differences across s = 1 with step 1e-4 agree to 1e-4 relative.
  SourceTerm src(HSpec::parabolic(0.8), 0.05);
  const double d = 1e-4;
  for (double s0 : {1.0, -1.0, 1.0 + src.blend_width_upper(),
                    -1.0 - src.blend_width_lower()}) {
    const double d2_left = (src.h(s0) - 2.0 * src.h(s0 - d) + src.h(s0 - 2 * d)) / (d * d);
    const double d2_right = (src.h(s0 + 2 * d) - 2.0 * src.h(s0 + d) + src.h(s0)) / (d * d);
    const double d2_mid = src.d2h(s0);
    const double scale = std::max({1.0, std::abs(d2_left), std::abs(d2_right)});
    CHECK(std::abs(d2_left - d2_mid) / scale < 2e-3);
    CHECK(std::abs(d2_right - d2_mid) / scale < 2e-3);
    // first derivative continuity, tighter
    const double d1l = (src.h(s0) - src.h(s0 - d)) / d;
    const double d1r = (src.h(s0 + d) - src.h(s0)) / d;
    CHECK(std::abs(d1l - d1r) < 1e-3 * std::max(1.0, std::abs(src.dh(s0))) + 1e-6);
  }
  CHECK(src.sup_dh() < 50.0);
  CHECK(src.sup_d2h() < 500.0);
}

TEST_CASE("tabulated spline source shape") {
  // h(s) = 0.5 sin(pi s / 2) sampled on a fine grid.
  std::vector<double> xs, ys;
  for (int k = 0; k <= 40; ++k) {
    const double s = -1.0 + 2.0 * k / 40;
    xs.push_back(s);
    ys.push_back(0.5 * std::sin(0.5 * M_PI * s));
  }
  SourceTerm src(HSpec::spline(xs, ys), 0.05);
  for (int k = 0; k <= 100; ++k) {
    const double s = -1.0 + 2.0 * k / 100;
    CHECK(src.h(s) == doctest::Approx(0.5 * std::sin(0.5 * M_PI * s)).epsilon(1e-4));
  }
  CHECK(src.h_min() == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(src.h_max() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("mass ODE closed form") {
  CHECK(mass_ode_solution(0.4, 1.3, 0.2, 0.0) == 0.4);
  // high-precision exponential oracle
  CHECK(mass_ode_solution(0.5, 1.0, 0.0, 1.0) ==
        doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(mass_ode_solution(0.5, 1.0, 0.0, 1.0) ==
        doctest::Approx(0.18393972058572117).epsilon(1e-9));
  // equilibrium: c = m * pb0 keeps the mean fixed
  for (double t : {0.0, 0.3, 2.0, 17.0})
    CHECK(mass_ode_solution(0.25, 2.0, 0.5, t) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("mass ODE residual via centered differences") {
  const double m = 1.7, c = 0.3, pb0 = -0.6;
  const double d = 1e-5;
  for (double t : {0.1, 0.5, 1.0, 3.0}) {
    const double lhs = (mass_ode_solution(pb0, m, c, t + d) -
                        mass_ode_solution(pb0, m, c, t - d)) / (2.0 * d) +
                       m * mass_ode_solution(pb0, m, c, t) - c;
    CHECK(std::abs(lhs) < 1e-10);
  }
}

TEST_CASE("mass bounds: envelope, monotonicity, admissibility") {
  ModelParams p;
  p.m = 1.0;
  p.h = HSpec::zero();
  SourceTerm z(p.h, p.eps_ext);
  MassBounds b = mass_bounds(p, z, 0.3);
  CHECK(b.c1 == doctest::Approx(0.0));
  CHECK(b.c2 == doctest::Approx(0.3));

  p.h = HSpec::constant(0.5);
  SourceTerm c5(p.h, p.eps_ext);
  b = mass_bounds(p, c5, 0.0);
  CHECK(b.c1 == doctest::Approx(0.0));
  CHECK(b.c2 == doctest::Approx(0.5));

  // contains pb0 and is monotone in pb0 componentwise
  double prev_c1 = -2.0, prev_c2 = -2.0;
  for (double pb0 : {-0.8, -0.3, 0.0, 0.4, 0.9}) {
    MassBounds mb = mass_bounds(p, c5, pb0);
    CHECK(mb.c1 <= pb0);
    CHECK(mb.c2 >= pb0);
    CHECK(mb.c1 >= prev_c1);
    CHECK(mb.c2 >= prev_c2);
    prev_c1 = mb.c1;
    prev_c2 = mb.c2;
  }

  p.h = HSpec::constant(1.5);
  SourceTerm c15(p.h, p.eps_ext);
  CHECK_THROWS_AS(mass_bounds(p, c15, 0.0), AdmissibilityError);
  CHECK_THROWS_AS(mass_bounds(p, c5, 1.0), AdmissibilityError);

  // paper variant: |Omega| = 2 halves the asymptotes
  MassBounds bp = mass_bounds_paper(p, c5, 0.0, 2.0);
  CHECK(bp.c2 == doctest::Approx(0.25));
}
