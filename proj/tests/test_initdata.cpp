#include <doctest.h>

#include <cmath>

#include "chd/errors.hpp"
#include "chd/initdata.hpp"
#include "chd/ops.hpp"
#include "chd/snapshot.hpp"
#include "chd/stepper.hpp"

using namespace chd;

TEST_CASE("uniform generator fills the requested level") {
  Grid g(8, 8, 1.0, 1.0);
  InitSpec spec;
  spec.kind = InitSpec::Kind::Uniform;
  spec.value = 0.2;
  ScalarField f = generate(spec, g);
  for (double v : f.v) CHECK(v == 0.2);
  // clipped into the margin band
  spec.value = 0.999;
  f = generate(spec, g);
  for (double v : f.v) CHECK(v == 0.95);
}

TEST_CASE("random generator: mean window, margin, determinism") {
  Grid g(64, 64, 1.0, 1.0);
  InitSpec spec;
  spec.kind = InitSpec::Kind::Random;
  spec.mean = 0.0;
  spec.amplitude = 0.05;
  spec.seed = 7;
  ScalarField a = generate(spec, g);
  ScalarField b = generate(spec, g);
  for (size_t k = 0; k < a.v.size(); ++k) CHECK(a.v[k] == b.v[k]);
  const double m = mean(a);
  CHECK(m >= -0.05);
  CHECK(m <= 0.05);
  double mx = 0.0;
  for (double v : a.v) mx = std::max(mx, std::abs(v));
  CHECK(mx <= 1.0 - spec.clip_margin);
  // a different seed gives a different field
  spec.seed = 8;
  ScalarField c = generate(spec, g);
  bool differs = false;
  for (size_t k = 0; k < a.v.size(); ++k)
    if (a.v[k] != c.v[k]) { differs = true; break; }
  CHECK(differs);
}

TEST_CASE("tanh disc: amplitude bound, level-set radius, mean estimate") {
  Grid g(128, 128, 1.0, 1.0);
  InitSpec spec;
  spec.kind = InitSpec::Kind::TanhDisc;
  spec.cx = 0.5;
  spec.cy = 0.5;
  spec.radius = 0.2;
  spec.width = 4.0 * g.hx;
  spec.inner = 0.9;
  spec.outer = -0.9;
  ScalarField f = generate(spec, g);
  double mx = 0.0;
  for (double v : f.v) mx = std::max(mx, std::abs(v));
  CHECK(mx <= 0.9);

  // zero level set close to the requested radius along the centerline
  double r_cross = 0.0;
  for (int i = 1; i < g.nx; ++i) {
    const double a = f(i - 1, g.ny / 2), b2 = f(i, g.ny / 2);
    if (a > 0.0 && b2 <= 0.0 && g.xc(i) > 0.5) {
      r_cross = g.xc(i - 1) + (g.xc(i) - g.xc(i - 1)) * a / (a - b2) - 0.5;
      break;
    }
  }
  CHECK(std::abs(r_cross - spec.radius) <= 2.0 * g.hx);

  // area-weighted mean within O(width)
  const double frac = M_PI * spec.radius * spec.radius / g.area();
  const double analytic = spec.outer + (spec.inner - spec.outer) * frac;
  CHECK(std::abs(mean(f) - analytic) <= 6.0 * spec.width);
}

TEST_CASE("every generator output passes initialize in logarithmic mode") {
  Grid g(32, 32, 1.0, 1.0);
  ModelParams p;
  p.m = 1.0;
  p.h = HSpec::constant(0.3);
  Stepper st(p, EllipticOptions{}, StepOptions{});
  for (InitSpec::Kind kind : {InitSpec::Kind::Uniform, InitSpec::Kind::TanhDisc,
                              InitSpec::Kind::Random}) {
    InitSpec spec;
    spec.kind = kind;
    spec.value = 0.4;
    spec.width = 4.0 * g.hx;
    spec.seed = 3;
    CHECK_NOTHROW(st.initialize(generate(spec, g)));
  }
}

TEST_CASE("snapshot reload: round trip and grid mismatch") {
  Grid g(16, 12, 1.0, 1.5);
  InitSpec rnd;
  rnd.kind = InitSpec::Kind::Random;
  rnd.seed = 9;
  ScalarField f = generate(rnd, g);
  write_snapshot("/tmp/chd_init_snap.chd", "phi", f, 1.0);

  InitSpec spec;
  spec.kind = InitSpec::Kind::Snapshot;
  spec.path = "/tmp/chd_init_snap.chd";
  ScalarField r = generate(spec, g);
  for (size_t k = 0; k < f.v.size(); ++k) CHECK(r.v[k] == f.v[k]);

  Grid g2(16, 16, 1.0, 1.5);
  CHECK_THROWS_AS(generate(spec, g2), ConfigError);
}
