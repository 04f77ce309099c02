#include <doctest.h>

#include <cmath>

#include "chd/errors.hpp"
#include "chd/potential.hpp"

using namespace chd;

namespace {

// Bisection oracle for the positive minimizer of Psi (root of Psi' in (0,1)).
double minimizer_bisect(const PotentialEvaluator& pot) {
  double lo = 1e-8, hi = 1.0 - 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pot.psi_prime(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("logarithmic potential closed forms") {
  PotentialEvaluator pot = PotentialEvaluator::logarithmic(1.0, 2.0);
  CHECK(pot.psi(0.0) == 0.0);
  CHECK(pot.psi_prime(0.0) == 0.0);
  CHECK(pot.psi_second(0.0) == doctest::Approx(-1.0).epsilon(1e-14));

  // limit s -> 1^-: theta log 2 - theta0/2
  const double lim = 1.0 * std::log(2.0) - 1.0;
  CHECK(pot.psi(1.0 - 1e-9) == doctest::Approx(lim).epsilon(1e-7));
  CHECK(lim == doctest::Approx(-0.3068528).epsilon(1e-6));

  // oracle-computed value of Psi(0.5) for theta=1, theta0=2
  const double psi_half =
      0.5 * (1.5 * std::log(1.5) + 0.5 * std::log(0.5)) - 0.25;
  CHECK(pot.psi(0.5) == doctest::Approx(psi_half).epsilon(1e-14));
  CHECK(psi_half == doctest::Approx(-0.1191879641).epsilon(1e-9));

  CHECK_THROWS_AS(pot.psi(1.0), DomainError);
  CHECK_THROWS_AS(pot.psi_prime(-1.2), DomainError);
}

TEST_CASE("minimizers of Psi at theta=1, theta0=2 sit at +-0.957504") {
  PotentialEvaluator pot = PotentialEvaluator::logarithmic(1.0, 2.0);
  const double s = minimizer_bisect(pot);
  CHECK(s == doctest::Approx(0.957504).epsilon(2e-6));
  CHECK(std::abs(pot.psi_prime(s)) < 1e-10);
  CHECK(std::abs(pot.psi_prime(-s)) < 1e-10);  // odd symmetry
}

TEST_CASE("symmetries: Psi even, Psi' odd, Psi'' even") {
  PotentialEvaluator pot = PotentialEvaluator::logarithmic(0.8, 1.9);
  for (double s : {0.1, 0.35, 0.62, 0.93}) {
    CHECK(pot.psi(-s) == doctest::Approx(pot.psi(s)).epsilon(1e-14));
    CHECK(pot.psi_prime(-s) == doctest::Approx(-pot.psi_prime(s)).epsilon(1e-14));
    CHECK(pot.psi_second(-s) == doctest::Approx(pot.psi_second(s)).epsilon(1e-14));
  }
}

TEST_CASE("derivative consistency via centered differences") {
  PotentialEvaluator pot = PotentialEvaluator::logarithmic(1.0, 2.0);
  const double d = 1e-4;
  for (double s = -0.8; s <= 0.8; s += 0.05) {
    const double fd = (pot.psi(s + d) - pot.psi(s - d)) / (2.0 * d);
    // |Psi'''| <= 2 theta (1+3 s^2)/(1-s^2)^3-ish; 0.8 interior keeps it tame
    const double sup3 = 2.0 * (1.0 + 3.0 * 0.64) / std::pow(1.0 - 0.64, 3.0) + 1.0;
    CHECK(std::abs(fd - pot.psi_prime(s)) <= 10.0 * d * d * sup3);
  }
}

TEST_CASE("curvature floors by dense sampling") {
  PotentialEvaluator log_pot = PotentialEvaluator::logarithmic(1.0, 2.0);
  for (int k = 0; k <= 100000; ++k) {
    const double s = -0.999 + 1.998 * k / 100000;
    CHECK(log_pot.psi_second(s) >= 1.0 - 2.0 - 1e-12);  // theta - theta0
    if (k % 1000 == 0) CHECK(log_pot.f_second(s) >= 1.0 - 1e-12);  // >= theta
  }
  PotentialEvaluator reg = PotentialEvaluator::regularized(1.0, 2.0, 4, 0.7);
  for (int k = 0; k <= 100000; ++k) {
    const double s = -5.0 + 10.0 * k / 100000;
    CHECK(reg.f_second(s) >= 1.0 - 1e-12);
  }
}

TEST_CASE("regularized potential: agreement, junctions, tail") {
  const double theta = 1.0, theta0 = 2.0, kappa = 0.7;
  const int n = 4;
  PotentialEvaluator reg = PotentialEvaluator::regularized(theta, theta0, n, kappa);
  PotentialEvaluator lg = PotentialEvaluator::logarithmic(theta, theta0);
  const double delta = 1.0 - 1.0 / n;
  CHECK(reg.delta_n() == doctest::Approx(delta));

  // identical branch below the cutoff: exact equality
  for (double s : {0.0, 0.2, -0.5, delta * 0.999}) {
    CHECK(reg.f(s) == lg.f(s));
    CHECK(reg.f_prime(s) == lg.f_prime(s));
  }

  // C^2 junctions at delta_n and 1 via centered second differences
  const double d = 1e-4;
  for (double s0 : {delta, 1.0, -delta, -1.0}) {
    const double left = (reg.f(s0) - 2.0 * reg.f(s0 - d) + reg.f(s0 - 2 * d)) / (d * d);
    const double right = (reg.f(s0 + 2 * d) - 2.0 * reg.f(s0 + d) + reg.f(s0)) / (d * d);
    CHECK(std::abs(left - right) <= 1e-6 * std::max(1.0, std::abs(left)) + 2e-3);
  }

  // superquadratic tail: F'(R) / (3 kappa R^5) -> 1
  const double R = 1e3;
  const double ratio = reg.f_prime(R) / (3.0 * kappa * R * R * R * R * R);
  CHECK(ratio > 0.99);
  CHECK(ratio < 1.01);
  CHECK(reg.f_prime(-R) == doctest::Approx(-reg.f_prime(R)).epsilon(1e-12));
}

TEST_CASE("regularized-to-logarithmic convergence is monotone in n") {
  PotentialEvaluator lg = PotentialEvaluator::logarithmic(1.0, 2.0);
  for (double s : {0.3, 0.7, 0.9, -0.85}) {
    double prev = 1e300;
    for (int n : {4, 8, 16, 32}) {
      PotentialEvaluator reg = PotentialEvaluator::regularized(1.0, 2.0, n, 1.0);
      const double err = std::abs(reg.f(s) - lg.f(s));
      CHECK(err <= prev + 1e-15);
      prev = err;
    }
    PotentialEvaluator reg32 = PotentialEvaluator::regularized(1.0, 2.0, 32, 1.0);
    if (std::abs(s) < 1.0 - 1.0 / 32) CHECK(reg32.f(s) == lg.f(s));
  }
}

TEST_CASE("domain radius exposes the Newton clipping rule") {
  CHECK(PotentialEvaluator::logarithmic(1.0, 2.0).domain_radius() == 1.0);
  CHECK(std::isinf(PotentialEvaluator::regularized(1.0, 2.0, 2, 1.0).domain_radius()));
}
