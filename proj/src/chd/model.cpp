#include "chd/model.hpp"

#include <algorithm>
#include <cmath>

#include "chd/errors.hpp"

namespace chd {

void ModelParams::validate() const {
  if (m <= 0.0) throw ConfigError("params.m: must be > 0");
  if (theta <= 0.0 || theta0 <= 0.0 || theta >= theta0)
    throw ConfigError("potential.theta/theta0: need 0 < theta < theta0");
  if (eps_ext <= 0.0) throw ConfigError("source.eps_ext: must be > 0");
  if (pot_mode == PotentialMode::Regularized) {
    if (pot_n < 2) throw ConfigError("potential.n: cutoff index must be >= 2");
    if (pot_kappa <= 0.0) throw ConfigError("potential.kappa: must be > 0");
  }
}

namespace {

// Natural cubic spline second derivatives (tridiagonal solve).
std::vector<double> spline_second_derivs(const std::vector<double>& s,
                                         const std::vector<double>& y) {
  const size_t n = s.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  b[0] = 1.0;
  b[n - 1] = 1.0;
  for (size_t k = 1; k + 1 < n; ++k) {
    const double hl = s[k] - s[k - 1];
    const double hr = s[k + 1] - s[k];
    a[k] = hl / 6.0;
    b[k] = (hl + hr) / 3.0;
    c[k] = hr / 6.0;
    d[k] = (y[k + 1] - y[k]) / hr - (y[k] - y[k - 1]) / hl;
  }
  // Thomas algorithm.
  for (size_t k = 1; k < n; ++k) {
    const double w = a[k] / b[k - 1];
    b[k] -= w * c[k - 1];
    d[k] -= w * d[k - 1];
  }
  m[n - 1] = d[n - 1] / b[n - 1];
  for (size_t k = n - 1; k-- > 0;) m[k] = (d[k] - c[k] * m[k + 1]) / b[k];
  return m;
}

size_t spline_interval(const std::vector<double>& s, double x) {
  auto it = std::upper_bound(s.begin(), s.end(), x);
  size_t k = static_cast<size_t>(it - s.begin());
  if (k == 0) k = 1;
  if (k >= s.size()) k = s.size() - 1;
  return k - 1;
}

// Quintic Hermite basis on [0,1]: value/derivative/second-derivative data at
// both ends. Only the four functions with nonzero data here are needed.
double qh0(double t) { return 1.0 + t * t * t * (-10.0 + t * (15.0 - 6.0 * t)); }
double qh1(double t) { return t + t * t * t * (-6.0 + t * (8.0 - 3.0 * t)); }
double qh2(double t) { return t * t * (0.5 + t * (-1.5 + t * (1.5 - 0.5 * t))); }
double qh3(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double dqh0(double t) { return t * t * (-30.0 + t * (60.0 - 30.0 * t)); }
double dqh1(double t) { return 1.0 + t * t * (-18.0 + t * (32.0 - 15.0 * t)); }
double dqh2(double t) { return t * (1.0 + t * (-4.5 + t * (6.0 - 2.5 * t))); }
double dqh3(double t) { return t * t * (30.0 + t * (-60.0 + 30.0 * t)); }
double d2qh0(double t) { return t * (-60.0 + t * (180.0 - 120.0 * t)); }
double d2qh1(double t) { return t * (-36.0 + t * (96.0 - 60.0 * t)); }
double d2qh2(double t) { return 1.0 + t * (-9.0 + t * (18.0 - 10.0 * t)); }
double d2qh3(double t) { return t * (60.0 + t * (-180.0 + 120.0 * t)); }

}  // namespace

double SourceTerm::Blend::eval(double u) const {
  if (u >= delta) return plateau;
  const double t = u / delta;
  return v0 * qh0(t) + d0 * delta * qh1(t) + c0 * delta * delta * qh2(t) +
         plateau * qh3(t);
}

double SourceTerm::Blend::deriv(double u) const {
  if (u >= delta) return 0.0;
  const double t = u / delta;
  return (v0 * dqh0(t) + d0 * delta * dqh1(t) + c0 * delta * delta * dqh2(t) +
          plateau * dqh3(t)) / delta;
}

double SourceTerm::Blend::deriv2(double u) const {
  if (u >= delta) return 0.0;
  const double t = u / delta;
  return (v0 * d2qh0(t) + d0 * delta * d2qh1(t) + c0 * delta * delta * d2qh2(t) +
          plateau * d2qh3(t)) / (delta * delta);
}

double SourceTerm::h_base(double s) const {
  switch (spec_.kind) {
    case HSpec::Kind::Zero: return 0.0;
    case HSpec::Kind::Constant: return spec_.c;
    case HSpec::Kind::LinearHalf: return 0.5 * (1.0 + s);
    case HSpec::Kind::Parabolic: return spec_.c * (1.0 - s * s);
    case HSpec::Kind::Spline: {
      const auto& xs = spec_.spline_s;
      const auto& ys = spec_.spline_y;
      const size_t k = spline_interval(xs, s);
      const double hk = xs[k + 1] - xs[k];
      const double A = (xs[k + 1] - s) / hk, B = (s - xs[k]) / hk;
      return A * ys[k] + B * ys[k + 1] +
             ((A * A * A - A) * spl_m_[k] + (B * B * B - B) * spl_m_[k + 1]) *
                 hk * hk / 6.0;
    }
  }
  return 0.0;
}

double SourceTerm::dh_base(double s) const {
  switch (spec_.kind) {
    case HSpec::Kind::Zero: return 0.0;
    case HSpec::Kind::Constant: return 0.0;
    case HSpec::Kind::LinearHalf: return 0.5;
    case HSpec::Kind::Parabolic: return -2.0 * spec_.c * s;
    case HSpec::Kind::Spline: {
      const auto& xs = spec_.spline_s;
      const auto& ys = spec_.spline_y;
      const size_t k = spline_interval(xs, s);
      const double hk = xs[k + 1] - xs[k];
      const double A = (xs[k + 1] - s) / hk, B = (s - xs[k]) / hk;
      return (ys[k + 1] - ys[k]) / hk +
             ((1.0 - 3.0 * A * A) * spl_m_[k] + (3.0 * B * B - 1.0) * spl_m_[k + 1]) *
                 hk / 6.0;
    }
  }
  return 0.0;
}

double SourceTerm::d2h_base(double s) const {
  switch (spec_.kind) {
    case HSpec::Kind::Zero: return 0.0;
    case HSpec::Kind::Constant: return 0.0;
    case HSpec::Kind::LinearHalf: return 0.0;
    case HSpec::Kind::Parabolic: return -2.0 * spec_.c;
    case HSpec::Kind::Spline: {
      const auto& xs = spec_.spline_s;
      const size_t k = spline_interval(xs, s);
      const double hk = xs[k + 1] - xs[k];
      const double A = (xs[k + 1] - s) / hk, B = (s - xs[k]) / hk;
      return A * spl_m_[k] + B * spl_m_[k + 1];
    }
  }
  return 0.0;
}

SourceTerm::Blend SourceTerm::fit_blend(double v0, double d0, double c0) const {
  auto in_band = [&](const Blend& b) {
    for (int k = 0; k <= 256; ++k) {
      const double v = b.eval(b.delta * k / 256.0);
      if (v < range_lo() - 1e-14 || v > range_hi() + 1e-14) return false;
    }
    return true;
  };
  auto make = [&](double delta) {
    Blend b;
    b.delta = delta;
    b.v0 = v0;
    b.d0 = d0;
    b.c0 = c0;
    b.plateau = std::clamp(v0 + 0.5 * d0 * delta, range_lo(), range_hi());
    return b;
  };
  Blend b = make(1.0);
  if (in_band(b)) return b;
  double lo = 0.0, hi = 1.0;  // lo admissible once found, hi not
  double found = -1.0;
  for (double d = 0.9; d > 1e-3; d *= 0.9) {
    b = make(d);
    if (in_band(b)) {
      found = d;
      break;
    }
    hi = d;
  }
  if (found < 0.0)
    throw AdmissibilityError(
        "extend_h: no blend width in (0,1] keeps h-tilde inside "
        "[h_min-eps, h_max+eps] (pathological h derivatives)");
  lo = found;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (in_band(make(mid)))
      lo = mid;
    else
      hi = mid;
  }
  return make(lo);
}

SourceTerm::SourceTerm(const HSpec& spec, double eps_ext)
    : spec_(spec), eps_(eps_ext) {
  if (eps_ <= 0.0) throw ConfigError("source.eps_ext: must be > 0");
  if (spec_.kind == HSpec::Kind::Spline) {
    const auto& xs = spec_.spline_s;
    if (xs.size() < 3 || xs.size() != spec_.spline_y.size())
      throw ConfigError("source.h spline: need >= 3 (s, h) pairs");
    for (size_t k = 1; k < xs.size(); ++k)
      if (xs[k] <= xs[k - 1])
        throw ConfigError("source.h spline: s grid must be strictly increasing");
    if (xs.front() > -1.0 || xs.back() < 1.0)
      throw ConfigError("source.h spline: s grid must cover [-1,1]");
    spl_m_ = spline_second_derivs(xs, spec_.spline_y);
  }
  // Range of h over [-1,1]: closed forms for the built-ins, dense sampling
  // for tabulated shapes.
  switch (spec_.kind) {
    case HSpec::Kind::Zero: hmin_ = hmax_ = 0.0; break;
    case HSpec::Kind::Constant: hmin_ = hmax_ = spec_.c; break;
    case HSpec::Kind::LinearHalf: hmin_ = 0.0; hmax_ = 1.0; break;
    case HSpec::Kind::Parabolic:
      hmin_ = std::min(0.0, spec_.c);
      hmax_ = std::max(0.0, spec_.c);
      break;
    case HSpec::Kind::Spline: {
      hmin_ = hmax_ = h_base(-1.0);
      const int ns = 10000;
      for (int k = 0; k <= ns; ++k) {
        const double v = h_base(-1.0 + 2.0 * k / ns);
        hmin_ = std::min(hmin_, v);
        hmax_ = std::max(hmax_, v);
      }
      break;
    }
  }
  up_ = fit_blend(h_base(1.0), dh_base(1.0), d2h_base(1.0));
  dplus_ = up_.delta;
  // Mirror side in the coordinate u = -1 - s >= 0: d/du = -d/ds.
  down_ = fit_blend(h_base(-1.0), -dh_base(-1.0), d2h_base(-1.0));
  dminus_ = down_.delta;

  double sd = 0.0, sdd = 0.0;
  const int ns = 4000;
  for (int k = 0; k <= ns; ++k) {
    const double s = -1.0 + 2.0 * k / ns;
    sd = std::max(sd, std::abs(dh_base(s)));
    sdd = std::max(sdd, std::abs(d2h_base(s)));
  }
  for (int k = 0; k <= ns; ++k) {
    const double uu = up_.delta * k / ns;
    sd = std::max({sd, std::abs(up_.deriv(uu)), std::abs(down_.deriv(uu))});
    sdd = std::max({sdd, std::abs(up_.deriv2(uu)), std::abs(down_.deriv2(uu))});
  }
  sup_dh_ = sd;
  sup_d2h_ = sdd;
}

double SourceTerm::h(double s) const {
  if (s > 1.0) return up_.eval(s - 1.0);
  if (s < -1.0) return down_.eval(-1.0 - s);
  return h_base(s);
}

double SourceTerm::dh(double s) const {
  if (s > 1.0) return up_.deriv(s - 1.0);
  if (s < -1.0) return -down_.deriv(-1.0 - s);
  return dh_base(s);
}

double SourceTerm::d2h(double s) const {
  if (s > 1.0) return up_.deriv2(s - 1.0);
  if (s < -1.0) return down_.deriv2(-1.0 - s);
  return d2h_base(s);
}

ScalarField source_eval(const ScalarField& phi, const ModelParams& params,
                        const SourceTerm& source) {
  ScalarField out(phi.grid);
  if (params.source_off) return out;
  for (size_t k = 0; k < phi.v.size(); ++k)
    out.v[k] = -params.m * phi.v[k] + source.h(phi.v[k]);
  return out;
}

double mass_ode_solution(double phi_bar0, double m, double c, double t) {
  const double e = std::exp(-m * t);
  return phi_bar0 * e + (c / m) * (1.0 - e);
}

namespace {

MassBounds bounds_from_asymptotes(double phi_bar0, double lo, double hi) {
  if (!(phi_bar0 > -1.0 && phi_bar0 < 1.0))
    throw AdmissibilityError("mass_bounds: initial mean must lie in (-1,1)");
  MassBounds b;
  b.c1 = std::min(phi_bar0, lo);
  b.c2 = std::max(phi_bar0, hi);
  if (!(b.c1 > -1.0 && b.c2 < 1.0))
    throw AdmissibilityError(
        "mass_bounds: envelope [" + std::to_string(b.c1) + ", " +
        std::to_string(b.c2) + "] is not contained in (-1,1)");
  return b;
}

}  // namespace

MassBounds mass_bounds(const ModelParams& params, const SourceTerm& source,
                       double phi_bar0) {
  return bounds_from_asymptotes(phi_bar0, source.h_min() / params.m,
                                source.h_max() / params.m);
}

MassBounds mass_bounds_paper(const ModelParams& params, const SourceTerm& source,
                             double phi_bar0, double omega_area) {
  return bounds_from_asymptotes(phi_bar0,
                                source.h_min() / (omega_area * params.m),
                                source.h_max() / (omega_area * params.m));
}

}  // namespace chd
