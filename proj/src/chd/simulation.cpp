#include "chd/simulation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "chd/errors.hpp"
#include "chd/snapshot.hpp"

namespace chd {

namespace {

std::string csv_preamble(const SimConfig& cfg, bool deterministic) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# chd %s config=%016llx\n", kVersion,
                static_cast<unsigned long long>(cfg.hash()));
  std::string out = buf;
  if (!deterministic) {
    const std::time_t now = std::time(nullptr);
    char ts[64];
    std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out += std::string("# generated ") + ts + "\n";
  }
  return out;
}

int step_count(double t_end, double dt) {
  const int n = static_cast<int>(std::llround(t_end / dt));
  return n > 0 ? n : 1;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double xm = 0, ym = 0;
  for (size_t k = 0; k < n; ++k) {
    xm += x[k];
    ym += y[k];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double num = 0, den = 0;
  for (size_t k = 0; k < n; ++k) {
    num += (x[k] - xm) * (y[k] - ym);
    den += (x[k] - xm) * (x[k] - xm);
  }
  return num / den;
}

}  // namespace

RunSummary run_simulation(
    const SimConfig& cfg, bool deterministic, bool write_outputs,
    const MmsSolution* mms,
    const std::function<void(const DiagnosticsRecord&)>& observer) {
  cfg.validate();
  const Grid grid = cfg.make_grid();
  StepOptions sopts = cfg.step;
  sopts.dt = cfg.dt;
  Stepper stepper(cfg.params, cfg.elliptic, sopts);

  ScalarField phi0 = mms ? mms->phi_exact(0.0) : generate(cfg.init, grid);
  State state = stepper.initialize(phi0);

  std::ofstream csv;
  if (write_outputs) {
    csv.open(cfg.output.csv_path);
    if (!csv) throw IoError("run: cannot open " + cfg.output.csv_path);
    csv << csv_preamble(cfg, deterministic) << csv_header() << "\n";
  }

  RunSummary out;
  const int nsteps = step_count(cfg.t_end, cfg.dt);
  out.records.reserve(static_cast<size_t>(nsteps));
  StepTrace trace;
  for (int k = 1; k <= nsteps; ++k) {
    Forcing forcing;
    const Forcing* fptr = nullptr;
    if (mms) {
      forcing = mms->forcing(state.t + cfg.dt);
      fptr = &forcing;
    }
    State next = stepper.step(state, &trace, fptr);
    DiagnosticsRecord rec = record(state, next, trace, cfg.params,
                                   stepper.source(), stepper.potential(), cfg.dt);
    if (write_outputs) csv << csv_row(rec) << "\n";
    if (write_outputs && cfg.output.snapshot_every > 0 &&
        k % cfg.output.snapshot_every == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "/phi_%08d.chd", k);
      write_snapshot(cfg.output.snapshot_dir + name, "phi", next.phi, next.t);
      std::snprintf(name, sizeof(name), "/mu_%08d.chd", k);
      write_snapshot(cfg.output.snapshot_dir + name, "mu", next.mu, next.t);
      std::snprintf(name, sizeof(name), "/q_%08d.chd", k);
      write_snapshot(cfg.output.snapshot_dir + name, "q", next.q, next.t);
    }
    if (observer) observer(rec);
    out.records.push_back(std::move(rec));
    state = std::move(next);
  }
  out.final_state = std::move(state);
  return out;
}

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

ScalarField random_field(const Grid& g, std::uint64_t seed, double amp) {
  InitSpec spec;
  spec.kind = InitSpec::Kind::Random;
  spec.mean = 0.0;
  spec.amplitude = amp;
  spec.seed = seed;
  spec.clip_margin = 1e-6;
  return generate(spec, g);
}

void add_check(VerifyReport& rep, const std::string& name, bool pass,
               double measured, const char* what) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s = %.3e", what, measured);
  rep.checks.push_back({name, pass, buf});
}

}  // namespace

VerifyReport verify(const SimConfig& cfg, bool deterministic) {
  cfg.validate();
  VerifyReport rep;
  const Grid g = cfg.make_grid();

  {  // Summation by parts: zero-boundary v against interior gradient.
    ScalarField f = random_field(g, 11, 1.0);
    VectorField v(g);
    ScalarField vx_src = random_field(g, 12, 1.0), vy_src = random_field(g, 13, 1.0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        v.xf(i, j) = vx_src(i, j);
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        v.yf(i, j) = vy_src(i, j);
    const double lhs = inner(div(v), f);
    const double rhs = -inner_faces(v, grad(f, GradBc::NeumannZero));
    const double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    add_check(rep, "grad/div adjointness (zero-flux v)", rel <= 1e-12, rel,
              "relative defect");
    const double net = inner(div(v), ScalarField(g, 1.0));
    add_check(rep, "discrete divergence theorem", std::abs(net) <= 1e-13,
              std::abs(net), "net flux defect");
  }
  {  // Dirichlet-gradient adjointness with half-weighted walls.
    ScalarField q = random_field(g, 21, 1.0);
    VectorField u(g);
    ScalarField ux = random_field(g, 22, 1.0), uy = random_field(g, 23, 1.0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        u.xf(i, j) = ux(std::min(i, g.nx - 1), j);
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        u.yf(i, j) = uy(i, std::min(j, g.ny - 1));
    const double lhs = inner_faces(u, grad(q, GradBc::DirichletZero));
    const double rhs = -inner(div(u), q);
    const double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    add_check(rep, "dirichlet-gradient adjointness", rel <= 1e-12, rel,
              "relative defect");
  }
  {  // Dirichlet solver order on the manufactured sine problem.
    std::vector<double> xs, ys;
    for (int n : {16, 32, 64}) {
      const Grid gg(n, n, 1.0, 1.0);
      ScalarField f(gg);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          f(i, j) = 2.0 * M_PI * M_PI * std::sin(M_PI * gg.xc(i)) *
                    std::sin(M_PI * gg.yc(j));
      EllipticOptions eo = cfg.elliptic;
      eo.method = EllipticOptions::Method::Cg;
      const ScalarField q = solve_dirichlet(f, eo);
      double emax = 0.0;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          emax = std::max(emax, std::abs(q(i, j) - std::sin(M_PI * gg.xc(i)) *
                                                       std::sin(M_PI * gg.yc(j))));
      xs.push_back(std::log(1.0 / n));
      ys.push_back(std::log(emax));
    }
    const double order = regression_slope(xs, ys);
    add_check(rep, "dirichlet solver spatial order", order > 1.8 && order < 2.2,
              order, "observed order");
  }
  {  // Neumann kernel and compatibility rejection.
    ScalarField f(g);
    BoundaryFlux bf(g);
    const ScalarField c = solve_neumann(f, bf, 0.75, cfg.elliptic);
    double dev = 0.0;
    for (double v : c.v) dev = std::max(dev, std::abs(v - 0.75));
    add_check(rep, "neumann kernel (constant solution)", dev <= 1e-12, dev,
              "max deviation");
    bool rejected = false;
    ScalarField one(g, 1.0);
    try {
      solve_neumann(one, bf, 0.0, cfg.elliptic);
    } catch (const SolverError&) {
      rejected = true;
    }
    add_check(rep, "neumann incompatibility rejected", rejected,
              rejected ? 1.0 : 0.0, "rejected");
  }

  // Short trajectory checks on the configured problem.
  SimConfig short_cfg = cfg;
  short_cfg.t_end = std::min(cfg.t_end, 50.0 * cfg.dt);
  short_cfg.output.snapshot_every = 0;
  short_cfg.output.csv_path = "/dev/null";
  {
    const Grid gg = short_cfg.make_grid();
    ScalarField phi0 = generate(short_cfg.init, gg);
    bool env_ok = true;
    double env_worst = 0.0;
    MassBounds mb;
    bool admissible = true;
    StepOptions so = short_cfg.step;
    so.dt = short_cfg.dt;
    Stepper st(short_cfg.params, short_cfg.elliptic, so);
    try {
      mb = short_cfg.params.paper_mass_bounds
               ? mass_bounds_paper(short_cfg.params, st.source(), mean(phi0),
                                   gg.area())
               : mass_bounds(short_cfg.params, st.source(), mean(phi0));
    } catch (const AdmissibilityError&) {
      admissible = false;
    }
    double mass_worst = 0.0, divu_worst = 0.0, bound_worst = 0.0;
    RunSummary sum = run_simulation(short_cfg, deterministic, false);
    for (const auto& r : sum.records) {
      mass_worst = std::max(mass_worst, std::abs(r.mass_residual));
      bound_worst = std::max(bound_worst, std::max(r.phi_max, -r.phi_min));
      if (admissible) {
        const double slack = short_cfg.params.m * short_cfg.dt;
        if (r.phi_bar < mb.c1 - slack || r.phi_bar > mb.c2 + slack) env_ok = false;
        env_worst = std::max(env_worst, std::max(mb.c1 - r.phi_bar, r.phi_bar - mb.c2));
      }
    }
    {  // div u = S at the final state.
      const State& s = sum.final_state;
      const ScalarField S = source_eval(s.phi, short_cfg.params, st.source());
      ScalarField d = div(s.u);
      for (int k = 0; k < gg.cells(); ++k)
        d.v[static_cast<size_t>(k)] -= S.v[static_cast<size_t>(k)];
      divu_worst = norm_l2(d);
    }
    add_check(rep, "exact discrete mass law", mass_worst <= 1e-9, mass_worst,
              "max |mass_residual|");
    add_check(rep, "darcy constraint div u = S", divu_worst <= 1e-8, divu_worst,
              "||div u - S||");
    if (short_cfg.params.pot_mode == PotentialMode::Logarithmic)
      add_check(rep, "pointwise bound |phi| < 1", bound_worst < 1.0, bound_worst,
                "max |phi|");
    if (admissible)
      add_check(rep, "mass envelope", env_ok, env_worst, "worst excursion");

    // Energy decay with the source switched off.
    SimConfig off = short_cfg;
    off.params.source_off = true;
    RunSummary sum_off = run_simulation(off, deterministic, false);
    double worst = 0.0;
    double eprev = energy(generate(off.init, gg),
                          PotentialEvaluator::from_params(off.params));
    for (const auto& r : sum_off.records) {
      worst = std::max(worst, r.E - eprev - 1e-12 * std::max(1.0, std::abs(eprev)));
      eprev = r.E;
    }
    add_check(rep, "energy dissipation (source off)", worst <= 0.0, worst,
              "worst E increase");

    // Determinism: identical short runs produce identical CSV rows.
    RunSummary a = run_simulation(short_cfg, true, false);
    RunSummary b = run_simulation(short_cfg, true, false);
    bool same = a.records.size() == b.records.size();
    if (same)
      for (size_t k = 0; k < a.records.size(); ++k)
        if (csv_row(a.records[k]) != csv_row(b.records[k])) {
          same = false;
          break;
        }
    add_check(rep, "bitwise determinism", same, same ? 1.0 : 0.0, "identical");

    // Chemical-potential reconstruction through the Neumann problem.
    {
      StepOptions so2 = short_cfg.step;
      so2.dt = short_cfg.dt;
      Stepper st2(short_cfg.params, short_cfg.elliptic, so2);
      State s0 = st2.initialize(phi0);
      StepTrace tr;
      State s1 = st2.step(s0, &tr);
      ScalarField rhs(gg);
      for (int k = 0; k < gg.cells(); ++k)
        rhs.v[static_cast<size_t>(k)] = tr.source.v[static_cast<size_t>(k)] -
                                        tr.dphi_dt.v[static_cast<size_t>(k)] -
                                        tr.transport_div.v[static_cast<size_t>(k)];
      EllipticOptions eo = short_cfg.elliptic;
      const ScalarField mu_rec =
          solve_neumann(rhs, tr.mu_flux, mean(s1.mu), eo);
      ScalarField dm = mu_rec;
      for (int k = 0; k < gg.cells(); ++k)
        dm.v[static_cast<size_t>(k)] -= s1.mu.v[static_cast<size_t>(k)];
      const double rel = norm_l2(dm) / std::max(1.0, norm_l2(s1.mu));
      add_check(rep, "mu reconstruction via neumann problem", rel <= 1e-6, rel,
                "relative error");
    }
  }
  return rep;
}

SweepResult sweep(const SimConfig& cfg, bool deterministic, int workers) {
  cfg.validate();
  SweepResult res;
  const Grid g = cfg.make_grid();
  const int mc = cfg.sweep.m_count, cc = cfg.sweep.c_count;
  res.cells.resize(static_cast<size_t>(mc * cc));

  auto linspace = [](double a, double b, int n, int k) {
    return n == 1 ? a : a + (b - a) * k / (n - 1);
  };

  // Admissibility is decided before any cell runs.
  for (int im = 0; im < mc; ++im)
    for (int ic = 0; ic < cc; ++ic) {
      SweepCell& cell = res.cells[static_cast<size_t>(im * cc + ic)];
      cell.m = linspace(cfg.sweep.m_min, cfg.sweep.m_max, mc, im);
      cell.c = linspace(cfg.sweep.c_min, cfg.sweep.c_max, cc, ic);
      SimConfig cc_cfg = cfg;
      cc_cfg.params.m = cell.m;
      cc_cfg.params.h = HSpec::constant(cell.c);
      try {
        SourceTerm src(cc_cfg.params.h, cc_cfg.params.eps_ext);
        const double pb0 = mean(generate(cfg.init, g));
        const MassBounds mb =
            cfg.params.paper_mass_bounds
                ? mass_bounds_paper(cc_cfg.params, src, pb0, g.area())
                : mass_bounds(cc_cfg.params, src, pb0);
        cell.c1 = mb.c1;
        cell.c2 = mb.c2;
        cell.admissible = true;
      } catch (const AdmissibilityError&) {
        cell.admissible = false;
        res.any_inadmissible = true;
      }
    }

  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= res.cells.size()) return;
      SweepCell& cell = res.cells[k];
      if (!cell.admissible) continue;
      SimConfig run_cfg = cfg;
      run_cfg.params.m = cell.m;
      run_cfg.params.h = HSpec::constant(cell.c);
      run_cfg.t_end = cfg.sweep.t_end;
      run_cfg.output.snapshot_every = 0;
      cell.ok = true;
      cell.phi_bar_min = 1.0;
      cell.phi_bar_max = -1.0;
      const double slack = cell.m * run_cfg.dt;
      RunSummary sum = run_simulation(run_cfg, deterministic, false);
      for (const auto& r : sum.records) {
        cell.phi_bar_min = std::min(cell.phi_bar_min, r.phi_bar);
        cell.phi_bar_max = std::max(cell.phi_bar_max, r.phi_bar);
        if (!(r.phi_bar > -1.0 && r.phi_bar < 1.0)) cell.ok = false;
        if (r.phi_bar < cell.c1 - slack || r.phi_bar > cell.c2 + slack)
          cell.ok = false;
      }
    }
  };
  const int nw = std::max(1, workers);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nw - 1));
  for (int w = 1; w < nw; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  for (const auto& cell : res.cells)
    if (cell.admissible && !cell.ok) res.all_ok = false;

  std::ofstream csv(cfg.sweep.csv_path);
  if (csv) {
    csv << csv_preamble(cfg, deterministic)
        << "m,c,admissible,ok,c1,c2,phi_bar_min,phi_bar_max\n";
    char buf[256];
    for (const auto& cell : res.cells) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                    cell.m, cell.c, cell.admissible ? 1 : 0, cell.ok ? 1 : 0,
                    cell.c1, cell.c2, cell.phi_bar_min, cell.phi_bar_max);
      csv << buf;
    }
  }
  return res;
}

MmsResult mms_convergence(const SimConfig& cfg, bool deterministic) {
  cfg.validate();
  MmsResult res;
  SimConfig base = cfg;
  base.params.pot_mode = PotentialMode::Regularized;
  base.output.snapshot_every = 0;

  auto run_level = [&](int n, double t_end, double dt, double a, double b,
                       double* err_phi, double* err_q) {
    SimConfig lc = base;
    lc.nx = lc.ny = n;
    lc.dt = dt;
    lc.t_end = t_end;
    const Grid g = lc.make_grid();
    SourceTerm src(lc.params.h, lc.params.eps_ext);
    MmsSolution mms(g, lc.params, src, a, b, t_end);
    RunSummary sum = run_simulation(lc, deterministic, false, &mms);
    const ScalarField pe = mms.phi_exact(sum.final_state.t);
    const ScalarField qe = mms.q_exact(sum.final_state.t);
    ScalarField dp = sum.final_state.phi, dq = sum.final_state.q;
    for (int k = 0; k < g.cells(); ++k) {
      dp.v[static_cast<size_t>(k)] -= pe.v[static_cast<size_t>(k)];
      dq.v[static_cast<size_t>(k)] -= qe.v[static_cast<size_t>(k)];
    }
    *err_phi = norm_l2(dp);
    *err_q = norm_l2(dq);
  };

  {  // Zero-amplitude exactness.
    double ep = 0.0, eq = 0.0;
    run_level(cfg.mms.spatial_n0, 8.0 * cfg.mms.spatial_dt0, cfg.mms.spatial_dt0,
              0.0, 0.0, &ep, &eq);
    res.zero_amplitude_err = std::max(ep, eq);
  }

  {  // Spatial study: dt scaled with h^2.
    std::vector<double> lh, lp, lq;
    for (int lev = 0; lev < 3; ++lev) {
      const int n = cfg.mms.spatial_n0 << lev;
      const double dt = cfg.mms.spatial_dt0 / std::pow(4.0, lev);
      double ep = 0.0, eq = 0.0;
      run_level(n, cfg.mms.spatial_t_end, dt, cfg.mms.a, cfg.mms.b, &ep, &eq);
      res.levels.push_back({"spatial", n, dt, ep, eq});
      lh.push_back(std::log(1.0 / n));
      lp.push_back(std::log(ep));
      lq.push_back(std::log(eq));
    }
    res.spatial_order_phi = regression_slope(lh, lp);
    res.spatial_order_q = regression_slope(lh, lq);
  }

  {  // Temporal study on a fixed grid; consecutive differences cancel the
     // spatial bias, so the observed order is log2 of their ratio.
    std::vector<double> ep(3), eq(3);
    for (int lev = 0; lev < 3; ++lev) {
      const double dt = cfg.mms.temporal_dt0 / std::pow(2.0, lev);
      double p = 0.0, q = 0.0;
      run_level(cfg.mms.temporal_n, cfg.mms.temporal_t_end, dt, cfg.mms.a,
                cfg.mms.b, &p, &q);
      res.levels.push_back({"temporal", cfg.mms.temporal_n, dt, p, q});
      ep[static_cast<size_t>(lev)] = p;
      eq[static_cast<size_t>(lev)] = q;
    }
    res.temporal_order_phi = std::log2((ep[0] - ep[1]) / (ep[1] - ep[2]));
    res.temporal_order_q = std::log2((eq[0] - eq[1]) / (eq[1] - eq[2]));
  }

  res.orders_ok = res.spatial_order_phi >= 1.8 && res.spatial_order_phi <= 2.2 &&
                  res.spatial_order_q >= 1.8 && res.spatial_order_q <= 2.2 &&
                  res.temporal_order_phi >= 0.8 && res.temporal_order_phi <= 1.2 &&
                  res.zero_amplitude_err <= 1e-12;

  std::ofstream csv(cfg.mms.csv_path);
  if (csv) {
    csv << csv_preamble(cfg, deterministic) << "study,n,dt,err_phi,err_q\n";
    char buf[192];
    for (const auto& l : res.levels) {
      std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g,%.17g\n",
                    l.study.c_str(), l.n, l.dt, l.err_phi, l.err_q);
      csv << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "# spatial_order_phi=%.4f spatial_order_q=%.4f "
                  "temporal_order_phi=%.4f temporal_order_q=%.4f zero_err=%.3e\n",
                  res.spatial_order_phi, res.spatial_order_q,
                  res.temporal_order_phi, res.temporal_order_q,
                  res.zero_amplitude_err);
    csv << buf;
  }
  return res;
}

PerturbResult perturb_experiment(const SimConfig& cfg, bool deterministic,
                                 double delta) {
  cfg.validate();
  (void)deterministic;
  PerturbResult res;
  const Grid g = cfg.make_grid();
  StepOptions so = cfg.step;
  so.dt = cfg.dt;
  Stepper sa(cfg.params, cfg.elliptic, so);
  Stepper sb(cfg.params, cfg.elliptic, so);
  const PotentialEvaluator pot = PotentialEvaluator::from_params(cfg.params);

  ScalarField phi0 = generate(cfg.init, g);
  ScalarField phi0p = phi0;
  const double bound = 1.0 - cfg.init.clip_margin;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double v = phi0p(i, j) + delta * std::cos(M_PI * g.xc(i) / g.lx);
      phi0p(i, j) = std::clamp(v, -bound, bound);
    }

  State a = sa.initialize(phi0);
  State b = sb.initialize(phi0p);
  res.y0 = uniqueness_gap(a, b, pot);
  res.table.emplace_back(0.0, res.y0);
  const int nsteps = step_count(cfg.t_end, cfg.dt);
  for (int k = 1; k <= nsteps; ++k) {
    a = sa.step(a);
    b = sb.step(b);
    res.table.emplace_back(a.t, uniqueness_gap(a, b, pot));
  }

  std::vector<double> ts, ly;
  for (const auto& [t, y] : res.table)
    if (y > 0.0) {
      ts.push_back(t);
      ly.push_back(std::log(y));
    }
  if (ts.size() >= 2 && res.y0 > 0.0) {
    res.fitted_rate = regression_slope(ts, ly);
    for (const auto& [t, y] : res.table)
      res.max_ratio =
          std::max(res.max_ratio, y / (res.y0 * std::exp(res.fitted_rate * t)));
  }

  std::ofstream csv(cfg.perturb.csv_path);
  if (csv) {
    csv << csv_preamble(cfg, deterministic) << "t,Y\n";
    char buf[96];
    for (const auto& [t, y] : res.table) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, y);
      csv << buf;
    }
    std::snprintf(buf, sizeof(buf), "# fitted_rate=%.6g max_ratio=%.6g\n",
                  res.fitted_rate, res.max_ratio);
    csv << buf;
  }
  return res;
}

int run_mode(const SimConfig& cfg, bool deterministic, int workers,
             std::optional<double> delta_override, std::ostream& log) {
  try {
    cfg.validate();
    if (cfg.mode == "run") {
      RunSummary sum = run_simulation(cfg, deterministic, true);
      log << "run: " << sum.records.size() << " steps, t = "
          << sum.final_state.t << ", E = "
          << (sum.records.empty() ? 0.0 : sum.records.back().E)
          << ", diagnostics -> " << cfg.output.csv_path << "\n";
      return 0;
    }
    if (cfg.mode == "verify") {
      VerifyReport rep = verify(cfg, deterministic);
      for (const auto& c : rep.checks)
        log << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.measured
            << ")\n";
      return rep.all_pass() ? 0 : 1;
    }
    if (cfg.mode == "sweep") {
      SimConfig sc = cfg;
      if (workers > 0) sc.sweep.workers = workers;
      SweepResult res = sweep(sc, deterministic, sc.sweep.workers);
      for (const auto& cell : res.cells)
        log << "sweep m=" << cell.m << " c=" << cell.c
            << (cell.admissible ? (cell.ok ? " ok" : " ENVELOPE-VIOLATION")
                                : " inadmissible")
            << "\n";
      log << "sweep table -> " << sc.sweep.csv_path << "\n";
      if (res.any_inadmissible) return 2;
      return res.all_ok ? 0 : 1;
    }
    if (cfg.mode == "mms") {
      MmsResult res = mms_convergence(cfg, deterministic);
      log << "mms spatial order phi=" << res.spatial_order_phi
          << " q=" << res.spatial_order_q
          << "; temporal order phi=" << res.temporal_order_phi
          << " q=" << res.temporal_order_q
          << "; zero-amplitude err=" << res.zero_amplitude_err << "\n";
      log << "mms table -> " << cfg.mms.csv_path << "\n";
      return res.orders_ok ? 0 : 1;
    }
    if (cfg.mode == "perturb") {
      const double delta = delta_override.value_or(cfg.perturb.delta);
      PerturbResult res = perturb_experiment(cfg, deterministic, delta);
      log << "perturb delta=" << delta << " Y0=" << res.y0
          << " fitted_rate=" << res.fitted_rate
          << " max_ratio=" << res.max_ratio << " -> " << cfg.perturb.csv_path
          << "\n";
      return 0;
    }
    throw ConfigError("mode: unknown mode '" + cfg.mode + "'");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chd
