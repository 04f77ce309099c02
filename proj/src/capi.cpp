#include "chd.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "chd/diagnostics.hpp"
#include "chd/errors.hpp"
#include "chd/simulation.hpp"

namespace {

thread_local std::string g_last_error;

chd_status to_status(const std::exception& e) {
  g_last_error = e.what();
  if (dynamic_cast<const chd::ConfigError*>(&e)) return CHD_ERR_CONFIG;
  if (dynamic_cast<const chd::DomainError*>(&e)) return CHD_ERR_DOMAIN;
  if (dynamic_cast<const chd::AdmissibilityError*>(&e)) return CHD_ERR_CONFIG;
  if (dynamic_cast<const chd::SolverError*>(&e)) return CHD_ERR_INVARIANT;
  if (dynamic_cast<const chd::IoError*>(&e)) return CHD_ERR_RUNTIME;
  return CHD_ERR_RUNTIME;
}

template <class Fn>
chd_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return to_status(e);
  } catch (...) {
    g_last_error = "unknown error";
    return CHD_ERR_RUNTIME;
  }
}

chd_status require(bool cond, const char* msg) {
  if (cond) return CHD_OK;
  g_last_error = msg;
  return CHD_ERR_RUNTIME;
}

}  // namespace

struct chd_config {
  chd::SimConfig cfg;
};

struct chd_sim {
  std::unique_ptr<chd::Stepper> stepper;
  chd::SimConfig cfg;
  chd::State state;
  chd::DiagnosticsRecord last;
  bool stepped = false;
};

extern "C" {

const char* chd_version(void) { return chd::kVersion; }

const char* chd_last_error(void) { return g_last_error.c_str(); }

chd_status chd_config_create(chd_config** out) {
  return guarded([&]() {
    *out = new chd_config{};
    return CHD_OK;
  });
}

chd_status chd_config_load(const char* path, chd_config** out) {
  return guarded([&]() {
    auto c = std::make_unique<chd_config>();
    c->cfg = chd::SimConfig::parse_file(path);
    *out = c.release();
    return CHD_OK;
  });
}

chd_status chd_config_parse(const char* text, chd_config** out) {
  return guarded([&]() {
    auto c = std::make_unique<chd_config>();
    c->cfg = chd::SimConfig::parse(text);
    *out = c.release();
    return CHD_OK;
  });
}

chd_status chd_config_set(chd_config* c, const char* key, const char* value) {
  return guarded([&]() {
    // Re-parse the serialized config with the key overridden; keeps a single
    // source of truth for key handling.
    const std::string text = c->cfg.serialize() + std::string(key) + " = " +
                             value + "\n";
    c->cfg = chd::SimConfig::parse(text);
    return CHD_OK;
  });
}

chd_status chd_config_get(const chd_config* c, const char* key, char* buf,
                          size_t bufsz) {
  return guarded([&]() {
    const std::string text = c->cfg.serialize();
    const std::string want = std::string(key) + " = ";
    size_t pos = 0;
    while (pos < text.size()) {
      size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      const std::string line = text.substr(pos, eol - pos);
      if (line.rfind(want, 0) == 0) {
        const std::string val = line.substr(want.size());
        if (val.size() + 1 > bufsz)
          return require(false, "chd_config_get: buffer too small");
        std::memcpy(buf, val.c_str(), val.size() + 1);
        return CHD_OK;
      }
      pos = eol + 1;
    }
    return require(false, "chd_config_get: unknown key");
  });
}

chd_status chd_config_save(const chd_config* c, const char* path) {
  return guarded([&]() {
    std::ofstream out(path);
    if (!out) return require(false, "chd_config_save: cannot open file");
    out << c->cfg.serialize();
    return CHD_OK;
  });
}

chd_status chd_config_validate(const chd_config* c) {
  return guarded([&]() {
    c->cfg.validate();
    return CHD_OK;
  });
}

void chd_config_free(chd_config* c) { delete c; }

static chd_status dispatch_status(int code) {
  if (code == 0) return CHD_OK;
  if (code == 2) return CHD_ERR_CONFIG;
  return CHD_ERR_INVARIANT;
}

chd_status chd_dispatch(const chd_config* c, int deterministic, int workers,
                        double delta) {
  return guarded([&]() {
    std::optional<double> d;
    if (delta >= 0.0) d = delta;
    const int code = chd::run_mode(c->cfg, deterministic != 0, workers, d,
                                   std::cout);
    if (code != 0) g_last_error = "see log output";
    return dispatch_status(code);
  });
}

static chd_status run_as(const chd_config* c, const char* mode,
                         int deterministic, int workers, double delta) {
  chd::SimConfig cfg = c->cfg;
  cfg.mode = mode;
  return guarded([&]() {
    std::optional<double> d;
    if (delta >= 0.0) d = delta;
    const int code = chd::run_mode(cfg, deterministic != 0, workers, d,
                                   std::cout);
    if (code != 0) g_last_error = "see log output";
    return dispatch_status(code);
  });
}

chd_status chd_run(const chd_config* c, int deterministic) {
  return run_as(c, "run", deterministic, 0, -1.0);
}

chd_status chd_verify(const chd_config* c, int deterministic) {
  return run_as(c, "verify", deterministic, 0, -1.0);
}

chd_status chd_mms(const chd_config* c, int deterministic) {
  return run_as(c, "mms", deterministic, 0, -1.0);
}

chd_status chd_sweep(const chd_config* c, int deterministic, int workers) {
  return run_as(c, "sweep", deterministic, workers, -1.0);
}

chd_status chd_perturb(const chd_config* c, int deterministic, double delta) {
  return run_as(c, "perturb", deterministic, 0, delta);
}

chd_status chd_sim_create(const chd_config* c, chd_sim** out) {
  return guarded([&]() {
    c->cfg.validate();
    auto s = std::make_unique<chd_sim>();
    s->cfg = c->cfg;
    chd::StepOptions so = s->cfg.step;
    so.dt = s->cfg.dt;
    s->stepper = std::make_unique<chd::Stepper>(s->cfg.params, s->cfg.elliptic, so);
    const chd::Grid grid = s->cfg.make_grid();
    s->state = s->stepper->initialize(chd::generate(s->cfg.init, grid));
    *out = s.release();
    return CHD_OK;
  });
}

chd_status chd_sim_step(chd_sim* s) {
  return guarded([&]() {
    chd::StepTrace trace;
    chd::State next = s->stepper->step(s->state, &trace);
    s->last = chd::record(s->state, next, trace, s->cfg.params,
                          s->stepper->source(), s->stepper->potential(),
                          s->cfg.dt);
    s->state = std::move(next);
    s->stepped = true;
    return CHD_OK;
  });
}

chd_status chd_sim_time(const chd_sim* s, double* t) {
  *t = s->state.t;
  return CHD_OK;
}

chd_status chd_sim_grid(const chd_sim* s, int* nx, int* ny, double* lx,
                        double* ly) {
  const chd::Grid& g = s->state.phi.grid;
  if (nx) *nx = g.nx;
  if (ny) *ny = g.ny;
  if (lx) *lx = g.lx;
  if (ly) *ly = g.ly;
  return CHD_OK;
}

chd_status chd_sim_field(const chd_sim* s, const char* name, double* buf,
                         size_t len) {
  return guarded([&]() {
    const chd::ScalarField* f = nullptr;
    if (std::strcmp(name, "phi") == 0) f = &s->state.phi;
    else if (std::strcmp(name, "mu") == 0) f = &s->state.mu;
    else if (std::strcmp(name, "q") == 0) f = &s->state.q;
    else return require(false, "chd_sim_field: unknown field name");
    if (len != f->v.size())
      return require(false, "chd_sim_field: buffer length must be nx*ny");
    std::memcpy(buf, f->v.data(), len * sizeof(double));
    return CHD_OK;
  });
}

chd_status chd_sim_diagnostics(const chd_sim* s, double* buf, size_t len) {
  return guarded([&]() {
    if (!s->stepped)
      return require(false, "chd_sim_diagnostics: no step taken yet");
    if (len != 16)
      return require(false, "chd_sim_diagnostics: buffer length must be 16");
    const chd::DiagnosticsRecord& r = s->last;
    const double vals[16] = {r.t, r.E, r.phi_bar, r.grad_mu_sq, r.u_sq,
                             r.forcing, r.ei_residual, r.mass_residual,
                             r.pp2_res, r.mup_res_int, r.mup_res_bc,
                             r.phiqp_res, r.phi_min, r.phi_max,
                             static_cast<double>(r.newton_iters),
                             static_cast<double>(r.cg_iters)};
    std::memcpy(buf, vals, sizeof(vals));
    return CHD_OK;
  });
}

void chd_sim_free(chd_sim* s) { delete s; }

}  // extern "C"
