#pragma once

#include <cstdint>
#include <string>

#include "chd/elliptic.hpp"
#include "chd/initdata.hpp"
#include "chd/model.hpp"
#include "chd/stepper.hpp"

namespace chd {

struct OutputOptions {
  std::string csv_path = "diagnostics.csv";
  int snapshot_every = 0;  // steps; 0 disables snapshots
  std::string snapshot_dir = ".";
};

struct SweepOptions {
  double m_min = 0.5, m_max = 2.0;
  int m_count = 5;
  double c_min = -0.4, c_max = 0.4;
  int c_count = 5;
  double t_end = 0.5;
  int workers = 1;
  std::string csv_path = "sweep.csv";
};

struct MmsOptions {
  double a = 0.25, b = 0.1;
  double spatial_t_end = 0.02;
  double spatial_dt0 = 2e-3;  // on the coarsest grid; scaled by (h/h0)^2
  int spatial_n0 = 32;        // coarsest grid, then 2x and 4x
  double temporal_t_end = 0.2;
  double temporal_dt0 = 4e-3;  // then halved twice
  int temporal_n = 64;
  std::string csv_path = "mms.csv";
};

struct PerturbOptions {
  double delta = 1e-6;
  std::string csv_path = "perturb.csv";
};

// Flat `section.key = value` configuration.
struct SimConfig {
  int nx = 64, ny = 64;
  double lx = 1.0, ly = 1.0;
  ModelParams params;
  InitSpec init;
  double dt = 1e-3;
  double t_end = 1.0;
  StepOptions step;  // step.dt mirrors dt after validate()
  EllipticOptions elliptic;
  OutputOptions output;
  SweepOptions sweep;
  MmsOptions mms;
  PerturbOptions perturb;
  std::string mode = "run";  // run | mms | verify | sweep | perturb

  static SimConfig parse(const std::string& text);
  static SimConfig parse_file(const std::string& path);
  std::string serialize() const;
  void validate() const;  // throws ConfigError naming the offending key
  Grid make_grid() const { return Grid(nx, ny, lx, ly); }
  std::uint64_t hash() const;  // FNV-1a of the canonical serialization
};

}  // namespace chd
