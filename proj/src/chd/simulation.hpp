#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chd/config.hpp"
#include "chd/diagnostics.hpp"
#include "chd/mms.hpp"

namespace chd {

inline constexpr const char* kVersion = "0.1.0";

struct RunSummary {
  State final_state;
  std::vector<DiagnosticsRecord> records;
};

// Steps t = 0 .. t_end, one diagnostics record per step. With write_outputs
// the CSV (and snapshot cadence) from the config are honored; `mms` switches
// the run to the forced system started from the exact sample at t = 0.
// `observer`, when set, sees every record as it is produced.
RunSummary run_simulation(
    const SimConfig& cfg, bool deterministic, bool write_outputs,
    const MmsSolution* mms = nullptr,
    const std::function<void(const DiagnosticsRecord&)>& observer = {});

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string measured;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

// Invariant suite over the given configuration (short runs + operator
// identities), one check per line of the report.
VerifyReport verify(const SimConfig& cfg, bool deterministic);

struct SweepCell {
  double m = 0.0, c = 0.0;
  bool admissible = false;
  bool ok = false;  // envelope and open-interval bound held at every step
  double c1 = 0.0, c2 = 0.0;
  double phi_bar_min = 0.0, phi_bar_max = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  bool any_inadmissible = false;
  bool all_ok = true;
};

SweepResult sweep(const SimConfig& cfg, bool deterministic, int workers);

struct MmsLevel {
  std::string study;
  int n = 0;
  double dt = 0.0;
  double err_phi = 0.0, err_q = 0.0;
};

struct MmsResult {
  std::vector<MmsLevel> levels;
  double spatial_order_phi = 0.0, spatial_order_q = 0.0;
  double temporal_order_phi = 0.0, temporal_order_q = 0.0;
  double zero_amplitude_err = 0.0;
  bool orders_ok = false;
};

MmsResult mms_convergence(const SimConfig& cfg, bool deterministic);

struct PerturbResult {
  std::vector<std::pair<double, double>> table;  // (t, Y)
  double y0 = 0.0;
  double fitted_rate = 0.0;  // L from ln Y ~ ln Y0 + L t
  double max_ratio = 0.0;    // max_t Y / (Y0 exp(L t))
};

PerturbResult perturb_experiment(const SimConfig& cfg, bool deterministic,
                                 double delta);

// Dispatch on cfg.mode; prints a human-readable summary. Returns the CLI
// exit code contract: 0 success, 1 invariant violation, 2 config error.
int run_mode(const SimConfig& cfg, bool deterministic, int workers,
             std::optional<double> delta_override, std::ostream& log);

}  // namespace chd
