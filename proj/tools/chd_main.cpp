// Command-line driver for the chd shared library. Subcommands:
//   chd run <config>      time integration with diagnostics CSV + snapshots
//   chd mms <config>      manufactured-solution convergence studies
//   chd verify <config>   invariant suite, one PASS/FAIL line per check
//   chd sweep <config>    grid over (m, c) source parameters
//   chd perturb <config>  continuous-dependence experiment
// Exit codes: 0 success, 1 invariant violation, 2 config/usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "chd.h"

int main(int argc, char** argv) {
  CLI::App app{"chd — Cahn–Hilliard–Darcy simulator with mass source"};
  app.set_version_flag("--version", std::string("chd ") + chd_version());
  app.require_subcommand(1);

  std::string config_path;
  bool deterministic = false;
  int workers = 0;
  double delta = -1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration file")->required();
    sub->add_flag("--deterministic", deterministic,
                  "suppress timestamp comments in CSV outputs");
  };
  CLI::App* cmd_run = app.add_subcommand("run", "run a simulation");
  add_common(cmd_run);
  CLI::App* cmd_mms = app.add_subcommand("mms", "convergence studies");
  add_common(cmd_mms);
  CLI::App* cmd_verify = app.add_subcommand("verify", "invariant suite");
  add_common(cmd_verify);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "parameter sweep");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--workers", workers, "worker pool size");
  CLI::App* cmd_perturb =
      app.add_subcommand("perturb", "continuous-dependence experiment");
  add_common(cmd_perturb);
  cmd_perturb->add_option("--delta", delta, "perturbation amplitude");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  chd_config* cfg = nullptr;
  if (chd_config_load(config_path.c_str(), &cfg) != CHD_OK) {
    std::fprintf(stderr, "config error: %s\n", chd_last_error());
    return 2;
  }

  chd_status st = CHD_OK;
  if (cmd_run->parsed()) st = chd_run(cfg, deterministic);
  else if (cmd_mms->parsed()) st = chd_mms(cfg, deterministic);
  else if (cmd_verify->parsed()) st = chd_verify(cfg, deterministic);
  else if (cmd_sweep->parsed()) st = chd_sweep(cfg, deterministic, workers);
  else if (cmd_perturb->parsed()) st = chd_perturb(cfg, deterministic, delta);
  chd_config_free(cfg);

  if (st == CHD_OK) return 0;
  if (st == CHD_ERR_CONFIG) {
    std::fprintf(stderr, "config error: %s\n", chd_last_error());
    return 2;
  }
  std::fprintf(stderr, "error: %s\n", chd_last_error());
  return 1;
}
