#pragma once
#include <string>
#include <vector>

#include "bsq/config.hpp"
#include "bsq/diagnostics.hpp"
#include "bsq/initial_data.hpp"
#include "bsq/integrator.hpp"
#include "bsq/io.hpp"
#include "bsq/params.hpp"
#include "bsq/systems.hpp"

namespace bsq {

// Validated form of a run configuration (see README for the key set).
struct RunSetup {
  Config raw;
  int dim = 1, n = 256;
  double length = 2 * pi;
  std::string system = "abcd";
  CaseParams cp;
  FifthParams fifth;
  FdParams fd;
  KaupParams kaup;
  double eps = 0.1;
  double delta = 0.1;                  // mollified smoothing
  double bathy_amplitude = 0;          // bottom profile amplitude
  int bathy_mode = 1;                  //   cosine mode count
  bool tilde_drop_remainder = false;
  InitSpec init;
  IntegratorConfig integ;
  BlowupMonitor::Options monitor;
  double sobolev_s = 1.6;
  std::string outdir = "out";
  bool save_final = true;  // final-state snapshot
  int snapshot_every = 0;  // extra snapshots every k-th report, 0 = off
};

RunSetup build_run_setup(const Config& cfg);

struct RunResult {
  Verdict verdict;
  long steps = 0;
  std::vector<EnergyReport> reports;
  State final_state;
  std::string csv_path, manifest_path;
};

// Evolves per the setup, streaming diagnostics to <outdir>/diagnostics.csv,
// writing <outdir>/manifest.json and (optionally) final.bsq1. A blow-up
// verdict ends the run early and is recorded, not thrown.
RunResult run_single(const RunSetup& setup);

// CLI entry points; return process exit codes (0 ok including a blow-up
// verdict, 2 configuration parse errors, 3 validation errors).
int cmd_run(const std::string& config_path);
int cmd_sweep_lifespan(const std::string& config_path,
                       const std::vector<double>& eps_list);
int cmd_sweep_cauchy(const std::string& config_path,
                     const std::vector<double>& deltas);
int cmd_acceptance(const std::string& suite);

}  // namespace bsq
