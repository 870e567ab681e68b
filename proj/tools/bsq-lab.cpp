#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsq/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral laboratory for long-wave systems"};
  app.require_subcommand(1);

  std::string run_cfg, lif_cfg, cau_cfg, suite;
  std::vector<double> eps_list, deltas;

  auto* run = app.add_subcommand("run", "evolve one configuration");
  run->add_option("config", run_cfg,
                  "config file, or a manifest.json to re-run")
      ->required();

  auto* lif = app.add_subcommand(
      "sweep-lifespan", "rescaled-horizon sweep over a list of eps values");
  lif->add_option("config", lif_cfg, "base config file")->required();
  lif->add_option("--eps", eps_list, "eps values")
      ->required()
      ->delimiter(',')
      ->expected(-1);

  auto* cau = app.add_subcommand(
      "sweep-cauchy", "pairwise-distance study across a smoothing ladder");
  cau->add_option("config", cau_cfg, "base config file")->required();
  cau->add_option("--deltas", deltas, "smoothing parameters")
      ->required()
      ->delimiter(',')
      ->expected(-1);

  auto* acc = app.add_subcommand("acceptance", "run an acceptance suite");
  acc->add_option("suite", suite,
                  "all, operators, integrator, dispersion, equivalence, "
                  "structure, mollifier, longtime, longtime-fast, "
                  "quasilinear, harness")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (run->parsed()) return bsq::cmd_run(run_cfg);
  if (lif->parsed()) return bsq::cmd_sweep_lifespan(lif_cfg, eps_list);
  if (cau->parsed()) return bsq::cmd_sweep_cauchy(cau_cfg, deltas);
  if (acc->parsed()) return bsq::cmd_acceptance(suite);
  return 2;
}
