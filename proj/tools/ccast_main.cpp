// ccast: build maximum-lifetime convergecast trees, run drain simulations and
// rounds experiments, and exercise the set-cover hardness gadget.

#include <iostream>

#include <CLI11.hpp>

#include "ccast/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"maximum-lifetime convergecast tree toolkit"};
  app.require_subcommand(1);

  ccast::BuildArgs build_args;
  ccast::SimulateArgs simulate_args;
  ccast::RoundsArgs rounds_args;
  ccast::GadgetArgs gadget_args;

  std::uint64_t seed_flag = 0;

  auto* build = app.add_subcommand("build", "build a data collection tree for a graph file");
  build->add_option("--graph", build_args.graph_path, "graph file")->required();
  build->add_option("--algorithm", build_args.algorithm, "bdct|spt|mst|rdct|oracle")
      ->default_val("bdct");
  build->add_option("--params", build_args.params_path, "config file with an [energy] section");
  build->add_option("--out", build_args.common.out_dir, "output directory")->default_val(".");
  build->add_option("--oracle-limit", build_args.oracle_limit,
                    "sensor-count cap for the exhaustive oracle");
  build->add_option("--seed", seed_flag, "seed for the rdct algorithm");

  auto* simulate = app.add_subcommand("simulate", "lifetime comparison over random deployments");
  simulate->add_option("--config", simulate_args.config_path, "experiment config file");
  simulate->add_option("--out", simulate_args.common.out_dir, "output directory")->default_val(".");
  int trials_flag = 0;
  std::uint64_t k_slots_flag = 0;
  std::string scenario_flag;
  simulate->add_option("--seed", seed_flag, "master seed");
  simulate->add_option("--trials", trials_flag, "trials per (scenario, N) cell");
  simulate->add_option("--k-slots", k_slots_flag, "slots between tree reconstructions");
  simulate->add_option("--scenario", scenario_flag, "center|corner (restricts the scenario list)");

  auto* rounds = app.add_subcommand("rounds", "testbed-style rounds experiment");
  rounds->add_option("--config", rounds_args.config_path, "experiment config file");
  rounds->add_option("--out", rounds_args.common.out_dir, "output directory")->default_val(".");
  rounds->add_option("--seed", seed_flag, "deployment + rdct seed");

  auto* gadget = app.add_subcommand("gadget", "set-cover reduction verdicts");
  gadget->add_option("--instance", gadget_args.instance_path, "set-cover instance file")
      ->required();
  gadget->add_option("--out", gadget_args.common.out_dir, "output directory")->default_val(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  return ccast::run_with_exit_code(
      [&] {
        if (build->parsed()) {
          if (build->count("--seed")) build_args.common.seed = seed_flag;
          ccast::run_build(build_args, std::cout);
        } else if (simulate->parsed()) {
          if (simulate->count("--seed")) simulate_args.common.seed = seed_flag;
          if (simulate->count("--trials")) simulate_args.trials = trials_flag;
          if (simulate->count("--k-slots")) simulate_args.k_slots = k_slots_flag;
          if (simulate->count("--scenario")) simulate_args.scenario = scenario_flag;
          ccast::run_simulate(simulate_args, std::cout);
        } else if (rounds->parsed()) {
          if (rounds->count("--seed")) rounds_args.common.seed = seed_flag;
          ccast::run_rounds(rounds_args, std::cout);
        } else if (gadget->parsed()) {
          ccast::run_gadget(gadget_args, std::cout);
        }
      },
      std::cerr);
}
