#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "ccast/config.hpp"
#include "ccast/model.hpp"
#include "ccast/sim.hpp"

namespace ccast {

inline constexpr const char* kToolVersion = "ccast 0.1.0";

struct CommonArgs {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

struct BuildArgs {
  std::string graph_path;
  std::string params_path;  // optional config file with an [energy] section
  std::string algorithm = "bdct";  // bdct|spt|mst|rdct|oracle
  int oracle_limit = 9;
  CommonArgs common;
};

struct SimulateArgs {
  std::string config_path;  // optional; defaults reproduce the stock protocol
  std::optional<int> trials;
  std::optional<std::uint64_t> k_slots;
  std::optional<std::string> scenario;
  CommonArgs common;
};

struct RoundsArgs {
  std::string config_path;
  CommonArgs common;
};

struct GadgetArgs {
  std::string instance_path;
  CommonArgs common;
};

// Commands throw InputError / GuardError; the CLI maps them to exit codes.
void run_build(const BuildArgs& args, std::ostream& log);
void run_simulate(const SimulateArgs& args, std::ostream& log);
void run_rounds(const RoundsArgs& args, std::ostream& log);
void run_gadget(const GadgetArgs& args, std::ostream& log);

// 0 on success, 1 on InputError, 2 on GuardError or any internal failure.
int run_with_exit_code(const std::function<void()>& body, std::ostream& err);

// Config translation, shared with tests.
EnergyParams energy_params_from(const Config& config, double max_range_m);
DeploymentConfig deployment_from(const Config& config);
CompareConfig compare_config_from(const Config& config, const SimulateArgs& args);

}  // namespace ccast
