#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nnls/analysis.hpp"
#include "nnls/config.hpp"
#include "nnls/groundstate.hpp"

namespace nnls {

enum ExitCode : int { kExitSuccess = 0, kExitFailure = 1, kExitConfig = 2 };

struct SweepRow {
  double eps = 0.0;
  bool converged = false;
  bool warm_started = false;
  std::string error;
  Solution solution;
  ConcentrationReport maxima;
  std::vector<DecayFit> decay_u;  // per well
  std::vector<DecayFit> decay_v;
  ModificationReport modification;
  LocalizationReport localization;
  AprioriQuantities apriori;
};

struct SweepResult {
  std::shared_ptr<const Potential> potential;
  std::vector<GroundState> ground_states;  // one per distinct well level
  std::vector<double> c_targets;           // c(V(x_i)) per well
  std::vector<SweepRow> rows;
  AprioriReport apriori;
  bool all_converged() const;
};

Potential build_config_potential(const RunConfig& c);

/// Ground states at lambda = V(x_i) for every well, on the configured
/// ground-state grid.
std::vector<GroundState> well_ground_states(const RunConfig& c, const Potential& potential,
                                            std::vector<double>* c_targets = nullptr,
                                            std::vector<std::size_t>* well_to_state = nullptr);

MinimizeOptions minimize_options(const RunConfig& c);

/// Solves every eps in the config. With warm_start, rows run sequentially and
/// each starts from the previous solution stretched to the new eps; otherwise
/// each row starts from the ansatz and up to workers rows run concurrently.
SweepResult run_sweep(const RunConfig& c, bool warm_start, int workers = 1,
                      const std::vector<GroundState>* ground_states = nullptr);

struct CommandResult {
  int exit_code = kExitSuccess;
  nlohmann::json report;
};

CommandResult cmd_check(const RunConfig& c, const std::optional<std::filesystem::path>& out);
CommandResult cmd_groundstate(const RunConfig& c, const std::optional<std::filesystem::path>& out);
CommandResult cmd_solve(const RunConfig& c, const std::optional<std::filesystem::path>& out);
CommandResult cmd_sweep(const RunConfig& c, const std::optional<std::filesystem::path>& out, int workers);

nlohmann::json to_json(const SweepResult& r, int dim);

}  // namespace nnls
