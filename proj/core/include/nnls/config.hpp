#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nnls/nonlinearity.hpp"
#include "nnls/potential.hpp"

namespace nnls {

struct GridConfig {
  int dim = 1;
  double half_extent = 2.5;
  int n = 501;
  bool operator==(const GridConfig&) const = default;
};

struct GroundStateConfig {
  double half_extent = 20.0;
  int n = 2001;
  int starts = 3;
  bool operator==(const GroundStateConfig&) const = default;
};

struct SolverConfig {
  double tol = 1e-7;
  int max_iters = 20000;
  double reduction_tol = 1e-10;
  double scale_tol = 1e-10;
  int max_scale_evaluations = 100;
  bool operator==(const SolverConfig&) const = default;
};

struct HypothesisConfig {
  int samples = 10000;
  double s_min = 0.01;
  double s_max = 2.0;
  bool operator==(const HypothesisConfig&) const = default;
};

struct RunConfig {
  GridConfig grid;
  PotentialSpec potential{PotentialKind::Paper, 1.0, {WellGeometry{}}};
  NonlinParams nonlinearity;
  std::vector<double> epsilon{0.4, 0.2, 0.1};
  std::vector<double> lambdas{1.0, 2.0, 4.0};
  GroundStateConfig groundstate;
  SolverConfig solver;
  HypothesisConfig hypotheses;
  std::string output = "out";
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Full echo with every field present; parse_config(config_to_json(c))
/// reproduces c exactly.
nlohmann::json config_to_json(const RunConfig& c);

enum class ConfigUse { Check, GroundState, Solve, Sweep };

/// Checks the parts a command relies on (parameter ranges, eps ordering,
/// lambda list, grid validity).
void validate_config(const RunConfig& c, ConfigUse use);

const char* to_string(PotentialKind k);
const char* to_string(RegionShape s);

}  // namespace nnls
