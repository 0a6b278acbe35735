#pragma once

#include "infogather/infocost/info_cost.hpp"
#include "infogather/infocost/task_cost.hpp"
#include "infogather/planner/cem.hpp"
#include "infogather/systems/registry.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace infogather::harness {

/// System selection. Noise entries are a single number (isotropic), one
/// number per dimension (diagonal), or a full row-major matrix.
struct SystemConfig {
  std::string id = "double_integrator";
  std::map<std::string, systems::ParamValue> params;
  std::optional<std::vector<double>> state_noise;
  std::optional<std::vector<double>> param_noise;
  std::optional<std::vector<double>> initial_state;
  std::optional<std::vector<double>> theta_true;
};

struct HeldoutConfig {
  int n_transitions = 500;
  int n_trajectories = 20;
  int traj_length = 30;
  std::string policy = "random";
  /// Held-out errors are also recorded every this many steps (0 = final only).
  int eval_every = 10;
};

struct ExperimentConfig {
  std::string experiment = "experiment";
  SystemConfig system;
  int episode_length = 100;
  planner::CemConfig planner;
  std::vector<double> lambda_values{0.0, 10.0, 50.0};
  std::vector<std::string> baselines{"random", "passive"};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  double prior_std = 0.5;
  HeldoutConfig heldout;
  infocost::InfoVariant info_variant = infocost::InfoVariant::kClosedFormMi;
  infocost::DirectedInfoConfig directed_info;
  infocost::TaskCostSpec task;
  std::string output_dir = "out";
  /// Write measured wall-clock times. Off by default so that reruns are
  /// byte-identical.
  bool record_timing = false;
};

/// One experimental condition: the random baseline or a planner with a given lambda.
struct Condition {
  bool random = false;
  double lambda = 0.0;

  /// "random" or "lambda=<value>".
  std::string label() const;
};

/// Random baseline first (if requested), then lambda values in listed order.
/// The passive baseline is lambda = 0 and is not duplicated.
std::vector<Condition> conditions(const ExperimentConfig& cfg);

/// Parses a YAML document. Dotted overrides such as "planner.population=512"
/// are applied to the document before it is interpreted; values are parsed as
/// YAML, so lists like "lambda_values=[0, 5]" work. Unknown keys, malformed
/// values and failed validation throw ConfigError.
ExperimentConfig parse_config(const std::string& yaml_text,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Checks cross-field constraints (including building the system once).
void validate(const ExperimentConfig& cfg);

/// Builds the configured system with all overrides resolved.
std::unique_ptr<systems::SystemModel> make_system(const SystemConfig& cfg);

/// Effective configuration as JSON text (used for the summary echo).
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace infogather::harness
