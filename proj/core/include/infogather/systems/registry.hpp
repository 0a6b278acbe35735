#pragma once

#include "infogather/systems/system_model.hpp"

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace infogather::systems {

using ParamValue = std::variant<double, std::vector<double>, std::string>;

/// Declarative system selection: registry id, named physical-parameter
/// overrides, and the shared noise/initial-condition overrides.
struct SystemSpec {
  std::string id;
  std::map<std::string, ParamValue> params;
  CommonOptions common;
};

struct SystemInfo {
  std::string id;
  std::string description;
  std::vector<std::string> param_names;  // accepted keys in SystemSpec::params
  Dims dims;
  std::vector<std::string> theta_layout;
};

/// Throws ConfigError on unknown ids or parameter names.
std::unique_ptr<SystemModel> make_system(const SystemSpec& spec);

std::vector<SystemInfo> list_systems();

}  // namespace infogather::systems
