#pragma once

#include "infogather/harness/config.hpp"

#include <json.hpp>

namespace infogather::harness::detail {

nlohmann::ordered_json config_json(const ExperimentConfig& cfg);

}  // namespace infogather::harness::detail
