#pragma once

#include "decsum/topic_models.hpp"
#include "json.hpp"

namespace decsum::internal {

nlohmann::json model_config_to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

}  // namespace decsum::internal
