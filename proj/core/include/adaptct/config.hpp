#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adaptct/workflow.hpp"

namespace adaptct {

/// Parse a config document, filling every unset field with its default.
/// Accepts either a plain config or a run manifest (whose "config" section
/// is then used).  Throws ConfigError with a line-numbered message on parse
/// failure and a descriptive message on validation failure.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Fully resolved config (all defaults materialized).
nlohmann::json config_to_json(const ExperimentConfig& config);

ExperimentConfig load_config_file(const std::string& path);

/// Apply a dotted-path override "a.b.c=value"; the value is parsed as JSON
/// when possible and as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& key_value);

void validate_config(const ExperimentConfig& config);

} // namespace adaptct
