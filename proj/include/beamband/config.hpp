#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "beamband/scenarios.hpp"

namespace beamband {

struct ConfigIssue {
  std::string path;  // dotted field path, e.g. "env.block_prob"
  std::string message;
};

struct ConfigResult {
  ScenarioConfig config;
  // Every key the document set explicitly, with the value that was applied.
  nlohmann::json overrides = nlohmann::json::object();
  std::vector<ConfigIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
  std::string report() const;
};

// Starts from default_config(scenario) and applies the document on top.
// Unknown keys, wrong types and out-of-range values are collected as issues,
// all of them, not just the first.
ConfigResult validate_config(const nlohmann::json& document);

// Full resolved configuration as a document that validate_config accepts.
nlohmann::json config_to_json(const ScenarioConfig& config);

// JSON Schema (draft 2020-12) describing the accepted document.
nlohmann::json config_schema();

}  // namespace beamband
