#pragma once

// Strict JSON reader/writer for scenario files. Keys are the lower_snake_case
// field names of ScenarioConfig; unknown keys and type mismatches are reported
// as violations rather than skipped.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrnet/model.hpp"

namespace qrnet {

struct ParsedScenario {
    std::optional<ScenarioConfig> config;  // absent when any violation exists
    std::vector<Violation> violations;

    bool ok() const { return config.has_value(); }
};

// Schema check followed by validate_scenario.
ParsedScenario parse_scenario(const nlohmann::json& doc);
ParsedScenario parse_scenario_text(const std::string& text);
ParsedScenario load_scenario_file(const std::filesystem::path& path);

nlohmann::json to_json(const CryptoProfile& profile);
nlohmann::json to_json(const ScenarioConfig& config);
nlohmann::json to_json(const Violation& violation);
nlohmann::json to_json(const std::vector<Violation>& violations);

}  // namespace qrnet
