#pragma once

// JSON form of scenarios ("caas.scenario/v1"). Missing fields take the
// in-memory defaults; unknown fields are rejected.

#include <filesystem>
#include <string>
#include <string_view>

#include "caas/simulation.hpp"
#include "json.hpp"

namespace caas {

inline constexpr std::string_view kScenarioSchema = "caas.scenario/v1";

// Parses JSON text, throwing ParseError with the line and column of the first
// syntax error. `source` names the input in messages.
nlohmann::json parse_json(std::string_view text, const std::string& source = "<input>");
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

nlohmann::json controller_to_json(ControllerKind kind, const ControllerConfig& cfg);
// Accepts "aimd" or {"variant": "aimd", ...overrides}; fields absent from
// the object keep their current values.
void controller_from_json(const nlohmann::json& j, ControllerKind& kind, ControllerConfig& cfg);

nlohmann::json estimator_to_json(const EstimatorConfig& cfg);
EstimatorConfig estimator_from_json(const nlohmann::json& j, EstimatorConfig base = {});

nlohmann::json scenario_to_json(const Scenario& s);
// Builds and validates; throws ConfigError naming the offending field.
Scenario scenario_from_json(const nlohmann::json& j);

std::string dump_scenario(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& s);

}  // namespace caas
