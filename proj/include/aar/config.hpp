#pragma once

#include "aar/sim.hpp"

#include <optional>
#include <string>

namespace aar {

// Shipped receiver surrogate, identical to configs/plant_default.json.
PlantModel default_plant();

// Checks dimensions, limits, stabilizability and the oscillatory short-period / Dutch-roll modes.
void validate_plant(const PlantModel& plant, const std::string& origin = "plant");

PlantModel parse_plant(const std::string& text, const std::string& origin = "plant");
// True for a JSON object carrying plant matrices rather than a scenario.
bool is_plant_document(const std::string& text);
PlantModel load_plant(const std::string& path);

// Relative plant paths resolve against base_dir.
ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir = ".",
                              const std::string& origin = "scenario");
ScenarioConfig load_scenario(const std::string& path);

struct CareProblem {
    Mat A, B, Q, R;
};

// Files with a top-level "care" object describe a bare Riccati problem.
std::optional<CareProblem> parse_care_problem(const std::string& text, const std::string& origin = "config");

std::string read_text_file(const std::string& path);

TurbulenceLevel parse_turbulence_level(const std::string& s);
const char* turbulence_level_name(TurbulenceLevel l);

}  // namespace aar
