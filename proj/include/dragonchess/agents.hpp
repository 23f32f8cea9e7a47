#pragma once

#include <filesystem>
#include <json.hpp>

#include "dragonchess/search.hpp"

namespace dragonchess {

// Directory holding psqt.txt, identity_theta.txt and the weight presets.
// DRAGONFISH_DATA overrides the build-time default.
std::filesystem::path default_data_dir();

// Agent description used by entrant files and the service:
//   {"kind": "random", "seed": 3}
//   {"kind": "minimax", "preset": "identity" | "gygax" | "jackman",
//    "depth": 2, "time_ms": 3000, "name": "..."}
//   {"kind": "minimax", "theta_file": "best.theta"} or {"theta": [25 numbers]}
// Relative theta_file paths resolve against `base_dir`. Throws ParseError on
// malformed descriptions.
AgentConfig agent_from_json(const nlohmann::json& j, const std::filesystem::path& data_dir,
                            const std::filesystem::path& base_dir = {});
nlohmann::json agent_to_json(const AgentConfig& agent);

Theta preset_theta(const std::string& preset, const std::filesystem::path& data_dir);

}  // namespace dragonchess
