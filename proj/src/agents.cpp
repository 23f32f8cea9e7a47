#include "dragonchess/agents.hpp"

#include <cstdlib>

namespace dragonchess {

using json = nlohmann::json;

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("DRAGONFISH_DATA"); env && *env) return env;
  return DRAGONCHESS_DEFAULT_DATA_DIR;
}

Theta preset_theta(const std::string& preset, const std::filesystem::path& data_dir) {
  if (preset == "identity") return Theta::identity();
  if (preset == "gygax") return load_piece_values(data_dir / "gygax_weights.txt");
  if (preset == "jackman") return load_piece_values(data_dir / "jackman_weights.txt");
  throw ParseError("unknown preset '" + preset + "'");
}

AgentConfig agent_from_json(const json& j, const std::filesystem::path& data_dir, const std::filesystem::path& base_dir) {
  try {
    if (!j.is_object()) throw ParseError("agent must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      static const char* known[] = {"kind", "name", "seed", "preset", "theta", "theta_file", "depth", "time_ms"};
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
        throw ParseError("unknown agent field '" + key + "'");
      }
    }
    const std::string kind = j.at("kind").get<std::string>();
    AgentConfig a;
    if (kind == "random") {
      a.kind = AgentKind::Random;
      a.name = "random";
    } else if (kind == "minimax") {
      a.kind = AgentKind::Minimax;
      const int sources = j.contains("preset") + j.contains("theta") + j.contains("theta_file");
      if (sources > 1) throw ParseError("give at most one of preset, theta, theta_file");
      a.name = "minimax";
      if (j.contains("preset")) {
        const auto preset = j.at("preset").get<std::string>();
        a.theta = preset_theta(preset, data_dir);
        a.name = preset;
      } else if (j.contains("theta")) {
        const auto w = j.at("theta").get<std::vector<double>>();
        if (w.size() != kThetaSize) throw ParseError("theta needs 25 numbers");
        std::copy(w.begin(), w.end(), a.theta.w.begin());
      } else if (j.contains("theta_file")) {
        std::filesystem::path p = j.at("theta_file").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        a.theta = load_theta(p);
        a.name = p.stem().string();
      }
      a.max_depth = 2;
      if (j.contains("time_ms")) a.max_depth.reset();
      if (j.contains("depth")) a.max_depth = j.at("depth").get<int>();
    } else {
      throw ParseError("unknown agent kind '" + kind + "'");
    }
    if (j.contains("name")) a.name = j.at("name").get<std::string>();
    if (j.contains("seed")) a.rng_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("time_ms")) a.time_budget_ms = j.at("time_ms").get<int>();
    try {
      validate(a);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    return a;
  } catch (const json::exception& e) {
    throw ParseError(std::string("agent: ") + e.what());
  }
}

json agent_to_json(const AgentConfig& a) {
  json j = {{"name", a.name}, {"seed", a.rng_seed}};
  if (a.kind == AgentKind::Random) {
    j["kind"] = "random";
    return j;
  }
  j["kind"] = "minimax";
  j["theta"] = std::vector<double>(a.theta.w.begin(), a.theta.w.end());
  j["time_ms"] = a.time_budget_ms;
  if (a.max_depth) j["depth"] = *a.max_depth;
  return j;
}

}  // namespace dragonchess
