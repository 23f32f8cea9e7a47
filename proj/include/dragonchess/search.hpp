#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dragonchess/eval.hpp"
#include "dragonchess/movegen.hpp"

namespace dragonchess {

enum class AgentKind { Random, Minimax };

struct AgentConfig {
  std::string name = "agent";
  AgentKind kind = AgentKind::Minimax;
  Theta theta = Theta::identity();
  int time_budget_ms = 3000;
  // When set the search stops at this depth and never reads the clock
  // (depth-cap mode, deterministic). Otherwise it deepens until the budget
  // runs out (wall-clock mode).
  std::optional<int> max_depth;
  std::uint64_t rng_seed = 0;

  bool depth_capped() const { return max_depth.has_value(); }
};

// Throws std::invalid_argument for a non-positive budget or depth.
void validate(const AgentConfig& config);

AgentConfig random_agent(std::string name, std::uint64_t seed);
AgentConfig minimax_agent(std::string name, const Theta& theta, int depth);

inline constexpr double kMateScore = 1e15;

bool is_mate_score(double value);

struct SearchResult {
  Move move;
  double value = 0.0;  // from the side to move's point of view
  int depth = 0;       // deepest fully searched depth (0 if depth 1 was cut short)
  std::uint64_t nodes = 0;
};

// Iterative-deepening alpha-beta over heuristic_total. Ties at the root go to
// the smallest (from, to). Throws std::domain_error on a terminal position.
SearchResult search(const Position& position, const AgentConfig& config);

Move best_move(const Position& position, const AgentConfig& config);

// splitmix64 finaliser; used to derive independent per-game and per-ply seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

struct GameOptions {
  // Plies at the start of the game played uniformly at random (seeded from the
  // game seed) so deterministic agents do not replay a single game.
  int random_opening_plies = 0;
};

struct GameRecord {
  std::string gold;
  std::string scarlet;
  std::uint64_t seed = 0;
  bool depth_capped = true;
  std::string gold_budget;
  std::string scarlet_budget;
  int random_opening_plies = 0;
  GameResult result = GameResult::Ongoing;
  std::optional<Color> forfeit;
  // DPN of a non-standard start position (interactive sessions only).
  std::optional<std::string> start;
  std::vector<Move> moves;

  int plies() const { return static_cast<int>(moves.size()); }
  // 1, 0.5 or 0 from Gold's side.
  double gold_score() const;
};

GameRecord play_game(const AgentConfig& gold, const AgentConfig& scarlet, std::uint64_t seed,
                     const GameOptions& options = {});

std::string game_record_to_text(const GameRecord& record);
// Parses and replays the move list; throws ParseError on malformed input or
// an illegal move.
GameRecord game_record_from_text(std::string_view text);
void save_game_record(const GameRecord& record, const std::filesystem::path& path);

}  // namespace dragonchess
