#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dragonchess/search.hpp"

namespace dragonchess {

inline constexpr double kEloK = 32.0;
inline constexpr double kInitialElo = 1500.0;

// Standard Elo update for one game. The rating change is rounded to a
// multiple of 2^-20 so that every update is exactly zero-sum in binary
// floating point.
std::pair<double, double> elo_update(double ra, double rb, double result_for_a, double k = kEloK);

struct Standing {
  std::string name;
  int wins = 0;
  int losses = 0;
  int draws = 0;
  int byes = 0;
  double score = 0.0;  // win 1, draw 0.5, bye 1
  double elo = kInitialElo;
  int gold_games = 0;
  int scarlet_games = 0;
  std::vector<int> opponents;  // entrant ids, in round order

  int games() const { return wins + losses + draws; }
};

struct Pairing {
  int gold = 0;
  int scarlet = 0;
};

struct RoundPairings {
  std::vector<Pairing> games;  // in board order
  std::optional<int> bye;
};

struct TournamentState {
  std::vector<Standing> standings;  // indexed by entrant id
  int round = 0;

  static TournamentState start(const std::vector<std::string>& names);
};

// Entrant ids ordered by (score desc, Elo desc, id asc).
std::vector<int> ranking(const TournamentState& state);

// Swiss pairing for the next round. The bye (odd fields) goes to the lowest
// ranked entrant without one. Pairs are found top-down, each entrant taking the
// highest-ranked opponent it has not met that still leaves a complete pairing;
// rematches are allowed only when no rematch-free pairing exists. Colours go
// to whoever has played fewer Gold games. Throws std::domain_error for fewer
// than two entrants.
RoundPairings pair_round(const TournamentState& state);

struct GameOutcome {
  Pairing pairing;
  GameRecord record;
};

// Applies one round: scores first, then Elo updates in board order.
void apply_round(TournamentState& state, const RoundPairings& pairings, const std::vector<GameOutcome>& outcomes);

struct TournamentOptions {
  int rounds = 50;
  std::uint64_t seed = 1;
  int jobs = 1;
  int random_opening_plies = 2;
  std::function<void(int round, const std::vector<GameOutcome>&)> on_round;
};

struct TournamentResult {
  TournamentState state;
  std::vector<std::vector<GameOutcome>> rounds;
};

TournamentResult run_tournament(const std::vector<AgentConfig>& entrants, const TournamentOptions& options);

// Standings sorted by Elo (desc, then name). Plain form is tab-separated with
// a header row: agent, wins, losses, draws, elo. The pretty form aligns
// columns for reading.
std::string standings_table(const TournamentState& state, bool pretty = false);

}  // namespace dragonchess
