#pragma once

#include <random>
#include <vector>

#include "dragonchess/movegen.hpp"

namespace dragonchess::testing {

// Positions reached by uniformly random legal playouts from the start,
// restarting a fresh game whenever one ends.
inline std::vector<Position> random_positions(std::size_t count, std::uint64_t seed, int max_plies = 160) {
  std::mt19937_64 rng(seed);
  std::vector<Position> out;
  out.reserve(count);
  Position p = initial_position();
  int plies = 0;
  std::uniform_int_distribution<int> length(10, max_plies);
  int target = length(rng);
  while (out.size() < count) {
    auto moves = legal_moves(p);
    if (moves.empty() || plies >= target || terminal_state(p) != GameResult::Ongoing) {
      p = initial_position();
      plies = 0;
      target = length(rng);
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    p = apply_move(p, moves.moves[pick(rng)]);
    ++plies;
    out.push_back(p);
  }
  return out;
}

}  // namespace dragonchess::testing
