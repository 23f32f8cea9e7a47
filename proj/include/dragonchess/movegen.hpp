#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dragonchess/position.hpp"

namespace dragonchess {

struct MoveList {
  std::vector<Move> moves;
  Color generated_for = Color::Gold;

  std::size_t size() const { return moves.size(); }
  bool empty() const { return moves.empty(); }
  auto begin() const { return moves.begin(); }
  auto end() const { return moves.end(); }
};

enum class GameResult { Ongoing, GoldWins, ScarletWins, Draw };

inline constexpr int kQuietPlyCap = 100;
inline constexpr int kTotalPlyCap = 600;

std::string_view result_name(GameResult result);

// A Ground piece with an enemy Basilisk directly beneath it. Throws
// std::domain_error for an empty square.
bool is_frozen(const Position& position, const Square& square);
bool is_frozen_at(const Position& position, int index);

// True iff some unfrozen piece of `by` has a capture vector reaching `square`
// (remote and inter-level captures included).
bool attacks(const Position& position, const Square& square, Color by);
bool attacks_index(const Position& position, int index, Color by);

bool in_check(const Position& position, Color color);

// Moves of `color`'s pieces ignoring whose turn it is and King safety.
// Appends to `out`; unsorted.
void generate_pseudo_legal(const Position& position, Color color, std::vector<Move>& out);
// Number of pseudo-legal moves of the piece standing on `index` (0 if frozen).
int pseudo_legal_count(const Position& position, int index);

// All legal moves for the side to move, sorted by (from, to, kind).
MoveList legal_moves(const Position& position);
// Hot-path variant: fills `out` (sorted). `position` is restored on return.
void generate_legal(Position& position, std::vector<Move>& out);

// Legal moves of the piece on `index` for its owner, as if it were that
// side's turn.
int legal_move_count_for_piece(const Position& position, int index);

GameResult terminal_state(const Position& position);

std::uint64_t perft(const Position& position, int depth);

// Applies `move` only if it appears in legal_moves(position); otherwise
// throws ContractViolation.
Position apply_legal_move(const Position& position, const Move& move);

// Text notation "<L><file><rank>-<L><file><rank>[x][=H]|[r]" with Sky = 1.
std::string move_to_text(const Move& move);

struct MoveText {
  int from = 0;
  int to = 0;
  bool capture = false;
  bool promotion = false;
  bool remote = false;
};

// Throws ParseError on malformed text.
MoveText parse_move_text(std::string_view text);

// Resolves notation against the position's legal moves. Throws ParseError on
// malformed text and ContractViolation when no legal move matches.
Move resolve_move(const Position& position, std::string_view text);

std::string square_name(int index);
int parse_square(std::string_view text);

}  // namespace dragonchess
