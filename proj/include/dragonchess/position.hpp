#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "dragonchess/types.hpp"

namespace dragonchess {

enum class MoveKind : std::uint8_t { Normal = 0, RemoteCapture = 1, Promotion = 2 };

struct Move {
  std::int16_t from = 0;
  std::int16_t to = 0;
  MoveKind kind = MoveKind::Normal;
  PieceCode captured = 0;
  PieceCode promoted_to = 0;
  // Draw clock of the position the move was generated for; lets undo restore it.
  std::int16_t halfmove_before = 0;

  bool is_capture() const { return captured != 0; }

  friend bool operator==(const Move&, const Move&) = default;
};

// Same action on the board (ignores bookkeeping such as halfmove_before).
bool same_action(const Move& a, const Move& b);

// Deterministic move order: (from, to, kind).
bool move_less(const Move& a, const Move& b);

struct Position {
  std::array<PieceCode, kNumSquares> cells{};
  Color side_to_move = Color::Gold;
  int ply_count = 0;
  // Plies since the last capture or Warrior move.
  int halfmove_clock = 0;

  PieceCode at(int index) const { return cells[static_cast<std::size_t>(index)]; }
  PieceCode at(const Square& s) const { return at(index_of(s)); }
  void set(const Square& s, PieceCode code) { cells[static_cast<std::size_t>(index_of(s))] = code; }

  friend bool operator==(const Position&, const Position&) = default;
};

Position initial_position();
Position empty_position(Color side_to_move = Color::Gold);

// Square of the given side's King, if present.
std::optional<int> king_square(const Position& position, Color color);

int piece_count(const Position& position, Color color);

// In-place mutation used on the search hot path. `unmake_move` must receive
// the move most recently passed to `make_move`.
void make_move(Position& position, const Move& move);
void unmake_move(Position& position, const Move& move);

// Value-semantics wrappers; they validate the move's structure against the
// position and throw ContractViolation on mismatch.
Position apply_move(const Position& position, const Move& move);
Position undo_move(const Position& position, const Move& move);

int mirror_square(int index);
Move mirror_move(const Move& move);
Position mirror(const Position& position);

// DPN text: 3 level blocks ('|') of 8 rank rows ('/', rank 0 first) of 12
// comma-separated signed codes, then side-to-move (g|s), ply count and
// halfmove clock.
std::string to_dpn(const Position& position);
Position from_dpn(std::string_view text);

}  // namespace dragonchess
