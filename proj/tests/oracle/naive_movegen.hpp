#pragma once

// Test-only reference move generator. It shares no code with the ray tables:
// every (from, to) pair is classified directly from coordinate deltas.

#include <cstdint>
#include <optional>
#include <vector>

#include "dragonchess/position.hpp"

namespace dragonchess::oracle {

// Kind of move the piece on `from` may make to `to` (ignoring King safety),
// or nullopt when the pair is not a pseudo-legal move.
std::optional<MoveKind> classify(const Position& p, int from, int to);

// Whether the piece on `from` could capture on `to` if an enemy stood there.
bool can_capture_geometry(const Position& p, int from, int to);

bool naive_attacked(const Position& p, int square, Color by);

std::vector<Move> naive_legal_moves(const Position& p);

std::uint64_t naive_perft(const Position& p, int depth);

}  // namespace dragonchess::oracle
