#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dragonchess {

inline constexpr int kLevels = 3;
inline constexpr int kRanks = 8;
inline constexpr int kFiles = 12;
inline constexpr int kLevelSize = kRanks * kFiles;  // 96
inline constexpr int kNumSquares = kLevels * kLevelSize;  // 288

inline constexpr int kSky = 0;
inline constexpr int kGround = 1;
inline constexpr int kUnderworld = 2;

enum class Color : std::int8_t { Gold = 0, Scarlet = 1 };

constexpr Color opposite(Color c) { return c == Color::Gold ? Color::Scarlet : Color::Gold; }
// +1 for Gold, -1 for Scarlet. Also the direction of "forward" in ranks.
constexpr int sign_of(Color c) { return c == Color::Gold ? 1 : -1; }

enum class Kind : std::int8_t {
  None = 0,
  Sylph = 1,
  Griffin = 2,
  Dragon = 3,
  Warrior = 4,
  Oliphant = 5,
  Unicorn = 6,
  Hero = 7,
  Thief = 8,
  Cleric = 9,
  Mage = 10,
  King = 11,
  Paladin = 12,
  Basilisk = 13,
  Dwarf = 14,
  Elemental = 15,
};

inline constexpr int kNumKinds = 15;

// Signed piece code: magnitude is the Kind, sign is the owner (positive Gold).
using PieceCode = std::int8_t;

constexpr Kind kind_of(PieceCode code) { return static_cast<Kind>(code < 0 ? -code : code); }
constexpr Color color_of(PieceCode code) { return code > 0 ? Color::Gold : Color::Scarlet; }
constexpr PieceCode make_piece(Kind kind, Color color) {
  return static_cast<PieceCode>(static_cast<int>(kind) * sign_of(color));
}
constexpr bool is_pawn_class(Kind k) { return k == Kind::Sylph || k == Kind::Warrior || k == Kind::Dwarf; }

std::string_view kind_name(Kind kind);

// Thrown when a caller breaks an operation's precondition (e.g. undoing a
// move that was never applied).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed text input (DPN, move notation, data files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Square {
  int level = 0;
  int rank = 0;
  int file = 0;

  friend constexpr auto operator<=>(const Square&, const Square&) = default;
};

constexpr bool in_range(const Square& s) {
  return s.level >= 0 && s.level < kLevels && s.rank >= 0 && s.rank < kRanks && s.file >= 0 &&
         s.file < kFiles;
}

// Flat index, level-major: level*96 + rank*12 + file. Throws std::domain_error
// when any field is out of range.
int index_of(const Square& square);
Square square_of(int index);

constexpr int level_of(int index) { return index / kLevelSize; }
constexpr int rank_of(int index) { return (index % kLevelSize) / kFiles; }
constexpr int file_of(int index) { return index % kFiles; }
constexpr int make_index(int level, int rank, int file) { return level * kLevelSize + rank * kFiles + file; }

}  // namespace dragonchess
