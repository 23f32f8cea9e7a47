#include "dragonchess/position.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <tuple>
#include <vector>

namespace dragonchess {

namespace {

constexpr std::array<std::string_view, kNumKinds + 1> kKindNames = {
    "None",   "Sylph", "Griffin", "Dragon", "Warrior", "Oliphant", "Unicorn",  "Hero",
    "Thief",  "Cleric", "Mage",   "King",   "Paladin", "Basilisk", "Dwarf",    "Elemental"};

struct BackRankEntry {
  int level;
  int rank;
  int file;
  Kind kind;
};

// Gold half of the starting layout; Scarlet mirrors it on ranks 7 and 6.
constexpr BackRankEntry kGoldSetup[] = {
    {kSky, 0, 2, Kind::Griffin},      {kSky, 0, 5, Kind::Dragon},       {kSky, 0, 9, Kind::Griffin},
    {kSky, 1, 0, Kind::Sylph},        {kSky, 1, 2, Kind::Sylph},        {kSky, 1, 4, Kind::Sylph},
    {kSky, 1, 6, Kind::Sylph},        {kSky, 1, 8, Kind::Sylph},        {kSky, 1, 10, Kind::Sylph},
    {kGround, 0, 0, Kind::Oliphant},  {kGround, 0, 1, Kind::Unicorn},   {kGround, 0, 2, Kind::Hero},
    {kGround, 0, 3, Kind::Thief},     {kGround, 0, 4, Kind::Cleric},    {kGround, 0, 5, Kind::Mage},
    {kGround, 0, 6, Kind::King},      {kGround, 0, 7, Kind::Paladin},   {kGround, 0, 8, Kind::Thief},
    {kGround, 0, 9, Kind::Hero},      {kGround, 0, 10, Kind::Unicorn},  {kGround, 0, 11, Kind::Oliphant},
    {kUnderworld, 0, 2, Kind::Basilisk}, {kUnderworld, 0, 5, Kind::Elemental},
    {kUnderworld, 0, 9, Kind::Basilisk}, {kUnderworld, 1, 1, Kind::Dwarf},
    {kUnderworld, 1, 3, Kind::Dwarf},    {kUnderworld, 1, 5, Kind::Dwarf},
    {kUnderworld, 1, 7, Kind::Dwarf},    {kUnderworld, 1, 9, Kind::Dwarf},
    {kUnderworld, 1, 11, Kind::Dwarf},
};

void check_structure(const Position& p, const Move& m) {
  if (m.from < 0 || m.from >= kNumSquares || m.to < 0 || m.to >= kNumSquares) {
    throw ContractViolation("move square out of range");
  }
  const PieceCode mover = p.at(m.from);
  if (mover == 0 || color_of(mover) != p.side_to_move) {
    throw ContractViolation("move origin does not hold a piece of the side to move");
  }
  if (p.at(m.to) != m.captured) {
    throw ContractViolation("move capture field does not match the target square");
  }
  if (m.captured != 0 && color_of(m.captured) == p.side_to_move) {
    throw ContractViolation("move captures an own piece");
  }
  switch (m.kind) {
    case MoveKind::RemoteCapture:
      if (m.captured == 0 || kind_of(mover) != Kind::Dragon) {
        throw ContractViolation("remote capture requires a Dragon and a target");
      }
      break;
    case MoveKind::Promotion:
      if (kind_of(mover) != Kind::Warrior || m.promoted_to != make_piece(Kind::Hero, p.side_to_move)) {
        throw ContractViolation("promotion requires a Warrior becoming a Hero");
      }
      break;
    case MoveKind::Normal:
      if (m.from == m.to) throw ContractViolation("null move");
      break;
  }
}

}  // namespace

std::string_view kind_name(Kind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

int index_of(const Square& square) {
  if (!in_range(square)) throw std::domain_error("square field out of range");
  return make_index(square.level, square.rank, square.file);
}

Square square_of(int index) {
  if (index < 0 || index >= kNumSquares) throw std::domain_error("square index out of range");
  return {level_of(index), rank_of(index), file_of(index)};
}

bool same_action(const Move& a, const Move& b) {
  return a.from == b.from && a.to == b.to && a.kind == b.kind && a.captured == b.captured &&
         a.promoted_to == b.promoted_to;
}

bool move_less(const Move& a, const Move& b) {
  return std::tie(a.from, a.to, a.kind) < std::tie(b.from, b.to, b.kind);
}

Position empty_position(Color side_to_move) {
  Position p;
  p.side_to_move = side_to_move;
  return p;
}

Position initial_position() {
  Position p;
  for (const auto& e : kGoldSetup) {
    p.cells[make_index(e.level, e.rank, e.file)] = make_piece(e.kind, Color::Gold);
    p.cells[make_index(e.level, kRanks - 1 - e.rank, e.file)] = make_piece(e.kind, Color::Scarlet);
  }
  for (int file = 0; file < kFiles; ++file) {
    p.cells[make_index(kGround, 1, file)] = make_piece(Kind::Warrior, Color::Gold);
    p.cells[make_index(kGround, kRanks - 2, file)] = make_piece(Kind::Warrior, Color::Scarlet);
  }
  return p;
}

std::optional<int> king_square(const Position& position, Color color) {
  const PieceCode king = make_piece(Kind::King, color);
  auto it = std::find(position.cells.begin(), position.cells.end(), king);
  if (it == position.cells.end()) return std::nullopt;
  return static_cast<int>(it - position.cells.begin());
}

int piece_count(const Position& position, Color color) {
  return static_cast<int>(std::count_if(position.cells.begin(), position.cells.end(), [color](PieceCode c) {
    return c != 0 && color_of(c) == color;
  }));
}

void make_move(Position& p, const Move& m) {
  const PieceCode mover = p.cells[m.from];
  const bool resets_clock = m.captured != 0 || kind_of(mover) == Kind::Warrior;
  if (m.kind == MoveKind::RemoteCapture) {
    p.cells[m.to] = 0;
  } else {
    p.cells[m.to] = m.kind == MoveKind::Promotion ? m.promoted_to : mover;
    p.cells[m.from] = 0;
  }
  p.halfmove_clock = resets_clock ? 0 : p.halfmove_clock + 1;
  p.ply_count += 1;
  p.side_to_move = opposite(p.side_to_move);
}

void unmake_move(Position& p, const Move& m) {
  p.side_to_move = opposite(p.side_to_move);
  p.ply_count -= 1;
  p.halfmove_clock = m.halfmove_before;
  if (m.kind == MoveKind::RemoteCapture) {
    p.cells[m.to] = m.captured;
    return;
  }
  PieceCode moved = p.cells[m.to];
  if (m.kind == MoveKind::Promotion) moved = make_piece(Kind::Warrior, p.side_to_move);
  p.cells[m.from] = moved;
  p.cells[m.to] = m.captured;
}

Position apply_move(const Position& position, const Move& move) {
  check_structure(position, move);
  if (move.halfmove_before != position.halfmove_clock) {
    throw ContractViolation("move was generated for a different position");
  }
  Position next = position;
  make_move(next, move);
  return next;
}

Position undo_move(const Position& position, const Move& m) {
  if (m.from < 0 || m.from >= kNumSquares || m.to < 0 || m.to >= kNumSquares || position.ply_count == 0) {
    throw ContractViolation("cannot undo move");
  }
  const Color mover_side = opposite(position.side_to_move);
  bool ok = true;
  if (m.kind == MoveKind::RemoteCapture) {
    const PieceCode dragon = position.at(m.from);
    ok = position.at(m.to) == 0 && dragon == make_piece(Kind::Dragon, mover_side) && m.captured != 0;
  } else {
    const PieceCode landed = position.at(m.to);
    ok = position.at(m.from) == 0 && landed != 0 && color_of(landed) == mover_side;
    if (m.kind == MoveKind::Promotion) ok = ok && landed == m.promoted_to;
  }
  if (!ok) throw ContractViolation("move does not match the last applied move");
  Position prev = position;
  unmake_move(prev, m);
  return prev;
}

int mirror_square(int index) {
  return make_index(level_of(index), kRanks - 1 - rank_of(index), file_of(index));
}

Move mirror_move(const Move& move) {
  Move m = move;
  m.from = static_cast<std::int16_t>(mirror_square(move.from));
  m.to = static_cast<std::int16_t>(mirror_square(move.to));
  m.captured = static_cast<PieceCode>(-move.captured);
  m.promoted_to = static_cast<PieceCode>(-move.promoted_to);
  return m;
}

Position mirror(const Position& position) {
  Position m = position;
  for (int i = 0; i < kNumSquares; ++i) {
    m.cells[mirror_square(i)] = static_cast<PieceCode>(-position.cells[i]);
  }
  m.side_to_move = opposite(position.side_to_move);
  return m;
}

std::string to_dpn(const Position& position) {
  std::string out;
  out.reserve(900);
  for (int level = 0; level < kLevels; ++level) {
    if (level > 0) out += '|';
    for (int rank = 0; rank < kRanks; ++rank) {
      if (rank > 0) out += '/';
      for (int file = 0; file < kFiles; ++file) {
        if (file > 0) out += ',';
        out += std::to_string(position.cells[make_index(level, rank, file)]);
      }
    }
  }
  out += position.side_to_move == Color::Gold ? " g " : " s ";
  out += std::to_string(position.ply_count);
  out += ' ';
  out += std::to_string(position.halfmove_clock);
  return out;
}

namespace {

int parse_int(std::string_view field, const char* what) {
  int value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(std::string("DPN: bad ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Position from_dpn(std::string_view text) {
  auto tokens = split(text, ' ');
  if (tokens.size() != 3 && tokens.size() != 4) throw ParseError("DPN: expected board, side, ply [, clock]");
  Position p;
  auto levels = split(tokens[0], '|');
  if (levels.size() != kLevels) throw ParseError("DPN: expected 3 level blocks");
  for (int level = 0; level < kLevels; ++level) {
    auto rows = split(levels[level], '/');
    if (rows.size() != kRanks) throw ParseError("DPN: expected 8 rows per level");
    for (int rank = 0; rank < kRanks; ++rank) {
      auto fields = split(rows[rank], ',');
      if (fields.size() != kFiles) throw ParseError("DPN: expected 12 fields per row");
      for (int file = 0; file < kFiles; ++file) {
        const int code = parse_int(fields[file], "piece code");
        if (code < -kNumKinds || code > kNumKinds) throw ParseError("DPN: piece code out of range");
        p.cells[make_index(level, rank, file)] = static_cast<PieceCode>(code);
      }
    }
  }
  if (tokens[1] == "g") {
    p.side_to_move = Color::Gold;
  } else if (tokens[1] == "s") {
    p.side_to_move = Color::Scarlet;
  } else {
    throw ParseError("DPN: side to move must be g or s");
  }
  p.ply_count = parse_int(tokens[2], "ply count");
  p.halfmove_clock = tokens.size() == 4 ? parse_int(tokens[3], "halfmove clock") : 0;
  if (p.ply_count < 0 || p.halfmove_clock < 0) throw ParseError("DPN: negative counter");
  return p;
}

}  // namespace dragonchess
