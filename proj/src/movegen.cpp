#include "dragonchess/movegen.hpp"

#include <algorithm>

#include "dragonchess/rules.hpp"

namespace dragonchess {

namespace {

bool enemy_of(PieceCode target, Color mover) { return target != 0 && color_of(target) != mover; }

void emit(const Position& p, int from, int to, PieceCode mover, MoveKind kind, std::vector<Move>& out) {
  Move m;
  m.from = static_cast<std::int16_t>(from);
  m.to = static_cast<std::int16_t>(to);
  m.kind = kind;
  m.captured = p.cells[to];
  m.halfmove_before = static_cast<std::int16_t>(p.halfmove_clock);
  if (kind == MoveKind::Normal && kind_of(mover) == Kind::Warrior && rank_of(to) == promotion_rank(color_of(mover))) {
    m.kind = MoveKind::Promotion;
    m.promoted_to = make_piece(Kind::Hero, color_of(mover));
  }
  out.push_back(m);
}

// Visits every pseudo-legal move of the piece on `from`.
template <typename Fn>
void for_each_piece_move(const Position& p, int from, Fn&& fn) {
  const PieceCode mover = p.cells[from];
  const Color color = color_of(mover);
  const auto& table = RayTable::instance();
  const std::int16_t* sq = table.square_data();
  for (const Ray& ray : table.rays(mover, from)) {
    for (std::uint8_t i = 0; i < ray.length; ++i) {
      const int to = sq[ray.begin + i];
      const PieceCode target = p.cells[to];
      bool stop = target != 0;
      switch (ray.mode) {
        case RayMode::Move:
          if (target == 0) fn(to, MoveKind::Normal);
          break;
        case RayMode::Capture:
          if (enemy_of(target, color)) fn(to, MoveKind::Normal);
          break;
        case RayMode::MoveCapture:
          if (target == 0 || enemy_of(target, color)) fn(to, MoveKind::Normal);
          break;
        case RayMode::Remote:
          if (enemy_of(target, color)) fn(to, MoveKind::RemoteCapture);
          break;
      }
      if (stop) break;
    }
  }
}

}  // namespace

std::string_view result_name(GameResult result) {
  switch (result) {
    case GameResult::Ongoing: return "ongoing";
    case GameResult::GoldWins: return "gold";
    case GameResult::ScarletWins: return "scarlet";
    case GameResult::Draw: return "draw";
  }
  return "?";
}

bool is_frozen_at(const Position& p, int index) {
  if (level_of(index) != kGround) return false;
  const PieceCode piece = p.cells[index];
  const PieceCode below = p.cells[index + kLevelSize];
  return piece != 0 && kind_of(below) == Kind::Basilisk && color_of(below) != color_of(piece);
}

bool is_frozen(const Position& position, const Square& square) {
  const int index = index_of(square);
  if (position.cells[index] == 0) throw std::domain_error("is_frozen: empty square");
  return is_frozen_at(position, index);
}

bool attacks_index(const Position& p, int index, Color by) {
  const auto& table = RayTable::instance();
  const std::int16_t* sq = table.square_data();
  for (const AttackSource& src : table.attackers_of(index)) {
    if (p.cells[src.from] != src.code || color_of(src.code) != by) continue;
    bool clear = true;
    for (std::uint8_t i = 0; i < src.position; ++i) {
      if (p.cells[sq[src.ray_begin + i]] != 0) {
        clear = false;
        break;
      }
    }
    if (clear && !is_frozen_at(p, src.from)) return true;
  }
  return false;
}

bool attacks(const Position& position, const Square& square, Color by) {
  return attacks_index(position, index_of(square), by);
}

bool in_check(const Position& position, Color color) {
  auto king = king_square(position, color);
  return king && attacks_index(position, *king, opposite(color));
}

void generate_pseudo_legal(const Position& p, Color color, std::vector<Move>& out) {
  for (int from = 0; from < kNumSquares; ++from) {
    const PieceCode mover = p.cells[from];
    if (mover == 0 || color_of(mover) != color || is_frozen_at(p, from)) continue;
    for_each_piece_move(p, from, [&](int to, MoveKind kind) { emit(p, from, to, mover, kind, out); });
  }
}

int pseudo_legal_count(const Position& p, int index) {
  if (p.cells[index] == 0 || is_frozen_at(p, index)) return 0;
  int n = 0;
  for_each_piece_move(p, index, [&](int, MoveKind) { ++n; });
  return n;
}

namespace {

// Keeps the moves of `candidates` that do not leave `color`'s King attacked.
void filter_king_safe(Position& p, Color color, std::vector<Move>& candidates) {
  auto king = king_square(p, color);
  if (!king) return;
  const Color enemy = opposite(color);
  const Color saved_side = p.side_to_move;
  auto keep = candidates.begin();
  for (auto it = candidates.begin(); it != candidates.end(); ++it) {
    const Move& m = *it;
    const int king_after = (m.kind != MoveKind::RemoteCapture && m.from == *king) ? m.to : *king;
    p.side_to_move = color;
    make_move(p, m);
    const bool safe = !attacks_index(p, king_after, enemy);
    unmake_move(p, m);
    if (safe) *keep++ = m;
  }
  p.side_to_move = saved_side;
  candidates.erase(keep, candidates.end());
}

}  // namespace

void generate_legal(Position& p, std::vector<Move>& out) {
  out.clear();
  generate_pseudo_legal(p, p.side_to_move, out);
  filter_king_safe(p, p.side_to_move, out);
  std::sort(out.begin(), out.end(), move_less);
}

MoveList legal_moves(const Position& position) {
  MoveList list;
  list.generated_for = position.side_to_move;
  Position scratch = position;
  generate_legal(scratch, list.moves);
  return list;
}

int legal_move_count_for_piece(const Position& position, int index) {
  const PieceCode piece = position.cells[index];
  if (piece == 0 || is_frozen_at(position, index)) return 0;
  Position scratch = position;
  scratch.side_to_move = color_of(piece);
  std::vector<Move> moves;
  for_each_piece_move(scratch, index, [&](int to, MoveKind kind) { emit(scratch, index, to, piece, kind, moves); });
  filter_king_safe(scratch, color_of(piece), moves);
  return static_cast<int>(moves.size());
}

GameResult terminal_state(const Position& position) {
  if (position.ply_count >= kTotalPlyCap || position.halfmove_clock >= kQuietPlyCap) return GameResult::Draw;
  const Color side = position.side_to_move;
  const GameResult loss = side == Color::Gold ? GameResult::ScarletWins : GameResult::GoldWins;
  if (!king_square(position, side)) return loss;
  if (!legal_moves(position).empty()) return GameResult::Ongoing;
  return in_check(position, side) ? loss : GameResult::Draw;
}

namespace {

std::uint64_t perft_rec(Position& p, int depth) {
  std::vector<Move> moves;
  generate_legal(p, moves);
  if (depth == 1) return moves.size();
  std::uint64_t nodes = 0;
  for (const Move& m : moves) {
    make_move(p, m);
    nodes += perft_rec(p, depth - 1);
    unmake_move(p, m);
  }
  return nodes;
}

}  // namespace

std::uint64_t perft(const Position& position, int depth) {
  if (depth <= 0) return 1;
  Position scratch = position;
  return perft_rec(scratch, depth);
}

Position apply_legal_move(const Position& position, const Move& move) {
  const auto list = legal_moves(position);
  if (std::find(list.begin(), list.end(), move) == list.end()) {
    throw ContractViolation("illegal move " + move_to_text(move));
  }
  return apply_move(position, move);
}

std::string square_name(int index) {
  std::string s;
  s += static_cast<char>('1' + level_of(index));
  s += static_cast<char>('a' + file_of(index));
  s += static_cast<char>('1' + rank_of(index));
  return s;
}

int parse_square(std::string_view text) {
  if (text.size() != 3) throw ParseError("bad square '" + std::string(text) + "'");
  const int level = text[0] - '1';
  const int file = text[1] - 'a';
  const int rank = text[2] - '1';
  if (level < 0 || level >= kLevels || file < 0 || file >= kFiles || rank < 0 || rank >= kRanks) {
    throw ParseError("bad square '" + std::string(text) + "'");
  }
  return make_index(level, rank, file);
}

std::string move_to_text(const Move& move) {
  std::string s = square_name(move.from) + "-" + square_name(move.to);
  if (move.kind == MoveKind::RemoteCapture) return s + "r";
  if (move.captured != 0) s += "x";
  if (move.kind == MoveKind::Promotion) s += "=H";
  return s;
}

MoveText parse_move_text(std::string_view text) {
  if (text.size() < 7 || text[3] != '-') throw ParseError("bad move '" + std::string(text) + "'");
  MoveText mt;
  mt.from = parse_square(text.substr(0, 3));
  mt.to = parse_square(text.substr(4, 3));
  std::string_view suffix = text.substr(7);
  if (suffix == "r") {
    mt.remote = true;
    mt.capture = true;
  } else if (suffix == "x") {
    mt.capture = true;
  } else if (suffix == "=H") {
    mt.promotion = true;
  } else if (suffix == "x=H") {
    mt.capture = true;
    mt.promotion = true;
  } else if (!suffix.empty()) {
    throw ParseError("bad move suffix '" + std::string(suffix) + "'");
  }
  return mt;
}

Move resolve_move(const Position& position, std::string_view text) {
  const MoveText mt = parse_move_text(text);
  for (const Move& m : legal_moves(position)) {
    if (m.from != mt.from || m.to != mt.to) continue;
    if ((m.kind == MoveKind::RemoteCapture) != mt.remote) continue;
    if ((m.kind == MoveKind::Promotion) != mt.promotion) continue;
    if (mt.capture && !m.is_capture()) continue;
    return m;
  }
  throw ContractViolation("illegal move " + std::string(text));
}

}  // namespace dragonchess
