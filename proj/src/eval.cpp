#include "dragonchess/eval.hpp"

#include <bitset>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dragonchess/movegen.hpp"
#include "dragonchess/rules.hpp"

namespace dragonchess {

namespace {

constexpr std::array<std::string_view, kComponentCount> kComponentNames = {
    "material", "psqt",      "mobility", "king_safety", "threats",          "passed_pieces",
    "pawn_count", "imbalance", "space",    "activity_penalty", "dragon_center"};

// Indexed by Kind. King is handled separately.
constexpr std::array<double, kNumKinds + 1> kBaseline = {
    0,    // None
    100,  // Sylph
    320,  // Griffin
    900,  // Dragon
    100,  // Warrior
    500,  // Oliphant
    320,  // Unicorn
    500,  // Hero
    500,  // Thief
    330,  // Cleric
    330,  // Mage
    kKingValue,
    500,  // Paladin
    320,  // Basilisk
    100,  // Dwarf
    320,  // Elemental
};

constexpr std::array<std::string_view, kPsqtClasses> kPsqtNames = {"pawn", "knight", "bishop", "rook", "queen", "king"};

// Simplified-evaluation middlegame tables as usually printed: the far rank
// first, so row 7 is the owner's home rank.
constexpr int kPrinted[kPsqtClasses][64] = {
    {0,  0,  0,  0,   0,   0,  0,  0,  50, 50, 50,  50, 50, 50,  50, 50, 10, 10, 20, 30, 30, 20,
     10, 10, 5,  5,  10,  25,  25, 10, 5,  5,  0,  0,  0,   20, 20, 0,   0,  0,  5,  -5, -10, 0,
     0,  -10, -5, 5, 5,  10, 10, -20, -20, 10, 10, 5,  0,  0,  0,  0,  0,  0,  0,  0},
    {-50, -40, -30, -30, -30, -30, -40, -50, -40, -20, 0,   0,   0,   0,   -20, -40,
     -30, 0,   10,  15,  15,  10,  0,   -30, -30, 5,   15,  20,  20,  15,  5,   -30,
     -30, 0,   15,  20,  20,  15,  0,   -30, -30, 5,   10,  15,  15,  10,  5,   -30,
     -40, -20, 0,   5,   5,   0,   -20, -40, -50, -40, -30, -30, -30, -30, -40, -50},
    {-20, -10, -10, -10, -10, -10, -10, -20, -10, 0,   0,   0,   0,   0,   0,   -10,
     -10, 0,   5,   10,  10,  5,   0,   -10, -10, 5,   5,   10,  10,  5,   5,   -10,
     -10, 0,   10,  10,  10,  10,  0,   -10, -10, 10,  10,  10,  10,  10,  10,  -10,
     -10, 5,   0,   0,   0,   0,   5,   -10, -20, -10, -10, -10, -10, -10, -10, -20},
    {0,  0, 0, 0, 0, 0, 0, 0,  5,  10, 10, 10, 10, 10, 10, 5,  -5, 0, 0, 0, 0, 0,
     0,  -5, -5, 0, 0, 0, 0, 0, 0, -5, -5, 0, 0,  0,  0,  0,  0,  -5, -5, 0, 0, 0,
     0,  0, 0, -5, -5, 0, 0, 0, 0, 0,  0,  -5, 0,  0,  0,  5,  5,  0,  0,  0},
    {-20, -10, -10, -5, -5, -10, -10, -20, -10, 0,  0,  0,  0,  0,  0,   -10,
     -10, 0,   5,   5,  5,  5,   0,   -10, -5,  0,  5,  5,  5,  5,  0,   -5,
     0,   0,   5,   5,  5,  5,   0,   -5,  -10, 5,  5,  5,  5,  5,  0,   -10,
     -10, 0,   5,   0,  0,  0,   0,   -10, -20, -10, -10, -5, -5, -10, -10, -20},
    {-30, -40, -40, -50, -50, -40, -40, -30, -30, -40, -40, -50, -50, -40, -40, -30,
     -30, -40, -40, -50, -50, -40, -40, -30, -30, -40, -40, -50, -50, -40, -40, -30,
     -20, -30, -30, -40, -40, -30, -30, -20, -10, -20, -20, -20, -20, -20, -20, -10,
     20,  20,  0,   0,   0,   0,   20,  20,  20,  30,  10,  0,   0,   10,  30,  20},
};

PsqtTables build_default_psqt() {
  PsqtTables t;
  for (int c = 0; c < kPsqtClasses; ++c)
    for (int r = 0; r < 8; ++r)
      for (int f = 0; f < 8; ++f) t.values[c][r * 8 + f] = kPrinted[c][(7 - r) * 8 + f];
  return t;
}

constexpr Kind kPairKinds[] = {Kind::Griffin, Kind::Oliphant, Kind::Unicorn, Kind::Hero, Kind::Thief, Kind::Basilisk};

constexpr int kKingProximityPenalty = 8;
constexpr int kKingMobilityBonus = 4;
constexpr int kKingShelterBonus = 6;
constexpr double kThreatDivisor = 10.0;
constexpr int kPassedBonusPerRank = 10;
constexpr double kPawnRatioScale = 100.0;
constexpr int kPairBonus = 25;
constexpr int kMisplacedMagePenalty = 30;
constexpr int kImmobilePenalty = 10;
constexpr int kDragonCenterBonus = 20;

int side_index(Color c) { return c == Color::Gold ? 0 : 1; }

struct KindCounts {
  std::array<std::array<int, kNumKinds + 1>, 2> n{};
  int of(Color c, Kind k) const { return n[side_index(c)][static_cast<std::size_t>(k)]; }
};

KindCounts count_kinds(const Position& p) {
  KindCounts k;
  for (PieceCode c : p.cells) {
    if (c != 0) ++k.n[side_index(color_of(c))][static_cast<std::size_t>(kind_of(c))];
  }
  return k;
}

// One pass over all pieces: pseudo-legal move counts and same-level attack
// maps for both sides.
struct Scan {
  std::array<std::int16_t, kNumSquares> moves{};
  std::array<std::bitset<kNumSquares>, 2> attacked;
  std::array<int, 2> total_moves{};
};

Scan scan(const Position& p) {
  Scan s;
  const auto& table = RayTable::instance();
  const std::int16_t* sq = table.square_data();
  for (int from = 0; from < kNumSquares; ++from) {
    const PieceCode code = p.cells[from];
    if (code == 0 || is_frozen_at(p, from)) continue;
    const Color color = color_of(code);
    const int side = side_index(color);
    const int level = level_of(from);
    int count = 0;
    for (const Ray& ray : table.rays(code, from)) {
      for (std::uint8_t i = 0; i < ray.length; ++i) {
        const int to = sq[ray.begin + i];
        const PieceCode target = p.cells[to];
        const bool enemy = target != 0 && color_of(target) != color;
        const bool same_level = level_of(to) == level;
        switch (ray.mode) {
          case RayMode::Move:
            count += target == 0;
            break;
          case RayMode::Capture:
            count += enemy;
            if (same_level) s.attacked[side].set(to);
            break;
          case RayMode::MoveCapture:
            count += target == 0 || enemy;
            if (same_level) s.attacked[side].set(to);
            break;
          case RayMode::Remote:
            count += enemy;
            break;
        }
        if (target != 0) break;
      }
    }
    s.moves[from] = static_cast<std::int16_t>(count);
    s.total_moves[side] += count;
  }
  return s;
}

double material_impl(const KindCounts& k, const Theta& theta) {
  double total = 0.0;
  for (int i = 1; i <= kNumKinds; ++i) {
    const Kind kind = static_cast<Kind>(i);
    const int diff = k.of(Color::Gold, kind) - k.of(Color::Scarlet, kind);
    if (kind == Kind::King) {
      total += kKingValue * diff;
    } else {
      total += theta.piece_scale(kind) * kBaseline[i] * diff;
    }
  }
  return total;
}

double psqt_impl(const Position& p, const PsqtTables& tables) {
  int total = 0;
  for (int rank = 0; rank < kRanks; ++rank) {
    for (int file = 2; file <= 9; ++file) {
      const PieceCode code = p.cells[make_index(kGround, rank, file)];
      if (code == 0) continue;
      auto cls = psqt_class(kind_of(code));
      if (!cls) continue;
      const Color c = color_of(code);
      const int own_rank = c == Color::Gold ? rank : kRanks - 1 - rank;
      total += sign_of(c) * tables.lookup(*cls, own_rank, file - 2);
    }
  }
  return total;
}

double mobility_impl(const Scan& s) { return s.total_moves[0] - s.total_moves[1]; }

int king_danger(const Position& p, Color color) {
  auto king = king_square(p, color);
  if (!king) throw std::domain_error("king_safety: missing King");
  const int level = level_of(*king), rank = rank_of(*king), file = file_of(*king);
  int near_enemies = 0;
  for (int r = std::max(0, rank - 2); r <= std::min(kRanks - 1, rank + 2); ++r) {
    for (int f = std::max(0, file - 2); f <= std::min(kFiles - 1, file + 2); ++f) {
      const PieceCode c = p.cells[make_index(level, r, f)];
      if (c != 0 && color_of(c) != color) ++near_enemies;
    }
  }
  int shelter = 0;
  const int ahead = rank + sign_of(color);
  if (ahead >= 0 && ahead < kRanks) {
    for (int f = std::max(0, file - 1); f <= std::min(kFiles - 1, file + 1); ++f) {
      const PieceCode c = p.cells[make_index(level, ahead, f)];
      if (c != 0 && color_of(c) == color && is_pawn_class(kind_of(c))) ++shelter;
    }
  }
  const int escapes = legal_move_count_for_piece(p, *king);
  return kKingProximityPenalty * near_enemies - kKingMobilityBonus * escapes - kKingShelterBonus * shelter;
}

double king_safety_impl(const Position& p) { return king_danger(p, Color::Scarlet) - king_danger(p, Color::Gold); }

double threats_impl(const Position& p, const Scan& s) {
  double total = 0.0;
  for (int sq = 0; sq < kNumSquares; ++sq) {
    const PieceCode code = p.cells[sq];
    if (code == 0 || kind_of(code) == Kind::King) continue;
    const Color owner = color_of(code);
    if (s.attacked[side_index(opposite(owner))].test(sq)) {
      total -= sign_of(owner) * kBaseline[static_cast<std::size_t>(kind_of(code))] / kThreatDivisor;
    }
  }
  return total;
}

double passed_impl(const Position& p) {
  int total = 0;
  for (int sq = 0; sq < kNumSquares; ++sq) {
    const PieceCode code = p.cells[sq];
    if (code == 0 || !is_pawn_class(kind_of(code))) continue;
    const Color c = color_of(code);
    const int level = level_of(sq), rank = rank_of(sq), file = file_of(sq);
    bool passed = true;
    for (int r = rank + sign_of(c); passed && r >= 0 && r < kRanks; r += sign_of(c)) {
      for (int f = std::max(0, file - 1); f <= std::min(kFiles - 1, file + 1); ++f) {
        const PieceCode other = p.cells[make_index(level, r, f)];
        if (other != 0 && color_of(other) != c) {
          passed = false;
          break;
        }
      }
    }
    if (!passed) continue;
    const int start_rank = c == Color::Gold ? 1 : kRanks - 2;
    const int advanced = std::max(0, (rank - start_rank) * sign_of(c));
    total += sign_of(c) * kPassedBonusPerRank * advanced;
  }
  return total;
}

double pawn_count_impl(const KindCounts& k) {
  auto pawns = [&](Color c) {
    return k.of(c, Kind::Sylph) + k.of(c, Kind::Warrior) + k.of(c, Kind::Dwarf);
  };
  const int g = pawns(Color::Gold), s = pawns(Color::Scarlet);
  if (g + s == 0) return 0.0;
  return kPawnRatioScale * (g - s) / (g + s);
}

double imbalance_impl(const KindCounts& k) {
  int total = 0;
  for (Kind kind : kPairKinds) {
    const int g = k.of(Color::Gold, kind), s = k.of(Color::Scarlet, kind);
    if (g >= 2 && s < 2) total += kPairBonus;
    if (s >= 2 && g < 2) total -= kPairBonus;
  }
  return total;
}

double space_impl(const Position& p, const Scan& s) {
  int total = 0;
  for (int sq = 0; sq < kNumSquares; ++sq) {
    if (p.cells[sq] != 0) continue;
    total += s.attacked[0].test(sq);
    total -= s.attacked[1].test(sq);
  }
  return total;
}

double activity_impl(const Position& p, const Scan& s) {
  int total = 0;
  for (int sq = 0; sq < kNumSquares; ++sq) {
    const PieceCode code = p.cells[sq];
    if (code == 0) continue;
    int penalty = 0;
    if (kind_of(code) == Kind::Mage && level_of(sq) != kGround) penalty += kMisplacedMagePenalty;
    if (s.moves[sq] == 0) penalty += kImmobilePenalty;
    total -= sign_of(color_of(code)) * penalty;
  }
  return total;
}

double dragon_center_impl(const Position& p) {
  int total = 0;
  for (int rank = 2; rank <= 5; ++rank) {
    for (int file = 4; file <= 7; ++file) {
      const PieceCode code = p.cells[make_index(kSky, rank, file)];
      if (kind_of(code) == Kind::Dragon) total += sign_of(color_of(code)) * kDragonCenterBonus;
    }
  }
  return total;
}

}  // namespace

std::string_view component_name(Component c) { return kComponentNames[static_cast<std::size_t>(c)]; }

double baseline_value(Kind kind) { return kBaseline[static_cast<std::size_t>(kind)]; }

int piece_scale_index(Kind kind) {
  const int k = static_cast<int>(kind);
  if (k < 1 || k > kNumKinds || kind == Kind::King) throw std::domain_error("no piece scale for this kind");
  return k < static_cast<int>(Kind::King) ? k - 1 : k - 2;
}

Theta Theta::identity() {
  Theta t;
  t.w.fill(1.0);
  return t;
}

std::string theta_to_text(const Theta& theta) {
  std::string out;
  char buf[64];
  for (double v : theta.w) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

Theta theta_from_text(std::string_view text) {
  Theta t;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (n >= kThetaSize) throw ParseError("theta: more than 25 values");
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(line.substr(first), &used);
    } catch (const std::exception&) {
      throw ParseError("theta: bad value '" + line + "'");
    }
    if (line.find_first_not_of(" \t\r", first + used) != std::string::npos || !std::isfinite(v)) {
      throw ParseError("theta: bad value '" + line + "'");
    }
    t.w[static_cast<std::size_t>(n++)] = v;
  }
  if (n != kThetaSize) throw ParseError("theta: expected 25 values, got " + std::to_string(n));
  return t;
}

Theta load_theta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("theta: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return theta_from_text(ss.str());
}

void save_theta(const Theta& theta, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("theta: cannot write " + path.string());
  out << theta_to_text(theta);
}

Theta theta_from_piece_values(std::string_view text) {
  Theta t;
  std::array<bool, kNumKinds + 1> seen{};
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string name;
    if (!(fields >> name) || name[0] == '#') continue;
    int kind = 0;
    for (int k = 1; k <= kNumKinds; ++k)
      if (kind_name(static_cast<Kind>(k)) == name) kind = k;
    if (kind == 0 || kind == static_cast<int>(Kind::King)) throw ParseError("piece values: unknown kind '" + name + "'");
    double value = 0;
    std::string rest;
    if (!(fields >> value) || (fields >> rest) || !std::isfinite(value)) {
      throw ParseError("piece values: bad line '" + line + "'");
    }
    if (seen[kind]) throw ParseError("piece values: duplicate kind '" + name + "'");
    seen[kind] = true;
    t.w[static_cast<std::size_t>(piece_scale_index(static_cast<Kind>(kind)))] = value / kBaseline[kind];
  }
  for (int k = 1; k <= kNumKinds; ++k) {
    if (k != static_cast<int>(Kind::King) && !seen[k]) {
      throw ParseError("piece values: missing kind '" + std::string(kind_name(static_cast<Kind>(k))) + "'");
    }
  }
  t.component_weight(Component::Material) = 1.0;
  return t;
}

Theta load_piece_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("piece values: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return theta_from_piece_values(ss.str());
}

const PsqtTables& default_psqt() {
  static const PsqtTables tables = build_default_psqt();
  return tables;
}

std::string psqt_to_text(const PsqtTables& tables) {
  std::string out;
  for (int c = 0; c < kPsqtClasses; ++c) {
    out += kPsqtNames[c];
    out += '\n';
    for (int r = 0; r < 8; ++r) {
      for (int f = 0; f < 8; ++f) {
        if (f > 0) out += ' ';
        out += std::to_string(tables.values[c][r * 8 + f]);
      }
      out += '\n';
    }
  }
  return out;
}

PsqtTables psqt_from_text(std::string_view text) {
  PsqtTables t;
  std::istringstream in{std::string(text)};
  std::array<bool, kPsqtClasses> seen{};
  std::string word;
  while (in >> word) {
    if (word[0] == '#') {
      std::getline(in, word);
      continue;
    }
    int cls = -1;
    for (int c = 0; c < kPsqtClasses; ++c)
      if (word == kPsqtNames[c]) cls = c;
    if (cls < 0) throw ParseError("psqt: unknown table '" + word + "'");
    if (seen[cls]) throw ParseError("psqt: duplicate table '" + word + "'");
    seen[cls] = true;
    for (int i = 0; i < 64; ++i) {
      if (!(in >> t.values[cls][i])) throw ParseError("psqt: table '" + word + "' needs 64 integers");
    }
  }
  for (int c = 0; c < kPsqtClasses; ++c)
    if (!seen[c]) throw ParseError("psqt: missing table '" + std::string(kPsqtNames[c]) + "'");
  return t;
}

PsqtTables load_psqt(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("psqt: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return psqt_from_text(ss.str());
}

std::optional<PsqtClass> psqt_class(Kind kind) {
  switch (kind) {
    case Kind::Sylph:
    case Kind::Warrior:
    case Kind::Dwarf: return PsqtClass::Pawn;
    case Kind::Unicorn:
    case Kind::Basilisk: return PsqtClass::Knight;
    case Kind::Cleric:
    case Kind::Mage: return PsqtClass::Bishop;
    case Kind::Hero:
    case Kind::Thief:
    case Kind::Oliphant: return PsqtClass::Rook;
    case Kind::Dragon: return PsqtClass::Queen;
    case Kind::King: return PsqtClass::King;
    default: return std::nullopt;
  }
}

double material(const Position& position, const Theta& theta) { return material_impl(count_kinds(position), theta); }
double psqt(const Position& position, const PsqtTables& tables) { return psqt_impl(position, tables); }
double mobility(const Position& position) { return mobility_impl(scan(position)); }
double king_safety(const Position& position) { return king_safety_impl(position); }
double threats(const Position& position) { return threats_impl(position, scan(position)); }
double passed_pieces(const Position& position) { return passed_impl(position); }
double pawn_count(const Position& position) { return pawn_count_impl(count_kinds(position)); }
double imbalance(const Position& position) { return imbalance_impl(count_kinds(position)); }
double space(const Position& position) { return space_impl(position, scan(position)); }
double activity_penalty(const Position& position) { return activity_impl(position, scan(position)); }
double dragon_center(const Position& position) { return dragon_center_impl(position); }

EvalBreakdown evaluate(const Position& position, const Theta& theta, const PsqtTables& tables) {
  const KindCounts counts = count_kinds(position);
  const Scan s = scan(position);
  EvalBreakdown b;
  auto set = [&](Component c, double v) { b.components[static_cast<std::size_t>(c)] = v; };
  set(Component::Material, material_impl(counts, theta));
  set(Component::Psqt, psqt_impl(position, tables));
  set(Component::Mobility, mobility_impl(s));
  set(Component::KingSafety, king_safety_impl(position));
  set(Component::Threats, threats_impl(position, s));
  set(Component::PassedPieces, passed_impl(position));
  set(Component::PawnCount, pawn_count_impl(counts));
  set(Component::Imbalance, imbalance_impl(counts));
  set(Component::Space, space_impl(position, s));
  set(Component::ActivityPenalty, activity_impl(position, s));
  set(Component::DragonCenter, dragon_center_impl(position));
  double total = 0.0;
  for (int i = 0; i < kComponentCount; ++i) total += theta.w[kPieceScaleCount + i] * b.components[i];
  b.total = total;
  return b;
}

double heuristic_total(const Position& position, const Theta& theta, const PsqtTables& tables) {
  return evaluate(position, theta, tables).total;
}

}  // namespace dragonchess
