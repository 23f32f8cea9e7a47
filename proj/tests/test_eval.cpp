#include <doctest.h>

#include <cmath>
#include <random>

#include "dragonchess/eval.hpp"
#include "dragonchess/movegen.hpp"
#include "oracle/naive_movegen.hpp"
#include "oracle/playout.hpp"

using namespace dragonchess;

namespace {

Position kings_only() {
  Position p = empty_position();
  p.set({1, 0, 6}, 11);
  p.set({1, 7, 6}, -11);
  return p;
}

// Hand-written centipawn values, kept apart from the library tables.
double value_of(int kind) {
  switch (kind) {
    case 1: case 4: case 14: return 100;
    case 2: case 6: case 13: case 15: return 320;
    case 9: case 10: return 330;
    case 5: case 7: case 8: case 12: return 500;
    case 3: return 900;
    case 11: return 20000;
  }
  return 0;
}

int sgn(PieceCode c) { return c > 0 ? 1 : -1; }

// Straight-from-the-formula reference evaluation built on the naive move
// oracle; used to cross-check the single-pass implementation.
namespace ref {

int pseudo_moves(const Position& p, int from) {
  int n = 0;
  for (int to = 0; to < 288; ++to) n += oracle::classify(p, from, to).has_value();
  return n;
}

bool same_level_attacked(const Position& p, int sq, int side_sign) {
  for (int from = sq / 96 * 96; from < sq / 96 * 96 + 96; ++from) {
    if (p.cells[from] == 0 || sgn(p.cells[from]) != side_sign) continue;
    if (oracle::can_capture_geometry(p, from, sq)) return true;
  }
  return false;
}

int legal_from(const Position& p, int from) {
  Position q = p;
  q.side_to_move = p.cells[from] > 0 ? Color::Gold : Color::Scarlet;
  int n = 0;
  for (const Move& m : oracle::naive_legal_moves(q)) n += m.from == from;
  return n;
}

std::array<double, 11> components(const Position& p) {
  std::array<double, 11> c{};
  int pawns[2] = {0, 0};
  int counts[2][16] = {};
  for (int sq = 0; sq < 288; ++sq) {
    const PieceCode code = p.cells[sq];
    if (code == 0) continue;
    const int k = std::abs(code), s = sgn(code), side = code > 0 ? 0 : 1;
    const int level = sq / 96, rank = sq % 96 / 12, file = sq % 12;
    ++counts[side][k];
    c[0] += s * value_of(k);
    const int moves = pseudo_moves(p, sq);
    c[2] += s * moves;
    if (k != 11 && same_level_attacked(p, sq, -s)) c[4] -= s * value_of(k) / 10;
    if (k == 1 || k == 4 || k == 14) {
      ++pawns[side];
      bool passed = true;
      for (int r = rank + s; r >= 0 && r < 8; r += s)
        for (int f = file - 1; f <= file + 1; ++f)
          if (f >= 0 && f < 12 && p.cells[level * 96 + r * 12 + f] * s < 0) passed = false;
      const int advanced = s > 0 ? rank - 1 : 6 - rank;
      if (passed && advanced > 0) c[5] += s * 10 * advanced;
    }
    if (level == 1 && file >= 2 && file <= 9) {
      static const PsqtTables tables = load_psqt(DRAGONCHESS_DATA_DIR "/psqt.txt");
      // pawn, knight, bishop, rook, queen, king by kind code; -1 = no table
      static const int cls[16] = {-1, 0, -1, 4, 0, 3, 1, 3, 3, 2, 2, 5, -1, 1, 0, -1};
      if (cls[k] >= 0) c[1] += s * tables.values[cls[k]][(s > 0 ? rank : 7 - rank) * 8 + file - 2];
    }
    if (k == 10 && level != 1) c[9] -= s * 30;
    if (moves == 0) c[9] -= s * 10;
    if (k == 3 && level == 0 && rank >= 2 && rank <= 5 && file >= 4 && file <= 7) c[10] += s * 20;
    if (k == 11) {
      int danger = 0;
      for (int other = level * 96; other < level * 96 + 96; ++other) {
        const int dr = std::abs(other % 96 / 12 - rank), df = std::abs(other % 12 - file);
        if (p.cells[other] * s < 0 && std::max(dr, df) <= 2) danger += 8;
      }
      danger -= 4 * legal_from(p, sq);
      const int ahead = rank + s;
      for (int f = file - 1; f <= file + 1; ++f) {
        if (ahead < 0 || ahead > 7 || f < 0 || f > 11) continue;
        const int a = p.cells[level * 96 + ahead * 12 + f] * s;
        if (a == 1 || a == 4 || a == 14) danger -= 6;
      }
      c[3] -= s * danger;
    }
  }
  for (int sq = 0; sq < 288; ++sq) {
    if (p.cells[sq] != 0) continue;
    c[8] += same_level_attacked(p, sq, 1) - same_level_attacked(p, sq, -1);
  }
  if (pawns[0] + pawns[1] > 0) c[6] = 100.0 * (pawns[0] - pawns[1]) / (pawns[0] + pawns[1]);
  for (int k : {2, 5, 6, 7, 8, 13}) {
    if (counts[0][k] >= 2 && counts[1][k] < 2) c[7] += 25;
    if (counts[1][k] >= 2 && counts[0][k] < 2) c[7] -= 25;
  }
  return c;
}

}  // namespace ref

Theta random_theta(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  Theta t;
  for (double& w : t.w) w = u(rng);
  return t;
}

}  // namespace

TEST_CASE("theta layout") {
  CHECK(piece_scale_index(Kind::Sylph) == 0);
  CHECK(piece_scale_index(Kind::Mage) == 9);
  CHECK(piece_scale_index(Kind::Paladin) == 10);
  CHECK(piece_scale_index(Kind::Elemental) == 13);
  CHECK_THROWS_AS(piece_scale_index(Kind::King), std::domain_error);
  Theta t = Theta::identity();
  t.component_weight(Component::DragonCenter) = 7;
  CHECK(t.w[24] == 7);
  CHECK(component_name(Component::KingSafety) == "king_safety");
}

TEST_CASE("initial position scores zero everywhere") {
  const Position p = initial_position();
  const auto b = evaluate(p, Theta::identity());
  for (double c : b.components) CHECK(c == 0.0);
  CHECK(b.total == 0.0);
  std::mt19937_64 rng(1);
  CHECK(heuristic_total(p, random_theta(rng)) == 0.0);
}

TEST_CASE("material") {
  Position p = initial_position();
  p.set({0, 7, 5}, 0);  // Scarlet Dragon
  CHECK(material(p, Theta::identity()) == 900);
  Theta t = Theta::identity();
  t.w[piece_scale_index(Kind::Dragon)] = 2.0;
  CHECK(material(p, t) == 1800);
  Position no_king = initial_position();
  no_king.set({1, 7, 6}, 0);
  CHECK(material(no_king, t) == 20000);
}

TEST_CASE("psqt") {
  CHECK(psqt(initial_position()) == 0);
  Position edge = kings_only();
  edge.set({1, 0, 6}, 0);
  edge.set({1, 0, 0}, 11);
  edge.set({1, 7, 6}, 0);
  edge.set({1, 7, 11}, -11);
  edge.set({1, 3, 1}, 4);
  edge.set({0, 4, 5}, 3);
  CHECK(psqt(edge) == 0);

  // Pawn table, file g (table file e): rank 1 holds -20, rank 4 holds 25.
  Position base = kings_only();
  base.set({1, 1, 6}, 4);
  Position advanced = kings_only();
  advanced.set({1, 4, 6}, 4);
  CHECK(psqt(advanced) - psqt(base) == 45);

  // Griffin has no table.
  Position griffin = kings_only();
  griffin.set({1, 3, 5}, 2);
  CHECK(psqt(griffin) == psqt(kings_only()));
}

TEST_CASE("psqt text round-trip and errors") {
  const std::string text = psqt_to_text(default_psqt());
  CHECK(psqt_from_text(text) == default_psqt());
  CHECK(load_psqt(DRAGONCHESS_DATA_DIR "/psqt.txt") == default_psqt());
  CHECK_THROWS_AS(psqt_from_text("pawn 1 2 3"), ParseError);
  CHECK_THROWS_AS(psqt_from_text(text + "\nfoo"), ParseError);
  CHECK_THROWS_AS(psqt_from_text(text.substr(0, text.find("king"))), ParseError);
}

TEST_CASE("mobility counts pseudo-legal moves") {
  Position p = kings_only();
  p.set({1, 3, 5}, 5);
  p.set({1, 6, 0}, -4);
  const int expected = (ref::pseudo_moves(p, index_of({1, 0, 6})) + ref::pseudo_moves(p, index_of({1, 3, 5}))) -
                       (ref::pseudo_moves(p, index_of({1, 7, 6})) + ref::pseudo_moves(p, index_of({1, 6, 0})));
  CHECK(mobility(p) == expected);
  CHECK(mobility(mirror(p)) == -expected);
}

TEST_CASE("king safety") {
  CHECK(king_safety(initial_position()) == 0);
  Position p = kings_only();
  p.set({1, 7, 0}, -5);  // far away: affects nothing
  const double before = king_safety(p);
  Position q = p;
  q.set({1, 7, 0}, 0);
  q.set({1, 2, 4}, -5);  // now within distance 2, not covering the King's squares
  const int lost_escapes = legal_move_count_for_piece(p, index_of({1, 0, 6})) -
                           legal_move_count_for_piece(q, index_of({1, 0, 6}));
  CHECK(king_safety(q) == before - 8 - 4 * lost_escapes);

  Position adjacent = p;
  adjacent.set({1, 7, 0}, 0);
  adjacent.set({1, 0, 5}, -5);
  CHECK(king_safety(adjacent) < before);

  Position missing = kings_only();
  missing.set({1, 7, 6}, 0);
  CHECK_THROWS_AS(king_safety(missing), std::domain_error);
  CHECK_THROWS_AS(evaluate(missing, Theta::identity()), std::domain_error);
}

TEST_CASE("threats count same-level attacks only") {
  Position p = kings_only();
  p.set({1, 3, 0}, 5);    // Gold Oliphant
  p.set({1, 3, 9}, -10);  // Scarlet Mage on the same rank, undefended
  // The Mage hits back along the same rank: +33 for Gold, -50 for Scarlet.
  CHECK(threats(p) == 33 - 50);
  p.set({2, 3, 9}, 13);  // a Gold Basilisk below freezes the Mage
  CHECK(threats(p) == 33);

  Position remote = kings_only();
  remote.set({0, 3, 5}, 3);
  remote.set({1, 3, 5}, -10);
  CHECK(attacks(remote, {1, 3, 5}, Color::Gold));
  CHECK(threats(remote) == 0);
}

TEST_CASE("passed pieces") {
  CHECK(passed_pieces(initial_position()) == 0);
  Position p = kings_only();
  p.set({1, 5, 2}, 4);
  CHECK(passed_pieces(p) == 40);
  CHECK(passed_pieces(mirror(p)) == -40);
  Position blocked = p;
  blocked.set({1, 7, 3}, -5);
  CHECK(passed_pieces(blocked) == 0);
  Position behind = p;
  behind.set({1, 4, 3}, -5);  // behind the Warrior: no effect
  CHECK(passed_pieces(behind) == 40);
}

TEST_CASE("pawn count") {
  CHECK(pawn_count(initial_position()) == 0);
  CHECK(pawn_count(kings_only()) == 0);
  Position p = kings_only();
  for (int f = 0; f < 12; ++f) p.set({1, 1, f}, 4);
  CHECK(pawn_count(p) == 100);
  for (int f = 0; f < 4; ++f) p.set({1, 6, f}, -4);
  for (int f = 0; f < 4; ++f) p.set({2, 1, f}, 14);
  for (int f = 0; f < 4; ++f) p.set({2, 6, f}, -14);
  CHECK(pawn_count(p) == doctest::Approx(100.0 * 8 / 24).epsilon(1e-12));
}

TEST_CASE("imbalance") {
  CHECK(imbalance(initial_position()) == 0);
  Position p = initial_position();
  REQUIRE(p.at({1, 7, 3}) == -8);
  p.set({1, 7, 3}, 0);  // one Scarlet Thief
  CHECK(imbalance(p) == 25);
  Position heroes = initial_position();
  REQUIRE(heroes.at({1, 0, 2}) == 7);
  heroes.set({1, 0, 2}, 0);
  heroes.set({1, 7, 2}, 0);
  CHECK(imbalance(heroes) == 0);
}

TEST_CASE("space") {
  CHECK(space(initial_position()) == 0);
  Position p = empty_position();
  p.set({1, 0, 0}, 5);
  CHECK(space(p) == 18);
  CHECK(space(mirror(p)) == -18);
}

TEST_CASE("activity penalty") {
  CHECK(activity_penalty(initial_position()) == 0);
  Position p = kings_only();
  p.set({1, 3, 3}, 10);
  const double on_ground = activity_penalty(p);
  p.set({1, 3, 3}, 0);
  p.set({0, 3, 3}, 10);
  CHECK(activity_penalty(p) - on_ground == -30);

  Position free_piece = kings_only();
  free_piece.set({1, 4, 3}, 4);
  Position frozen = free_piece;
  frozen.set({2, 4, 3}, -13);
  Position unrelated = free_piece;
  unrelated.set({2, 4, 8}, -13);
  CHECK(is_frozen(frozen, {1, 4, 3}));
  CHECK(activity_penalty(frozen) - activity_penalty(unrelated) == -10);
}

TEST_CASE("dragon center") {
  CHECK(dragon_center(initial_position()) == 0);
  Position p = kings_only();
  p.set({0, 3, 5}, 3);
  CHECK(dragon_center(p) == 20);
  p.set({0, 4, 6}, -3);
  CHECK(dragon_center(p) == 0);
  Position edge = kings_only();
  edge.set({0, 1, 5}, 3);
  edge.set({0, 3, 8}, 3);
  CHECK(dragon_center(edge) == 0);
}

TEST_CASE("components match the formula reference on random positions") {
  const Theta id = Theta::identity();
  for (const Position& p : testing::random_positions(120, 42)) {
    const auto b = evaluate(p, id);
    const auto expected = ref::components(p);
    for (int i = 1; i < kComponentCount; ++i) {
      INFO("component " << component_name(static_cast<Component>(i)));
      REQUIRE(b.components[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
    REQUIRE(b.components[0] == expected[0]);
    CHECK(b[Component::Mobility] == mobility(p));
    CHECK(b[Component::Space] == space(p));
    CHECK(b[Component::Threats] == threats(p));
    CHECK(b[Component::ActivityPenalty] == activity_penalty(p));
  }
}

TEST_CASE("per-piece mobility agrees with the move generator") {
  for (const Position& p : testing::random_positions(40, 5)) {
    int gold = 0, scarlet = 0;
    for (int sq = 0; sq < kNumSquares; ++sq) {
      if (p.cells[sq] == 0) continue;
      (p.cells[sq] > 0 ? gold : scarlet) += pseudo_legal_count(p, sq);
    }
    REQUIRE(mobility(p) == gold - scarlet);
  }
}

TEST_CASE("color antisymmetry of the heuristic total") {
  std::mt19937_64 rng(9);
  for (const Position& p : testing::random_positions(200, 17)) {
    const Theta t = random_theta(rng);
    const auto a = evaluate(p, t);
    const auto m = evaluate(mirror(p), t);
    for (int i = 0; i < kComponentCount; ++i) {
      if (static_cast<Component>(i) == Component::PawnCount) {
        REQUIRE(m.components[i] == doctest::Approx(-a.components[i]).epsilon(1e-9));
      } else {
        REQUIRE(m.components[i] == -a.components[i]);
      }
    }
    REQUIRE(m.total == doctest::Approx(-a.total).epsilon(1e-9));
  }
}

TEST_CASE("identity theta gives the unweighted component sum") {
  for (const Position& p : testing::random_positions(50, 23)) {
    const auto b = evaluate(p, Theta::identity());
    double sum = 0;
    for (double c : b.components) sum += c;
    REQUIRE(b.total == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("linearity in the component weights") {
  std::mt19937_64 rng(4);
  for (const Position& p : testing::random_positions(50, 29)) {
    const Theta t = random_theta(rng);
    Theta doubled = t;
    for (int i = kPieceScaleCount; i < kThetaSize; ++i) doubled.w[i] *= 2;
    REQUIRE(heuristic_total(p, doubled) == 2 * heuristic_total(p, t));

    // f(a*u + b*v) = a f(u) + b f(v) with the piece scales held fixed.
    Theta u = t, v = t, mix = t;
    for (int i = kPieceScaleCount; i < kThetaSize; ++i) {
      v.w[i] = random_theta(rng).w[i];
      mix.w[i] = 0.25 * u.w[i] + 0.75 * v.w[i];
    }
    const double lhs = heuristic_total(p, mix);
    const double rhs = 0.25 * heuristic_total(p, u) + 0.75 * heuristic_total(p, v);
    REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("theta text round-trip is lossless") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    Theta t = random_theta(rng);
    t.w[3] = std::nextafter(t.w[3], 10.0);
    REQUIRE(theta_from_text(theta_to_text(t)) == t);
  }
  CHECK(load_theta(DRAGONCHESS_DATA_DIR "/identity_theta.txt") == Theta::identity());
  CHECK_THROWS_AS(theta_from_text("1\n2\n"), ParseError);
  std::string too_many;
  for (int i = 0; i < 26; ++i) too_many += "1\n";
  CHECK_THROWS_AS(theta_from_text(too_many), ParseError);
  std::string junk = theta_to_text(Theta::identity());
  junk.replace(0, 1, "x");
  CHECK_THROWS_AS(theta_from_text(junk), ParseError);
  std::string nan_value = theta_to_text(Theta::identity());
  nan_value.replace(0, 1, "nan");
  CHECK_THROWS_AS(theta_from_text(nan_value), ParseError);
}

TEST_CASE("piece-value presets become material-only thetas") {
  const Theta g = load_piece_values(DRAGONCHESS_DATA_DIR "/gygax_weights.txt");
  for (int i = 0; i < kPieceScaleCount; ++i) CHECK(g.w[i] == 1.0);
  CHECK(g.component_weight(Component::Material) == 1.0);
  for (int i = 1; i < kComponentCount; ++i) CHECK(g.component_weight(static_cast<Component>(i)) == 0.0);
  CHECK(load_piece_values(DRAGONCHESS_DATA_DIR "/jackman_weights.txt") == g);

  std::string text;
  for (int k = 1; k <= kNumKinds; ++k) {
    if (k == 11) continue;
    text += std::string(kind_name(static_cast<Kind>(k))) + " " + (k == 3 ? "450" : "100") + "\n";
  }
  const Theta custom = theta_from_piece_values(text);
  CHECK(custom.piece_scale(Kind::Dragon) == 0.5);
  CHECK(custom.piece_scale(Kind::Sylph) == 1.0);
  CHECK_THROWS_AS(theta_from_piece_values("Dragon 900\n"), ParseError);
  CHECK_THROWS_AS(theta_from_piece_values(text + "King 1\n"), ParseError);
  CHECK_THROWS_AS(theta_from_piece_values(text + "Dragon 1\n"), ParseError);
}
