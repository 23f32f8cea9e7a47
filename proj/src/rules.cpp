#include "dragonchess/rules.hpp"

#include <algorithm>

namespace dragonchess {

namespace {

using Specs = std::vector<VectorSpec>;

constexpr int kSlide = 11;

void add(Specs& out, std::initializer_list<std::pair<int, int>> deltas, int levels, RayMode mode,
         int max_steps = 1) {
  for (auto [fwd, file] : deltas) out.push_back({levels, fwd, file, mode, max_steps, false});
}

const std::initializer_list<std::pair<int, int>> kOrth = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
const std::initializer_list<std::pair<int, int>> kDiag = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
const std::initializer_list<std::pair<int, int>> kKnight = {{1, 2},  {2, 1},  {-1, 2}, {-2, 1},
                                                            {1, -2}, {2, -1}, {-1, -2}, {-2, -1}};
const std::initializer_list<std::pair<int, int>> kGriffinLeap = {{3, 2},  {2, 3},  {-3, 2}, {-2, 3},
                                                                 {3, -2}, {2, -3}, {-3, -2}, {-2, -3}};
const std::initializer_list<std::pair<int, int>> kDoubleDiag = {{2, 2}, {2, -2}, {-2, 2}, {-2, -2}};
const std::initializer_list<std::pair<int, int>> kSameSquare = {{0, 0}};

void king_step(Specs& s) {
  add(s, kOrth, 0, RayMode::MoveCapture);
  add(s, kDiag, 0, RayMode::MoveCapture);
}

// Vertical straight move to the level above (-1) and/or below (+1).
void vertical(Specs& s, std::initializer_list<int> level_deltas, RayMode mode = RayMode::MoveCapture) {
  for (int dl : level_deltas) add(s, kSameSquare, dl, mode);
}

std::array<KindRules, kNumKinds + 1> build_ruleset() {
  std::array<KindRules, kNumKinds + 1> rules{};
  for (int k = 0; k <= kNumKinds; ++k) rules[k].kind = static_cast<Kind>(k);
  auto level = [&](Kind k, int l) -> Specs& { return rules[static_cast<int>(k)].by_level[l]; };

  {  // Sylph
    Specs& sky = level(Kind::Sylph, kSky);
    add(sky, {{1, 1}, {1, -1}}, 0, RayMode::Move);
    add(sky, {{1, 0}}, 0, RayMode::Capture);
    vertical(sky, {+1}, RayMode::Capture);
    Specs& ground = level(Kind::Sylph, kGround);
    vertical(ground, {-1}, RayMode::Move);
    ground.push_back({-1, 0, 0, RayMode::Move, 1, true});
  }
  {  // Griffin
    Specs& sky = level(Kind::Griffin, kSky);
    add(sky, kGriffinLeap, 0, RayMode::MoveCapture);
    add(sky, kDiag, +1, RayMode::MoveCapture);
    Specs& ground = level(Kind::Griffin, kGround);
    add(ground, kDiag, 0, RayMode::MoveCapture);
    add(ground, kDiag, -1, RayMode::MoveCapture);
  }
  {  // Dragon
    Specs& sky = level(Kind::Dragon, kSky);
    add(sky, kDiag, 0, RayMode::MoveCapture, kSlide);
    add(sky, kOrth, 0, RayMode::MoveCapture);
    add(sky, kSameSquare, +1, RayMode::Remote);
    add(sky, kOrth, +1, RayMode::Remote);
  }
  add(level(Kind::Oliphant, kGround), kOrth, 0, RayMode::MoveCapture, kSlide);
  add(level(Kind::Unicorn, kGround), kKnight, 0, RayMode::MoveCapture);
  add(level(Kind::Thief, kGround), kDiag, 0, RayMode::MoveCapture, kSlide);
  {  // Hero
    Specs& ground = level(Kind::Hero, kGround);
    add(ground, kDiag, 0, RayMode::MoveCapture);
    add(ground, kDoubleDiag, 0, RayMode::MoveCapture);
    add(ground, kDiag, -1, RayMode::MoveCapture);
    add(ground, kDiag, +1, RayMode::MoveCapture);
    add(level(Kind::Hero, kSky), kDiag, +1, RayMode::MoveCapture);
    add(level(Kind::Hero, kUnderworld), kDiag, -1, RayMode::MoveCapture);
  }
  for (int l = 0; l < kLevels; ++l) {
    Specs& cleric = level(Kind::Cleric, l);
    king_step(cleric);
    if (l != kSky) vertical(cleric, {-1});
    if (l != kUnderworld) vertical(cleric, {+1});
  }
  {  // Mage
    Specs& ground = level(Kind::Mage, kGround);
    add(ground, kOrth, 0, RayMode::MoveCapture, kSlide);
    add(ground, kDiag, 0, RayMode::MoveCapture, kSlide);
    vertical(ground, {-1, +1});
    add(level(Kind::Mage, kSky), kOrth, 0, RayMode::MoveCapture);
    vertical(level(Kind::Mage, kSky), {+1});
    add(level(Kind::Mage, kUnderworld), kOrth, 0, RayMode::MoveCapture);
    vertical(level(Kind::Mage, kUnderworld), {-1});
  }
  {  // King
    king_step(level(Kind::King, kGround));
    vertical(level(Kind::King, kGround), {-1, +1});
    king_step(level(Kind::King, kSky));
    vertical(level(Kind::King, kSky), {+1});
    king_step(level(Kind::King, kUnderworld));
    vertical(level(Kind::King, kUnderworld), {-1});
  }
  for (int l = 0; l < kLevels; ++l) {  // Paladin
    Specs& s = level(Kind::Paladin, l);
    king_step(s);
    if (l == kGround) add(s, kKnight, 0, RayMode::MoveCapture);
    for (int dl : {-2, -1, 1, 2}) {
      const int target = l + dl;
      if (target < 0 || target >= kLevels) continue;
      if (dl == 1 || dl == -1) {
        add(s, {{2, 0}, {-2, 0}, {0, 2}, {0, -2}}, dl, RayMode::MoveCapture);
      } else {
        add(s, kOrth, dl, RayMode::MoveCapture);
      }
    }
  }
  {  // Warrior
    Specs& ground = level(Kind::Warrior, kGround);
    add(ground, {{1, 0}}, 0, RayMode::Move);
    add(ground, {{1, 1}, {1, -1}}, 0, RayMode::Capture);
  }
  {  // Basilisk
    Specs& under = level(Kind::Basilisk, kUnderworld);
    add(under, {{1, 0}, {1, 1}, {1, -1}}, 0, RayMode::MoveCapture);
    add(under, {{-1, 0}}, 0, RayMode::Move);
    rules[static_cast<int>(Kind::Basilisk)].freezes_above = true;
  }
  for (int l : {kGround, kUnderworld}) {  // Dwarf
    Specs& s = level(Kind::Dwarf, l);
    add(s, {{1, 0}, {0, 1}, {0, -1}}, 0, RayMode::Move);
    add(s, {{1, 1}, {1, -1}}, 0, RayMode::Capture);
    vertical(s, {l == kUnderworld ? -1 : +1}, RayMode::Capture);
  }
  {  // Elemental
    Specs& under = level(Kind::Elemental, kUnderworld);
    add(under, kOrth, 0, RayMode::MoveCapture, 2);
    add(under, kDiag, 0, RayMode::Move);
    add(under, kOrth, -1, RayMode::MoveCapture);
    vertical(under, {-1});
    Specs& ground = level(Kind::Elemental, kGround);
    add(ground, kOrth, 0, RayMode::MoveCapture);
    add(ground, kOrth, +1, RayMode::MoveCapture);
    vertical(ground, {+1});
  }
  return rules;
}

}  // namespace

const std::array<KindRules, kNumKinds + 1>& ruleset() {
  static const auto rules = build_ruleset();
  return rules;
}

const RayTable& RayTable::instance() {
  static const RayTable table;
  return table;
}

RayTable::RayTable() {
  ray_index_.assign(static_cast<std::size_t>((2 * kNumKinds + 1) * kNumSquares), {0, 0});
  const auto& rules = ruleset();
  std::vector<std::vector<AttackSource>> by_target(kNumSquares);

  for (Color color : {Color::Gold, Color::Scarlet}) {
    const int fwd = sign_of(color);
    for (int k = 1; k <= kNumKinds; ++k) {
      const PieceCode code = make_piece(static_cast<Kind>(k), color);
      for (int from = 0; from < kNumSquares; ++from) {
        const int level = level_of(from);
        const auto& specs = rules[k].by_level[level];
        const auto first_ray = static_cast<std::uint32_t>(rays_.size());
        std::vector<int> seen;
        auto push_leap = [&](int target, RayMode mode) {
          if (std::find(seen.begin(), seen.end(), target) != seen.end()) return;
          seen.push_back(target);
          rays_.push_back({static_cast<std::uint32_t>(squares_.size()), 1, mode});
          squares_.push_back(static_cast<std::int16_t>(target));
        };
        for (const auto& spec : specs) {
          if (spec.to_sylph_home) {
            for (int f = 0; f < kFiles; f += 2) push_leap(make_index(kSky, sylph_home_rank(color), f), spec.mode);
            continue;
          }
          const int tl = level + spec.levels;
          if (tl < 0 || tl >= kLevels) continue;
          Ray ray{static_cast<std::uint32_t>(squares_.size()), 0, spec.mode};
          for (int step = 1; step <= spec.max_steps; ++step) {
            const int r = rank_of(from) + spec.forward * fwd * step;
            const int f = file_of(from) + spec.files * step;
            if (r < 0 || r >= kRanks || f < 0 || f >= kFiles) break;
            const int target = make_index(tl, r, f);
            if (spec.max_steps == 1) {
              push_leap(target, spec.mode);
              break;
            }
            squares_.push_back(static_cast<std::int16_t>(target));
            ++ray.length;
          }
          if (ray.length > 0) rays_.push_back(ray);
        }
        const auto count = static_cast<std::uint32_t>(rays_.size()) - first_ray;
        ray_index_[slot(code, from)] = {first_ray, count};
        for (std::uint32_t i = first_ray; i < first_ray + count; ++i) {
          const Ray& ray = rays_[i];
          if (ray.mode == RayMode::Move) continue;
          for (std::uint8_t pos = 0; pos < ray.length; ++pos) {
            by_target[squares_[ray.begin + pos]].push_back(
                {static_cast<std::int16_t>(from), code, pos, ray.begin});
          }
        }
      }
    }
  }

  attack_index_.resize(kNumSquares);
  for (int t = 0; t < kNumSquares; ++t) {
    attack_index_[t] = {static_cast<std::uint32_t>(attack_sources_.size()),
                        static_cast<std::uint32_t>(by_target[t].size())};
    attack_sources_.insert(attack_sources_.end(), by_target[t].begin(), by_target[t].end());
  }
}

}  // namespace dragonchess
