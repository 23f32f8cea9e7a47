#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dragonchess/types.hpp"

namespace dragonchess {

enum class RayMode : std::uint8_t {
  Move,         // non-capturing only
  Capture,      // capturing only
  MoveCapture,  // either
  Remote,       // capture without relocating
};

// One movement vector of a kind on a given level. `forward` is measured in
// the owner's forward direction, so descriptors are color-independent.
struct VectorSpec {
  int levels = 0;   // level delta (+1 = one level down, towards the Underworld)
  int forward = 0;  // rank delta in the owner's forward direction
  int files = 0;    // file delta
  RayMode mode = RayMode::MoveCapture;
  int max_steps = 1;  // > 1 for slides (same level only)
  bool to_sylph_home = false;  // Sylph return to any vacant own starting square
};

struct KindRules {
  Kind kind = Kind::None;
  // Vectors usable from each level; an empty list means the kind may not
  // stand on that level.
  std::array<std::vector<VectorSpec>, kLevels> by_level;
  bool freezes_above = false;

  bool allowed_on(int level) const { return !by_level[static_cast<std::size_t>(level)].empty(); }
};

// Normative movement table for all fifteen kinds.
const std::array<KindRules, kNumKinds + 1>& ruleset();

// Starting rank of each side's Sylphs (used by the Sylph return move).
constexpr int sylph_home_rank(Color c) { return c == Color::Gold ? 1 : kRanks - 2; }
constexpr bool is_sylph_home(int index, Color c) {
  return level_of(index) == kSky && rank_of(index) == sylph_home_rank(c) && file_of(index) % 2 == 0;
}
constexpr int promotion_rank(Color c) { return c == Color::Gold ? kRanks - 1 : 0; }

// Ruleset compiled into per-square rays for fast generation.
struct Ray {
  std::uint32_t begin = 0;
  std::uint8_t length = 0;
  RayMode mode = RayMode::MoveCapture;
};

struct AttackSource {
  std::int16_t from = 0;
  PieceCode code = 0;
  std::uint8_t position = 0;  // index of the target inside the ray
  std::uint32_t ray_begin = 0;
};

class RayTable {
 public:
  static const RayTable& instance();

  std::span<const Ray> rays(PieceCode code, int from) const {
    const auto& r = ray_index_[slot(code, from)];
    return {rays_.data() + r.first, r.second};
  }
  std::span<const std::int16_t> squares(const Ray& ray) const {
    return {squares_.data() + ray.begin, ray.length};
  }
  const std::int16_t* square_data() const { return squares_.data(); }
  // Every (piece, origin) whose capture rays pass through `target`.
  std::span<const AttackSource> attackers_of(int target) const {
    const auto& r = attack_index_[static_cast<std::size_t>(target)];
    return {attack_sources_.data() + r.first, r.second};
  }

 private:
  RayTable();
  static std::size_t slot(PieceCode code, int from) {
    return static_cast<std::size_t>((code + kNumKinds) * kNumSquares + from);
  }

  std::vector<Ray> rays_;
  std::vector<std::int16_t> squares_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ray_index_;
  std::vector<AttackSource> attack_sources_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> attack_index_;
};

}  // namespace dragonchess
