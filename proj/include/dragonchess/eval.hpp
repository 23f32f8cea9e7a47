#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dragonchess/position.hpp"

namespace dragonchess {

inline constexpr int kThetaSize = 25;
inline constexpr int kPieceScaleCount = 14;
inline constexpr int kComponentCount = 11;

enum class Component : int {
  Material = 0,
  Psqt,
  Mobility,
  KingSafety,
  Threats,
  PassedPieces,
  PawnCount,
  Imbalance,
  Space,
  ActivityPenalty,
  DragonCenter,
};

std::string_view component_name(Component c);

// Centipawn baseline per kind (King included; it is never scaled).
double baseline_value(Kind kind);
inline constexpr double kKingValue = 20000.0;

// Position of a non-King kind inside the piece-scale block of Theta.
int piece_scale_index(Kind kind);

// The 25 evolved scaling factors: 14 per-kind piece-value scales followed by
// the 11 component weights.
struct Theta {
  std::array<double, kThetaSize> w{};

  static Theta identity();

  double piece_scale(Kind kind) const { return w[static_cast<std::size_t>(piece_scale_index(kind))]; }
  double& component_weight(Component c) { return w[kPieceScaleCount + static_cast<std::size_t>(c)]; }
  double component_weight(Component c) const { return w[kPieceScaleCount + static_cast<std::size_t>(c)]; }

  friend bool operator==(const Theta&, const Theta&) = default;
};

// One value per line, 17 significant digits (lossless).
std::string theta_to_text(const Theta& theta);
Theta theta_from_text(std::string_view text);
Theta load_theta(const std::filesystem::path& path);
void save_theta(const Theta& theta, const std::filesystem::path& path);

// Piece-value preset ("<Kind> <centipawns>" per line, the 14 non-King kinds)
// turned into a material-only Theta: scale = value / baseline, every
// component weight except material set to 0.
Theta theta_from_piece_values(std::string_view text);
Theta load_piece_values(const std::filesystem::path& path);

enum class PsqtClass : int { Pawn = 0, Knight, Bishop, Rook, Queen, King };
inline constexpr int kPsqtClasses = 6;

// Six 8x8 tables, [class][rank * 8 + file], rank 0 = the owner's home rank.
struct PsqtTables {
  std::array<std::array<int, 64>, kPsqtClasses> values{};

  int lookup(PsqtClass c, int rank, int file) const {
    return values[static_cast<std::size_t>(c)][static_cast<std::size_t>(rank * 8 + file)];
  }
  friend bool operator==(const PsqtTables&, const PsqtTables&) = default;
};

const PsqtTables& default_psqt();
std::string psqt_to_text(const PsqtTables& tables);
PsqtTables psqt_from_text(std::string_view text);
PsqtTables load_psqt(const std::filesystem::path& path);

// Class used for table lookup; nullopt for Griffin, Paladin and Elemental.
std::optional<PsqtClass> psqt_class(Kind kind);

// Raw component scores, all from Gold's point of view.
double material(const Position& position, const Theta& theta);
double psqt(const Position& position, const PsqtTables& tables = default_psqt());
double mobility(const Position& position);
// Throws std::domain_error when either King is missing.
double king_safety(const Position& position);
double threats(const Position& position);
double passed_pieces(const Position& position);
double pawn_count(const Position& position);
double imbalance(const Position& position);
double space(const Position& position);
double activity_penalty(const Position& position);
double dragon_center(const Position& position);

struct EvalBreakdown {
  std::array<double, kComponentCount> components{};
  double total = 0.0;

  double operator[](Component c) const { return components[static_cast<std::size_t>(c)]; }
};

EvalBreakdown evaluate(const Position& position, const Theta& theta, const PsqtTables& tables = default_psqt());

// Weighted sum of the components, Gold-positive.
double heuristic_total(const Position& position, const Theta& theta, const PsqtTables& tables = default_psqt());

}  // namespace dragonchess
