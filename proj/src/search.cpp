#include "dragonchess/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dragonchess {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kClockPollMask = 255;

struct Aborted {};

double capture_value(const Move& m) {
  return m.captured == 0 ? 0.0 : baseline_value(kind_of(m.captured));
}

// Captures (most valuable victim first), then quiet moves; both keep the
// generator's (from, to) order.
void order_moves(std::vector<Move>& moves, const Move* first) {
  std::stable_sort(moves.begin(), moves.end(),
                   [](const Move& a, const Move& b) { return capture_value(a) > capture_value(b); });
  if (first) {
    auto it = std::find(moves.begin(), moves.end(), *first);
    if (it != moves.end()) std::rotate(moves.begin(), it, it + 1);
  }
}

bool tie_break_less(const Move& a, const Move& b) {
  if (a.from != b.from) return a.from < b.from;
  return a.to < b.to;
}

class Searcher {
 public:
  Searcher(const AgentConfig& config, std::optional<Clock::time_point> deadline)
      : theta_(config.theta), deadline_(deadline) {}

  std::uint64_t nodes() const { return nodes_; }

  // Full-width root search at `depth`. Updates `best` / `best_value` as moves
  // complete so a caller can salvage a partial depth-1 scan.
  void root(Position& p, std::vector<Move>& moves, int depth, Move& best, double& best_value, bool& have_best) {
    have_best = false;
    best_value = -kInf;
    for (const Move& m : moves) {
      // Window just below the best so far: an equal-valued move still gets
      // an exact score and can win the (from, to) tie-break.
      const double alpha = have_best ? std::nextafter(best_value, -kInf) : -kInf;
      make_move(p, m);
      double v;
      try {
        v = -negamax(p, depth - 1, -kInf, -alpha, 1);
      } catch (const Aborted&) {
        unmake_move(p, m);
        throw;
      }
      unmake_move(p, m);
      if (!have_best || v > best_value || (v == best_value && tie_break_less(m, best))) {
        best = m;
        best_value = v;
        have_best = true;
      }
    }
  }

 private:
  double negamax(Position& p, int depth, double alpha, double beta, int ply) {
    if ((++nodes_ & kClockPollMask) == 0 && deadline_ && Clock::now() >= *deadline_) throw Aborted{};
    if (p.halfmove_clock >= kQuietPlyCap || p.ply_count >= kTotalPlyCap) return 0.0;
    if (depth <= 0) {
      const double h = heuristic_total(p, theta_);
      return p.side_to_move == Color::Gold ? h : -h;
    }
    if (buffers_.size() <= static_cast<std::size_t>(ply)) buffers_.resize(ply + 1);
    std::vector<Move>& moves = buffers_[ply];
    generate_legal(p, moves);
    if (moves.empty()) return in_check(p, p.side_to_move) ? -(kMateScore - ply) : 0.0;
    order_moves(moves, nullptr);
    double best = -kInf;
    for (const Move& m : moves) {
      make_move(p, m);
      double v;
      try {
        v = -negamax(p, depth - 1, -beta, -alpha, ply + 1);
      } catch (const Aborted&) {
        unmake_move(p, m);
        throw;
      }
      unmake_move(p, m);
      if (v > best) best = v;
      if (v > alpha) alpha = v;
      if (alpha >= beta) break;
    }
    return best;
  }

  const Theta& theta_;
  std::optional<Clock::time_point> deadline_;
  std::uint64_t nodes_ = 0;
  std::vector<std::vector<Move>> buffers_;
};

std::string budget_text(const AgentConfig& c) {
  if (c.kind == AgentKind::Random) return "random";
  if (c.max_depth) return "depth=" + std::to_string(*c.max_depth);
  return "time_ms=" + std::to_string(c.time_budget_ms);
}

}  // namespace

void validate(const AgentConfig& config) {
  if (config.time_budget_ms <= 0) throw std::invalid_argument("agent time budget must be positive");
  if (config.max_depth && *config.max_depth < 1) throw std::invalid_argument("agent depth must be at least 1");
}

AgentConfig random_agent(std::string name, std::uint64_t seed) {
  AgentConfig c;
  c.name = std::move(name);
  c.kind = AgentKind::Random;
  c.rng_seed = seed;
  return c;
}

AgentConfig minimax_agent(std::string name, const Theta& theta, int depth) {
  AgentConfig c;
  c.name = std::move(name);
  c.kind = AgentKind::Minimax;
  c.theta = theta;
  c.max_depth = depth;
  return c;
}

bool is_mate_score(double value) { return std::abs(value) > kMateScore / 2; }

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SearchResult search(const Position& position, const AgentConfig& config) {
  validate(config);
  if (terminal_state(position) != GameResult::Ongoing) throw std::domain_error("search: position is terminal");
  Position p = position;
  std::vector<Move> moves;
  generate_legal(p, moves);

  SearchResult result;
  if (config.kind == AgentKind::Random) {
    std::mt19937_64 rng(config.rng_seed);
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    result.move = moves[pick(rng)];
    return result;
  }

  std::optional<Clock::time_point> deadline;
  if (!config.depth_capped()) deadline = Clock::now() + std::chrono::milliseconds(config.time_budget_ms);
  const int max_depth = config.max_depth.value_or(64);

  Searcher searcher(config, deadline);
  result.move = moves.front();
  std::optional<Move> previous;
  for (int depth = 1; depth <= max_depth; ++depth) {
    order_moves(moves, previous ? &*previous : nullptr);
    Move best;
    double value = -kInf;
    bool have_best = false;
    try {
      searcher.root(p, moves, depth, best, value, have_best);
    } catch (const Aborted&) {
      if (depth == 1 && have_best) {
        result.move = best;
        result.value = value;
      }
      break;
    }
    result.move = best;
    result.value = value;
    result.depth = depth;
    previous = best;
    if (is_mate_score(value) && value > 0) break;  // a forced mate cannot improve
  }
  result.nodes = searcher.nodes();
  return result;
}

Move best_move(const Position& position, const AgentConfig& config) { return search(position, config).move; }

double GameRecord::gold_score() const {
  switch (result) {
    case GameResult::GoldWins: return 1.0;
    case GameResult::ScarletWins: return 0.0;
    default: return 0.5;
  }
}

GameRecord play_game(const AgentConfig& gold, const AgentConfig& scarlet, std::uint64_t seed,
                     const GameOptions& options) {
  validate(gold);
  validate(scarlet);
  GameRecord record;
  record.gold = gold.name;
  record.scarlet = scarlet.name;
  record.seed = seed;
  record.depth_capped = (gold.kind == AgentKind::Random || gold.depth_capped()) &&
                        (scarlet.kind == AgentKind::Random || scarlet.depth_capped());
  record.gold_budget = budget_text(gold);
  record.scarlet_budget = budget_text(scarlet);
  record.random_opening_plies = options.random_opening_plies;

  Position p = initial_position();
  while ((record.result = terminal_state(p)) == GameResult::Ongoing) {
    const int ply = p.ply_count;
    const AgentConfig& mover = p.side_to_move == Color::Gold ? gold : scarlet;
    Move m;
    if (ply < options.random_opening_plies) {
      m = best_move(p, random_agent("opening", mix_seed(seed, 0x6f70656eULL + ply)));
    } else if (mover.kind == AgentKind::Random) {
      AgentConfig c = mover;
      c.rng_seed = mix_seed(mix_seed(mover.rng_seed, seed), static_cast<std::uint64_t>(ply));
      m = best_move(p, c);
    } else {
      const auto start = Clock::now();
      m = best_move(p, mover);
      const auto spent = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
      if (!mover.depth_capped() && spent > 10LL * mover.time_budget_ms) {
        record.forfeit = p.side_to_move;
        record.result = p.side_to_move == Color::Gold ? GameResult::ScarletWins : GameResult::GoldWins;
        break;
      }
    }
    record.moves.push_back(m);
    make_move(p, m);
  }
  return record;
}

std::string game_record_to_text(const GameRecord& r) {
  std::ostringstream out;
  out << "dragonfish-game 1\n";
  out << "gold: " << r.gold << '\n';
  out << "scarlet: " << r.scarlet << '\n';
  out << "seed: " << r.seed << '\n';
  out << "mode: " << (r.depth_capped ? "depth-cap" : "wall-clock") << '\n';
  out << "gold_budget: " << r.gold_budget << '\n';
  out << "scarlet_budget: " << r.scarlet_budget << '\n';
  out << "random_opening_plies: " << r.random_opening_plies << '\n';
  out << "result: " << result_name(r.result) << '\n';
  out << "forfeit: " << (r.forfeit ? (*r.forfeit == Color::Gold ? "gold" : "scarlet") : "none") << '\n';
  out << "plies: " << r.plies() << '\n';
  if (r.start) out << "start: " << *r.start << '\n';
  out << "moves:\n";
  for (const Move& m : r.moves) out << move_to_text(m) << '\n';
  return out.str();
}

GameRecord game_record_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "dragonfish-game 1") throw ParseError("game record: bad header");
  GameRecord r;
  int plies = -1;
  auto field = [&](std::string_view key) {
    if (!std::getline(in, line) || line.rfind(std::string(key) + ": ", 0) != 0) {
      throw ParseError("game record: expected '" + std::string(key) + "'");
    }
    return line.substr(key.size() + 2);
  };
  auto number = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(s, &used);
      if (used != s.size()) throw ParseError("game record: bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw ParseError("game record: bad number '" + s + "'");
    }
  };
  r.gold = field("gold");
  r.scarlet = field("scarlet");
  r.seed = number(field("seed"));
  const std::string mode = field("mode");
  if (mode != "depth-cap" && mode != "wall-clock") throw ParseError("game record: bad mode");
  r.depth_capped = mode == "depth-cap";
  r.gold_budget = field("gold_budget");
  r.scarlet_budget = field("scarlet_budget");
  r.random_opening_plies = static_cast<int>(number(field("random_opening_plies")));
  const std::string result = field("result");
  bool known = false;
  for (GameResult g : {GameResult::Ongoing, GameResult::GoldWins, GameResult::ScarletWins, GameResult::Draw}) {
    if (result_name(g) == result) {
      r.result = g;
      known = true;
    }
  }
  if (!known) throw ParseError("game record: bad result '" + result + "'");
  const std::string forfeit = field("forfeit");
  if (forfeit == "gold") {
    r.forfeit = Color::Gold;
  } else if (forfeit == "scarlet") {
    r.forfeit = Color::Scarlet;
  } else if (forfeit != "none") {
    throw ParseError("game record: bad forfeit '" + forfeit + "'");
  }
  plies = static_cast<int>(number(field("plies")));
  if (!std::getline(in, line)) throw ParseError("game record: expected 'moves:'");
  Position p = initial_position();
  if (line.rfind("start: ", 0) == 0) {
    r.start = line.substr(7);
    try {
      p = from_dpn(*r.start);
    } catch (const std::exception& e) {
      throw ParseError(std::string("game record: bad start: ") + e.what());
    }
    if (!std::getline(in, line)) line.clear();
  }
  if (line != "moves:") throw ParseError("game record: expected 'moves:'");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Move m;
    try {
      m = resolve_move(p, line);
    } catch (const ContractViolation& e) {
      throw ParseError(std::string("game record: ") + e.what());
    }
    r.moves.push_back(m);
    make_move(p, m);
  }
  if (r.plies() != plies) throw ParseError("game record: ply count mismatch");
  return r;
}

void save_game_record(const GameRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << game_record_to_text(record);
}

}  // namespace dragonchess
