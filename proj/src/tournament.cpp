#include "dragonchess/tournament.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "dragonchess/parallel.hpp"

namespace dragonchess {

namespace {

constexpr double kEloQuantum = 1.0 / (1 << 20);

bool has_met(const Standing& s, int other) {
  return std::find(s.opponents.begin(), s.opponents.end(), other) != s.opponents.end();
}

// Depth-first search for a perfect matching of `order` (ranked ids) in which
// each unmatched entrant takes the first acceptable partner below it.
bool match(const TournamentState& state, const std::vector<int>& order, std::vector<int>& partner, bool allow_rematch) {
  auto first = std::find_if(order.begin(), order.end(), [&](int id) { return partner[id] < 0; });
  if (first == order.end()) return true;
  const int a = *first;
  // With rematches allowed, fresh opponents are still tried first.
  for (int pass = 0; pass < (allow_rematch ? 2 : 1); ++pass) {
    for (auto it = first + 1; it != order.end(); ++it) {
      const int b = *it;
      if (partner[b] >= 0 || has_met(state.standings[a], b) != (pass == 1)) continue;
      partner[a] = b;
      partner[b] = a;
      if (match(state, order, partner, allow_rematch)) return true;
      partner[a] = partner[b] = -1;
    }
  }
  return false;
}

int colour_balance(const Standing& s) { return s.gold_games - s.scarlet_games; }

}  // namespace

std::pair<double, double> elo_update(double ra, double rb, double result_for_a, double k) {
  const double expected = 1.0 / (1.0 + std::pow(10.0, (rb - ra) / 400.0));
  const double delta = std::round(k * (result_for_a - expected) / kEloQuantum) * kEloQuantum;
  return {ra + delta, rb - delta};
}

TournamentState TournamentState::start(const std::vector<std::string>& names) {
  TournamentState s;
  for (const auto& n : names) {
    Standing st;
    st.name = n;
    s.standings.push_back(st);
  }
  return s;
}

std::vector<int> ranking(const TournamentState& state) {
  std::vector<int> order(state.standings.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Standing &x = state.standings[a], &y = state.standings[b];
    if (x.score != y.score) return x.score > y.score;
    if (x.elo != y.elo) return x.elo > y.elo;
    return a < b;
  });
  return order;
}

RoundPairings pair_round(const TournamentState& state) {
  const int n = static_cast<int>(state.standings.size());
  if (n < 2) throw std::domain_error("pairing needs at least two entrants");
  std::vector<int> order = ranking(state);
  RoundPairings out;
  if (n % 2 == 1) {
    // Lowest-ranked entrant that has not had a bye yet (everyone has: lowest).
    auto it = std::find_if(order.rbegin(), order.rend(), [&](int id) { return state.standings[id].byes == 0; });
    const int bye = it != order.rend() ? *it : order.back();
    out.bye = bye;
    order.erase(std::find(order.begin(), order.end(), bye));
  }
  std::vector<int> partner(n, -1);
  if (!match(state, order, partner, false)) {
    std::fill(partner.begin(), partner.end(), -1);
    match(state, order, partner, true);
  }
  std::vector<int> rank_of(n, -1);
  for (std::size_t i = 0; i < order.size(); ++i) rank_of[order[i]] = static_cast<int>(i);
  for (int a : order) {
    const int b = partner[a];
    if (rank_of[b] < rank_of[a]) continue;  // emitted from the higher-ranked side
    const Standing &sa = state.standings[a], &sb = state.standings[b];
    bool a_gold;
    if (colour_balance(sa) != colour_balance(sb)) {
      a_gold = colour_balance(sa) < colour_balance(sb);
    } else {
      a_gold = state.round % 2 == 0;  // alternate which rank gets Gold
    }
    out.games.push_back(a_gold ? Pairing{a, b} : Pairing{b, a});
  }
  return out;
}

void apply_round(TournamentState& state, const RoundPairings& pairings, const std::vector<GameOutcome>& outcomes) {
  if (outcomes.size() != pairings.games.size()) throw std::invalid_argument("one outcome per pairing required");
  if (pairings.bye) {
    Standing& s = state.standings[*pairings.bye];
    s.score += 1.0;
    ++s.byes;
  }
  for (const auto& o : outcomes) {
    Standing& g = state.standings[o.pairing.gold];
    Standing& s = state.standings[o.pairing.scarlet];
    ++g.gold_games;
    ++s.scarlet_games;
    g.opponents.push_back(o.pairing.scarlet);
    s.opponents.push_back(o.pairing.gold);
    const double gs = o.record.gold_score();
    g.score += gs;
    s.score += 1.0 - gs;
    if (gs == 1.0) {
      ++g.wins;
      ++s.losses;
    } else if (gs == 0.0) {
      ++g.losses;
      ++s.wins;
    } else {
      ++g.draws;
      ++s.draws;
    }
  }
  for (const auto& o : outcomes) {
    Standing& g = state.standings[o.pairing.gold];
    Standing& s = state.standings[o.pairing.scarlet];
    std::tie(g.elo, s.elo) = elo_update(g.elo, s.elo, o.record.gold_score());
  }
  ++state.round;
}

TournamentResult run_tournament(const std::vector<AgentConfig>& entrants, const TournamentOptions& options) {
  if (entrants.size() < 2) throw std::domain_error("tournament needs at least two entrants");
  if (options.rounds < 1) throw std::invalid_argument("tournament needs at least one round");
  std::vector<std::string> names;
  for (const auto& e : entrants) {
    validate(e);
    names.push_back(e.name);
  }
  TournamentResult result;
  result.state = TournamentState::start(names);
  const GameOptions game_options{options.random_opening_plies};
  for (int round = 0; round < options.rounds; ++round) {
    const RoundPairings pairings = pair_round(result.state);
    std::vector<GameOutcome> outcomes(pairings.games.size());
    parallel_for(static_cast<int>(outcomes.size()), options.jobs, [&](int board) {
      const Pairing p = pairings.games[board];
      const std::uint64_t seed = mix_seed(options.seed, static_cast<std::uint64_t>(round) * 1000 + board);
      outcomes[board] = {p, play_game(entrants[p.gold], entrants[p.scarlet], seed, game_options)};
    });
    for (const auto& o : outcomes) {
      if (o.record.forfeit) {
        std::cerr << "round " << round + 1 << ": " << (*o.record.forfeit == Color::Gold ? o.record.gold : o.record.scarlet)
                  << " forfeited on time\n";
      }
    }
    apply_round(result.state, pairings, outcomes);
    if (options.on_round) options.on_round(round, outcomes);
    result.rounds.push_back(std::move(outcomes));
  }
  return result;
}

std::string standings_table(const TournamentState& state, bool pretty) {
  std::vector<int> order(state.standings.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Standing &x = state.standings[a], &y = state.standings[b];
    if (x.elo != y.elo) return x.elo > y.elo;
    return x.name < y.name;
  });
  std::string out;
  char line[256];
  if (pretty) {
    std::size_t width = 5;
    for (const auto& s : state.standings) width = std::max(width, s.name.size());
    std::snprintf(line, sizeof line, "%-*s  %5s  %6s  %5s  %7s\n", static_cast<int>(width), "Agent", "Wins", "Losses",
                  "Draws", "Elo");
    out += line;
    for (int id : order) {
      const Standing& s = state.standings[id];
      std::snprintf(line, sizeof line, "%-*s  %5d  %6d  %5d  %7.1f\n", static_cast<int>(width), s.name.c_str(), s.wins,
                    s.losses, s.draws, s.elo);
      out += line;
    }
    return out;
  }
  out += "agent\twins\tlosses\tdraws\telo\n";
  for (int id : order) {
    const Standing& s = state.standings[id];
    std::snprintf(line, sizeof line, "%s\t%d\t%d\t%d\t%.6f\n", s.name.c_str(), s.wins, s.losses, s.draws, s.elo);
    out += line;
  }
  return out;
}

}  // namespace dragonchess
