// dragonfish: command-line front end (perft, play, evolve, tournament, serve, eval-pos).
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dragonchess/agents.hpp"
#include "dragonchess/cmaes.hpp"
#include "dragonchess/http_server.hpp"
#include "dragonchess/tournament.hpp"

namespace fs = std::filesystem;
using namespace dragonchess;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kDomain = 4, kRuntime = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1;
  std::optional<int> depth;
  std::optional<int> time_ms;
  std::optional<std::string> theta;
  std::string out;
  bool pretty = false;
  int jobs = default_jobs();
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--depth", c.depth, "Search depth cap (deterministic mode)")->check(CLI::PositiveNumber);
  cmd->add_option("--time-ms", c.time_ms, "Per-move wall-clock budget")->check(CLI::PositiveNumber);
  cmd->add_option("--theta", c.theta, "Theta file (25 values)");
  cmd->add_option("--out", c.out, "Output directory (default $DRAGONFISH_OUT or ./dragonfish-out)");
  cmd->add_flag("--pretty", c.pretty, "Human-readable tables");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

fs::path out_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("DRAGONFISH_OUT"); env && *env) return env;
  return "dragonfish-out";
}

// Resolves `p` under the output directory and refuses paths that leave it.
fs::path inside_out(const fs::path& out, const fs::path& p) {
  const fs::path full = fs::weakly_canonical(p.is_absolute() ? p : out / p);
  const fs::path root = fs::weakly_canonical(out);
  const auto [r, _] = std::mismatch(root.begin(), root.end(), full.begin(), full.end());
  if (r != root.end()) throw UsageError(p.string() + " is outside the output directory " + out.string());
  return full;
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void apply_budget(AgentConfig& a, const Common& c) {
  if (a.kind != AgentKind::Minimax) return;
  if (c.time_ms) a.time_budget_ms = *c.time_ms;
  if (c.depth) {
    a.max_depth = *c.depth;
  } else if (c.time_ms) {
    a.max_depth.reset();
  } else {
    a.max_depth = 2;
  }
}

// Agent spec: random[:seed] | identity | gygax | jackman | <agent.json> | <theta file>.
AgentConfig agent_from_spec(const std::string& spec, const Common& c, std::uint64_t default_seed) {
  AgentConfig a;
  if (spec == "random" || spec.rfind("random:", 0) == 0) {
    std::uint64_t seed = default_seed;
    if (spec.size() > 7) {
      try {
        seed = std::stoull(spec.substr(7));
      } catch (const std::exception&) {
        throw UsageError("bad agent seed in '" + spec + "'");
      }
    }
    return random_agent(spec, seed);
  }
  if (spec == "identity" || spec == "gygax" || spec == "jackman") {
    a = minimax_agent(spec, preset_theta(spec, default_data_dir()), 2);
  } else if (fs::path(spec).extension() == ".json") {
    json j;
    try {
      j = json::parse(read_file(spec));
    } catch (const json::parse_error& e) {
      throw ParseError(spec + ": " + e.what());
    }
    a = agent_from_json(j, default_data_dir(), fs::path(spec).parent_path());
    if (a.kind == AgentKind::Random) return a;
    if (j.contains("depth") || j.contains("time_ms")) return a;
  } else {
    a = minimax_agent(fs::path(spec).stem().string(), load_theta(spec), 2);
  }
  apply_budget(a, c);
  return a;
}

int cmd_perft(const Common& c, const std::optional<std::string>& dpn, bool divide) {
  const Position p = dpn ? from_dpn(*dpn) : initial_position();
  const int depth = c.depth.value_or(1);
  if (divide) {
    for (const Move& m : legal_moves(p))
      std::cout << move_to_text(m) << '\t' << perft(apply_move(p, m), depth - 1) << '\n';
  }
  std::cout << perft(p, depth) << '\n';
  return kOk;
}

int cmd_play(const Common& c, std::string gold_spec, const std::string& scarlet_spec, int games, int opening) {
  if (gold_spec.empty()) gold_spec = c.theta ? *c.theta : "identity";
  const AgentConfig gold = agent_from_spec(gold_spec, c, mix_seed(c.seed, 1));
  const AgentConfig scarlet = agent_from_spec(scarlet_spec, c, mix_seed(c.seed, 2));
  const fs::path out = out_dir(c);
  std::vector<GameRecord> records(static_cast<std::size_t>(games));
  parallel_for(records.size(), c.jobs, [&](std::size_t i) {
    records[i] = play_game(gold, scarlet, mix_seed(c.seed, i), GameOptions{opening});
  });
  std::ostringstream table;
  table << "game\tgold\tscarlet\tresult\tplies\n";
  double score = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "game_%04zu.game", i + 1);
    write_file(out / "games" / name, game_record_to_text(records[i]));
    table << i + 1 << '\t' << gold.name << '\t' << scarlet.name << '\t' << result_name(records[i].result) << '\t'
          << records[i].plies() << '\n';
    score += records[i].gold_score();
  }
  write_file(out / "play.tsv", table.str());
  if (c.pretty) {
    std::cout << gold.name << " (gold) vs " << scarlet.name << " (scarlet): " << score << " / " << games << '\n';
  } else {
    std::cout << table.str();
  }
  return kOk;
}

int cmd_evolve(const Common& c, int generations, std::optional<int> lambda, int games, double sigma,
               const std::string& opponents, int opening, const std::string& checkpoint) {
  const fs::path out = out_dir(c);
  fs::create_directories(out);
  Common opp_budget = c;
  if (!opp_budget.depth && !opp_budget.time_ms) opp_budget.depth = 2;
  FitnessSpec spec;
  spec.depth = opp_budget.depth.value_or(2);
  spec.games_per_opponent = games;
  spec.random_opening_plies = opening;
  std::stringstream list(opponents);
  std::string item;
  std::uint64_t k = 0;
  while (std::getline(list, item, ','))
    if (!item.empty()) spec.opponents.push_back(agent_from_spec(item, opp_budget, mix_seed(c.seed, 100 + k++)));
  if (spec.opponents.empty()) throw UsageError("--opponents is empty");

  EvolutionOptions opt;
  opt.generations = generations;
  opt.lambda = lambda;
  opt.sigma0 = sigma;
  opt.seed = c.seed;
  opt.jobs = c.jobs;
  opt.checkpoint = inside_out(out, checkpoint);
  opt.on_generation = [](const GenerationLog& g) {
    std::cerr << "generation " << g.generation << ": best " << g.best_fitness << ", mean " << g.mean_fitness
              << ", sigma " << g.sigma << ", re-evaluated " << g.reevaluated << '\n';
  };
  const Theta initial = c.theta ? load_theta(*c.theta) : Theta::identity();
  const EvolutionResult r = run_evolution(initial, spec, opt);

  save_theta(r.best_theta, out / "best.theta");
  std::ostringstream log;
  log << "generation\tbest_fitness\tmean_fitness\tsigma\treevaluated\tbest_ever\n";
  for (const auto& g : r.history) {
    log << g.generation << '\t' << fmt("%.17g", g.best_fitness) << '\t' << fmt("%.17g", g.mean_fitness) << '\t'
        << fmt("%.17g", g.sigma) << '\t' << fmt("%.17g", g.reevaluated) << '\t' << fmt("%.17g", g.best_ever) << '\n';
  }
  write_file(out / "evolve.tsv", log.str());
  if (c.pretty) {
    std::cout << "best fitness " << fmt("%.4f", r.best_fitness) << " after " << r.history.size()
              << " generations; theta written to " << (out / "best.theta").string() << '\n';
  } else {
    std::cout << log.str();
  }
  return kOk;
}

std::vector<AgentConfig> load_entrants(const std::string& path, const Common& c) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.is_object() && j.contains("entrants")) j = j.at("entrants");
  if (!j.is_array() || j.empty()) throw ParseError(path + ": expected a non-empty array of agents");
  std::vector<AgentConfig> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    json e = j[i];
    if (e.is_object() && !e.contains("seed")) e["seed"] = mix_seed(c.seed, 1000 + i);
    AgentConfig a = agent_from_json(e, default_data_dir(), fs::path(path).parent_path());
    if (!e.contains("depth") && !e.contains("time_ms")) apply_budget(a, c);
    out.push_back(a);
  }
  return out;
}

std::vector<AgentConfig> default_entrants(const Common& c) {
  std::vector<AgentConfig> e;
  const auto data = default_data_dir();
  if (c.theta) e.push_back(minimax_agent("dragonfish-post", load_theta(*c.theta), 2));
  e.push_back(minimax_agent("dragonfish-pre", Theta::identity(), 2));
  e.push_back(minimax_agent("gygax", preset_theta("gygax", data), 2));
  e.push_back(minimax_agent("jackman", preset_theta("jackman", data), 2));
  for (auto& a : e) apply_budget(a, c);
  for (int i = 1; i <= 4; ++i) e.push_back(random_agent("random-" + std::to_string(i), mix_seed(c.seed, 1000 + i)));
  return e;
}

int cmd_tournament(const Common& c, int rounds, const std::optional<std::string>& entrants_file, int opening) {
  const auto entrants = entrants_file ? load_entrants(*entrants_file, c) : default_entrants(c);
  const fs::path out = out_dir(c);
  TournamentOptions opt;
  opt.rounds = rounds;
  opt.seed = c.seed;
  opt.jobs = c.jobs;
  opt.random_opening_plies = opening;
  opt.on_round = [](int round, const std::vector<GameOutcome>& games) {
    std::cerr << "round " << round + 1 << ": " << games.size() << " games\n";
  };
  const TournamentResult r = run_tournament(entrants, opt);

  std::ostringstream games;
  games << "round\tboard\tgold\tscarlet\tresult\tplies\n";
  for (std::size_t round = 0; round < r.rounds.size(); ++round) {
    for (std::size_t b = 0; b < r.rounds[round].size(); ++b) {
      const auto& o = r.rounds[round][b];
      char name[48];
      std::snprintf(name, sizeof name, "round_%03zu_board_%02zu.game", round + 1, b + 1);
      write_file(out / "games" / name, game_record_to_text(o.record));
      games << round + 1 << '\t' << b + 1 << '\t' << o.record.gold << '\t' << o.record.scarlet << '\t'
            << result_name(o.record.result) << '\t' << o.record.plies() << '\n';
    }
  }
  write_file(out / "games.tsv", games.str());
  write_file(out / "standings.tsv", standings_table(r.state));
  std::cout << standings_table(r.state, c.pretty);
  return kOk;
}

int cmd_serve(const Common& c, const std::string& host, int port, bool archive) {
  ServiceOptions opt;
  opt.data_dir = default_data_dir();
  if (c.time_ms) opt.default_budget_ms = *c.time_ms;
  if (archive) opt.archive_dir = out_dir(c) / "games";
  GameService service(opt);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  std::cout << "listening on http://" << host << ':' << bound << std::endl;
  server.listen();
  return kOk;
}

int cmd_eval(const Common& c, const std::optional<std::string>& dpn, const std::optional<std::string>& preset) {
  const Position p = dpn ? from_dpn(*dpn) : initial_position();
  const Theta theta = c.theta ? load_theta(*c.theta) : preset_theta(preset.value_or("identity"), default_data_dir());
  const EvalBreakdown b = evaluate(p, theta);
  for (int i = 0; i < kComponentCount; ++i) {
    const auto comp = static_cast<Component>(i);
    if (c.pretty) {
      std::printf("%-17s %12.2f\n", std::string(component_name(comp)).c_str(), b.components[i]);
    } else {
      std::cout << component_name(comp) << '\t' << fmt("%.17g", b.components[i]) << '\n';
    }
  }
  if (c.pretty) {
    std::printf("%-17s %12.2f\n", "total", b.total);
  } else {
    std::cout << "total\t" << fmt("%.17g", b.total) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dragonchess engine tools"};
  app.require_subcommand(1);
  Common common;

  auto* perft_cmd = app.add_subcommand("perft", "Count leaf nodes of the legal move tree");
  std::optional<std::string> dpn;
  bool divide = false;
  add_common(perft_cmd, common);
  perft_cmd->add_option("--dpn", dpn, "Start position (default: initial)");
  perft_cmd->add_flag("--divide", divide, "Per-move counts");

  auto* play_cmd = app.add_subcommand("play", "Play games between two agents");
  std::string gold_spec, scarlet_spec = "random";
  int games = 1, opening = 0;
  add_common(play_cmd, common);
  play_cmd->add_option("--gold", gold_spec, "random[:seed] | identity | gygax | jackman | agent.json | theta file");
  play_cmd->add_option("--scarlet", scarlet_spec, "Same forms as --gold");
  play_cmd->add_option("--games", games, "Number of games")->check(CLI::PositiveNumber);
  play_cmd->add_option("--random-opening-plies", opening, "Random moves before the agents take over")
      ->check(CLI::NonNegativeNumber);

  auto* evolve_cmd = app.add_subcommand("evolve", "Tune theta with CMA-ES");
  int generations = 10, per_candidate = 4, evolve_opening = 2;
  std::optional<int> lambda;
  double sigma = 0.3;
  std::string opponents = "random,identity", checkpoint = "evolve.checkpoint.json";
  add_common(evolve_cmd, common);
  evolve_cmd->add_option("--generations", generations)->check(CLI::PositiveNumber);
  evolve_cmd->add_option("--lambda", lambda, "Population size")->check(CLI::Range(2, 10000));
  evolve_cmd->add_option("--games-per-candidate", per_candidate, "Games per candidate per opponent")
      ->check(CLI::PositiveNumber);
  evolve_cmd->add_option("--sigma", sigma, "Initial step size")->check(CLI::PositiveNumber);
  evolve_cmd->add_option("--opponents", opponents, "Comma-separated agent specs");
  evolve_cmd->add_option("--random-opening-plies", evolve_opening)->check(CLI::NonNegativeNumber);
  evolve_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file inside --out (resumed if present)");

  auto* tour_cmd = app.add_subcommand("tournament", "Swiss tournament with Elo ratings");
  int rounds = 50, tour_opening = 2;
  std::optional<std::string> entrants;
  add_common(tour_cmd, common);
  tour_cmd->add_option("--rounds", rounds)->check(CLI::PositiveNumber);
  tour_cmd->add_option("--entrants", entrants, "JSON array of agent objects")->check(CLI::ExistingFile);
  tour_cmd->add_option("--random-opening-plies", tour_opening)->check(CLI::NonNegativeNumber);

  auto* serve_cmd = app.add_subcommand("serve", "HTTP/JSON game server");
  std::string host = "127.0.0.1";
  int port = 8080;
  bool archive = false;
  add_common(serve_cmd, common);
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve_cmd->add_flag("--archive", archive, "Write finished games to <out>/games");

  auto* eval_cmd = app.add_subcommand("eval-pos", "Evaluation breakdown of a position");
  std::optional<std::string> eval_dpn, preset;
  add_common(eval_cmd, common);
  eval_cmd->add_option("--dpn", eval_dpn, "Position (default: initial)");
  eval_cmd->add_option("--preset", preset, "identity | gygax | jackman (ignored with --theta)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*perft_cmd) return cmd_perft(common, dpn, divide);
    if (*play_cmd) return cmd_play(common, gold_spec, scarlet_spec, games, opening);
    if (*evolve_cmd) {
      return cmd_evolve(common, generations, lambda, per_candidate, sigma, opponents, evolve_opening, checkpoint);
    }
    if (*tour_cmd) return cmd_tournament(common, rounds, entrants, tour_opening);
    if (*serve_cmd) return cmd_serve(common, host, port, archive);
    if (*eval_cmd) return cmd_eval(common, eval_dpn, preset);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::logic_error& e) {  // domain_error, invalid_argument, ContractViolation
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
