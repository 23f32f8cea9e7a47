// Acceptance checks: one PASS/FAIL line per criterion.
//   acceptance [movegen|perft|antisymmetry|material|cmaes|evolution|tournament|determinism]...
// With no arguments every criterion runs. Exit status is nonzero if any fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "dragonchess/cmaes.hpp"
#include "dragonchess/tournament.hpp"
#include "oracle/naive_movegen.hpp"
#include "oracle/playout.hpp"

using namespace dragonchess;
namespace fs = std::filesystem;

namespace {

// perft(initial, 3), agreed on by the fast generator and the naive oracle.
constexpr std::uint64_t kPerft3 = 487725;

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<Move> sorted(std::vector<Move> v) {
  std::sort(v.begin(), v.end(), [](const Move& a, const Move& b) {
    return std::tie(a.from, a.to, a.kind) < std::tie(b.from, b.to, b.kind);
  });
  return v;
}

Outcome movegen() {
  const auto positions = testing::random_positions(1000, 2024);
  int mismatches = 0;
  for (const Position& p : positions) {
    const auto fast = legal_moves(p);
    if (sorted({fast.begin(), fast.end()}) != sorted(oracle::naive_legal_moves(p))) ++mismatches;
  }

  int checked = 0, broken = 0;
  for (const Position& start : testing::random_positions(400, 77)) {
    Position p = start;
    for (const Move& m : legal_moves(start)) {
      make_move(p, m);
      if (!(p == apply_move(start, m))) ++broken;
      unmake_move(p, m);
      if (!(p == start)) ++broken;
      if (++checked == 10000) break;
    }
    if (checked == 10000) break;
  }
  std::ostringstream d;
  d << "1000 positions, " << mismatches << " move-list mismatches; " << checked << " make/unmake round-trips, "
    << broken << " inexact";
  return {mismatches == 0 && broken == 0 && checked == 10000, d.str()};
}

Outcome perft3() {
  const Position p = initial_position();
  const auto fast = perft(p, 3);
  const auto naive = oracle::naive_perft(p, 3);
  std::ostringstream d;
  d << "fast " << fast << ", naive " << naive << ", reference " << kPerft3;
  return {fast == naive && fast == kPerft3, d.str()};
}

bool integral(double v) { return std::isfinite(v) && v == std::floor(v); }

Outcome antisymmetry() {
  const auto positions = testing::random_positions(1000, 99);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<Theta> thetas;
  for (int t = 0; t < 20; ++t) {
    Theta th;
    for (double& w : th.w) w = u(rng);
    thetas.push_back(th);
  }
  int failures = 0;
  double worst = 0;
  for (const Position& p : positions) {
    if (!king_square(p, Color::Gold) || !king_square(p, Color::Scarlet)) continue;
    const Position m = mirror(p);
    for (const Theta& th : thetas) {
      const EvalBreakdown a = evaluate(p, th), b = evaluate(m, th);
      for (int c = 0; c < kComponentCount; ++c) {
        const double x = a.components[c], y = b.components[c];
        if (integral(x) ? y != -x : std::abs(x + y) > 1e-9 * std::max(1.0, std::abs(x))) ++failures;
      }
      const double rel = std::abs(a.total + b.total) / std::max(1.0, std::abs(a.total));
      worst = std::max(worst, rel);
      if (rel > 1e-9) ++failures;
    }
  }
  std::ostringstream d;
  d << "1000 positions x 20 theta, " << failures << " violations, worst relative error " << worst;
  return {failures == 0, d.str()};
}

Outcome material_fidelity() {
  // Centipawn values per piece class, with the kinds each class covers.
  const std::vector<std::pair<Kind, double>> expected = {
      {Kind::Sylph, 100},   {Kind::Warrior, 100}, {Kind::Dwarf, 100},   {Kind::Unicorn, 320},
      {Kind::Basilisk, 320}, {Kind::Cleric, 330}, {Kind::Mage, 330},    {Kind::Hero, 500},
      {Kind::Thief, 500},   {Kind::Oliphant, 500}, {Kind::Dragon, 900}, {Kind::King, 20000}};
  const Position start = initial_position();
  const Theta id = Theta::identity();
  const double base = material(start, id);
  int ok = 0;
  std::ostringstream bad;
  for (const auto& [kind, value] : expected) {
    bool kind_ok = true;
    for (Color c : {Color::Gold, Color::Scarlet}) {
      for (int sq = 0; sq < kNumSquares; ++sq) {
        const PieceCode code = start.cells[sq];
        if (code == 0 || kind_of(code) != kind || color_of(code) != c) continue;
        Position p = start;
        p.cells[sq] = 0;
        const double delta = material(p, id) - base;
        const double want = c == Color::Gold ? -value : value;
        if (delta != want) {
          kind_ok = false;
          bad << ' ' << kind_name(kind) << '@' << sq << '=' << delta;
        }
      }
    }
    ok += kind_ok;
  }
  std::ostringstream d;
  d << ok << "/12 mapped kinds exact" << bad.str();
  return {ok == 12, d.str()};
}

double sphere(const Eigen::VectorXd& x) { return (x - Eigen::VectorXd::Ones(x.size())).squaredNorm(); }

double rosenbrock(const Eigen::VectorXd& x) {
  double f = 0;
  for (int i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i], b = 1 - x[i];
    f += 100 * a * a + b * b;
  }
  return f;
}

struct Minimised {
  CmaState state;
  int evaluations = 0;
  double best = INFINITY;
  bool healthy = true;
};

template <class F, class Stop>
Minimised minimise(F f, int n, int budget, std::uint64_t seed, Stop stop) {
  Minimised run{CmaState::start(Eigen::VectorXd::Zero(n), 0.3)};
  std::mt19937_64 rng(seed);
  while (run.evaluations < budget && !stop(run)) {
    const auto xs = ask(run.state, rng);
    std::vector<double> fitness;
    for (const auto& x : xs) {
      const double v = f(x);
      run.best = std::min(run.best, v);
      fitness.push_back(-v);
    }
    run.evaluations += static_cast<int>(xs.size());
    tell(run.state, xs, fitness);
    run.healthy = run.healthy && asymmetry(run.state.C) <= 1e-12 && min_eigenvalue(run.state.C) > 0;
  }
  return run;
}

Outcome cmaes() {
  const auto s = minimise(sphere, 25, 10000, 11, [](const Minimised& r) {
    return (r.state.mean - Eigen::VectorXd::Ones(25)).norm() < 1e-5;
  });
  const double dist = (s.state.mean - Eigen::VectorXd::Ones(25)).norm();
  const auto r = minimise(rosenbrock, 10, 50000, 3, [](const Minimised& m) { return m.best < 1e-6; });
  std::ostringstream d;
  d << "sphere distance " << dist << " after " << s.evaluations << " evals; rosenbrock " << r.best << " after "
    << r.evaluations << " evals; covariance symmetric PD throughout: " << (s.healthy && r.healthy ? "yes" : "no");
  return {dist < 1e-5 && s.evaluations <= 10000 && r.best < 1e-6 && r.evaluations <= 50000 && s.healthy && r.healthy,
          d.str()};
}

Outcome evolution() {
  const AgentConfig identity = minimax_agent("identity", Theta::identity(), 2);
  FitnessSpec spec;
  spec.opponents = {random_agent("random", 41), identity};
  spec.games_per_opponent = 4;
  spec.depth = 2;
  EvolutionOptions opt;
  opt.generations = 10;
  opt.lambda = 8;
  opt.seed = 2025;
  opt.jobs = default_jobs();
  opt.on_generation = [](const GenerationLog& g) {
    std::cerr << "  generation " << g.generation << ": best " << g.best_fitness << ", mean " << g.mean_fitness
              << ", re-evaluated " << g.reevaluated << ", sigma " << g.sigma << std::endl;
  };
  const EvolutionResult r = run_evolution(Theta::identity(), spec, opt);

  FitnessSpec match;
  match.opponents = {identity};
  match.games_per_opponent = 100;
  match.depth = 2;
  const double score = evaluate_fitness(r.best_theta, match, mix_seed(opt.seed, 0x6d61746368));
  std::ostringstream d;
  d << "theta* scored " << score * 100 << "% over 100 depth-2 games vs identity (need >= 55%); evolution best "
    << r.best_fitness;
  return {score >= 0.55, d.str()};
}

Outcome tournament() {
  const std::vector<AgentConfig> field = {random_agent("random-a", 1), random_agent("random-b", 2),
                                          minimax_agent("depth-1", Theta::identity(), 1),
                                          minimax_agent("depth-2", Theta::identity(), 2)};
  TournamentOptions opt;
  opt.rounds = 50;
  opt.seed = 50;
  opt.jobs = default_jobs();
  const auto r = run_tournament(field, opt);
  std::map<std::string, double> elo;
  double sum = 0;
  for (const auto& s : r.state.standings) {
    elo[s.name] = s.elo;
    sum += s.elo;
  }
  const bool ordered = elo["depth-2"] > elo["depth-1"] && elo["depth-1"] > std::max(elo["random-a"], elo["random-b"]);
  std::ostringstream d;
  d.precision(10);
  d << "elo depth-2 " << elo["depth-2"] << ", depth-1 " << elo["depth-1"] << ", randoms " << elo["random-a"] << " / "
    << elo["random-b"] << "; sum " << sum;
  return {ordered && sum == 1500.0 * 4, d.str()};
}

// Runs the CLI in `cwd`; returns its exit status.
int cli(const std::string& args, const fs::path& cwd) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" DRAGONFISH_BIN "' " + args + " >stdout.txt 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream f(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "dragonfish_acceptance_determinism";
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"play", "play --games 4 --depth 2 --seed 9 --random-opening-plies 2"},
      {"tournament", "tournament --rounds 5 --depth 2 --seed 9"},
      {"evolve", "evolve --generations 2 --lambda 4 --games-per-candidate 2 --depth 1 --seed 9"}};
  std::ostringstream d;
  bool pass = true;
  for (const auto& [name, args] : runs) {
    std::map<std::string, std::string> first;
    bool same = true;
    std::size_t files = 0;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path cwd = root / (name + std::to_string(rep));
      fs::remove_all(cwd);
      fs::create_directories(cwd);
      const int code = cli(args + " --jobs " + std::to_string(rep + 1) + " --out out", cwd);
      auto files_now = tree(cwd);
      same = same && code == 0;
      if (rep == 0) {
        first = std::move(files_now);
        files = first.size();
      } else {
        same = same && files_now == first;
      }
    }
    pass = pass && same && files > 1;
    d << name << ' ' << (same ? "identical" : "DIFFERENT") << " (" << files << " files); ";
  }
  fs::remove_all(root);
  return {pass, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"movegen", movegen},         {"perft", perft3},           {"antisymmetry", antisymmetry},
      {"material", material_fidelity}, {"cmaes", cmaes},         {"evolution", evolution},
      {"tournament", tournament},   {"determinism", determinism}};
  std::vector<std::string> selected(argv + 1, argv + argc);
  for (const auto& s : selected) {
    if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == s; })) {
      std::cerr << "unknown criterion '" << s << "'\n";
      return 2;
    }
  }
  bool all = true;
  for (const auto& [name, run] : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
