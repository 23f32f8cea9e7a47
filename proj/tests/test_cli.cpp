#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dragonchess/cmaes.hpp"

using namespace dragonchess;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI inside `cwd` and captures stdout.
Run run(const std::string& args, const fs::path& cwd, const std::string& env = "") {
  const std::string cmd = "cd '" + cwd.string() + "' && " + env + " '" DRAGONFISH_BIN "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dragonfish_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Relative path -> contents for every file under `dir`.
std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return files;
}

std::set<std::string> top_level(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

}  // namespace

TEST_CASE("perft passes through the move generator") {
  const auto cwd = scratch("perft");
  const Run r = run("perft --depth 2", cwd);
  CHECK(r.code == 0);
  CHECK(r.out == std::to_string(perft(initial_position(), 2)) + "\n");
  CHECK(top_level(cwd).empty());
}

TEST_CASE("exit codes") {
  const auto cwd = scratch("codes");
  CHECK(run("", cwd).code == 2);
  CHECK(run("perft --bogus", cwd).code == 2);
  CHECK(run("perft --depth 0", cwd).code == 2);
  CHECK(run("frobnicate", cwd).code == 2);
  std::ofstream(cwd / "bad.theta") << "1\n2\nthree\n";
  CHECK(run("eval-pos --theta bad.theta", cwd).code == 3);
  CHECK(run("eval-pos --theta missing.theta", cwd).code == 3);
  CHECK(run("perft --dpn garbage", cwd).code == 3);
  std::ofstream(cwd / "entrants.json") << "[{\"kind\": \"minimax\", \"preset\": \"nobody\"}]";
  CHECK(run("tournament --entrants entrants.json --out o", cwd).code == 3);
  // A position without a Gold King cannot be evaluated.
  Position p = empty_position();
  p.set({1, 7, 6}, -11);
  CHECK(run("eval-pos --dpn '" + to_dpn(p) + "'", cwd).code == 4);
  CHECK(run("evolve --checkpoint ../elsewhere.json --out o --generations 1", cwd).code == 2);
  CHECK_FALSE(fs::exists(cwd.parent_path() / "elsewhere.json"));
  CHECK(run("perft --help", cwd).code == 0);
}

TEST_CASE("eval-pos prints the breakdown") {
  const auto cwd = scratch("eval");
  const Run r = run("eval-pos", cwd);
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(line.find('\t') != std::string::npos);
  }
  CHECK(lines == kComponentCount + 1);
  CHECK(r.out.rfind("material\t0\n", 0) == 0);
  CHECK(r.out.find("total\t0\n") != std::string::npos);
}

TEST_CASE("play is byte-reproducible and stays inside --out") {
  const auto cwd = scratch("play");
  const Run a = run("play --games 3 --depth 1 --seed 11 --random-opening-plies 2 --out a", cwd);
  const Run b = run("play --games 3 --depth 1 --seed 11 --random-opening-plies 2 --out b --jobs 2", cwd);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  const auto ta = tree(cwd / "a");
  CHECK(ta.size() == 4);
  CHECK(ta == tree(cwd / "b"));
  CHECK(top_level(cwd) == std::set<std::string>{"a", "b"});
  for (const auto& [name, text] : ta)
    if (name.find(".game") != std::string::npos) CHECK(game_record_from_text(text).plies() > 0);
}

TEST_CASE("DRAGONFISH_OUT sets the default output directory") {
  const auto cwd = scratch("env");
  const auto target = cwd / "from_env";
  REQUIRE(run("play --games 1 --depth 1", cwd, "DRAGONFISH_OUT='" + target.string() + "'").code == 0);
  CHECK(fs::exists(target / "play.tsv"));
  CHECK(top_level(cwd) == std::set<std::string>{"from_env"});
}

TEST_CASE("tournament reruns give identical standings") {
  const auto cwd = scratch("tournament");
  const Run a = run("tournament --rounds 5 --depth 2 --seed 7 --out a", cwd);
  const Run b = run("tournament --rounds 5 --depth 2 --seed 7 --out b --jobs 2", cwd);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(cwd / "a" / "standings.tsv") == slurp(cwd / "b" / "standings.tsv"));
  CHECK(tree(cwd / "a") == tree(cwd / "b"));
  CHECK(slurp(cwd / "a" / "standings.tsv").rfind("agent\twins\tlosses\tdraws\telo\n", 0) == 0);

  std::ofstream(cwd / "field.json") << R"([{"kind": "random", "name": "r1"}, {"kind": "random", "name": "r2"},
                                           {"kind": "minimax", "preset": "identity", "name": "d1", "depth": 1}])";
  const Run c = run("tournament --rounds 2 --entrants field.json --out c", cwd);
  REQUIRE(c.code == 0);
  CHECK(c.out.find("d1\t") != std::string::npos);
}

TEST_CASE("evolve smoke run writes a parseable checkpoint and theta") {
  const auto cwd = scratch("evolve");
  const std::string args = "evolve --generations 1 --lambda 4 --games-per-candidate 2 --depth 1 --seed 3 --out ";
  REQUIRE(run(args + "a", cwd).code == 0);
  const Theta theta = load_theta(cwd / "a" / "best.theta");
  const Checkpoint cp = load_checkpoint(cwd / "a" / "evolve.checkpoint.json");
  CHECK(cp.state.generation == 1);
  CHECK(cp.best_theta == theta);
  CHECK(cp.state.params.lambda == 4);

  REQUIRE(run(args + "b", cwd).code == 0);
  CHECK(tree(cwd / "a") == tree(cwd / "b"));
  CHECK(top_level(cwd) == std::set<std::string>{"a", "b"});
}
