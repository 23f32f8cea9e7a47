#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dragonchess/eval.hpp"
#include "dragonchess/parallel.hpp"
#include "dragonchess/search.hpp"

namespace dragonchess {

// Strategy constants for an n-dimensional problem (textbook defaults).
struct CmaParams {
  int n = 0;
  int lambda = 0;
  int mu = 0;
  std::vector<double> weights;  // positive, descending, sum 1
  double mu_eff = 0;
  double c_sigma = 0;
  double d_sigma = 0;
  double c_c = 0;
  double c_1 = 0;
  double c_mu = 0;
  double chi_n = 0;  // E||N(0, I)||

  static CmaParams defaults(int n, std::optional<int> lambda = std::nullopt);
};

struct CmaState {
  CmaParams params;
  Eigen::VectorXd mean;
  double sigma = 0.3;
  Eigen::MatrixXd C;
  Eigen::VectorXd p_sigma;
  Eigen::VectorXd p_c;
  int generation = 0;
  int rejected = 0;  // candidates with non-finite fitness seen so far

  static CmaState start(const Eigen::VectorXd& mean, double sigma, std::optional<int> lambda = std::nullopt);
};

// Throws std::runtime_error if the covariance cannot be made positive
// definite (non-finite entries).
std::vector<Eigen::VectorXd> ask(const CmaState& state, std::mt19937_64& rng);

// Rank-mu update; higher fitness is better. Non-finite fitness ranks last.
// Throws std::invalid_argument on a size mismatch.
void tell(CmaState& state, const std::vector<Eigen::VectorXd>& candidates, const std::vector<double>& fitness);

// Largest asymmetry |C - C^T| and smallest eigenvalue, for health checks.
double asymmetry(const Eigen::MatrixXd& c);
double min_eigenvalue(const Eigen::MatrixXd& c);

Eigen::VectorXd to_vector(const Theta& theta);
Theta to_theta(const Eigen::VectorXd& v);

struct FitnessSpec {
  std::vector<AgentConfig> opponents;
  int games_per_opponent = 4;
  int depth = 2;
  int random_opening_plies = 2;
};

// Candidate plays every opponent, alternating colours; games 2k and 2k+1
// share a seed with colours swapped. Returns (wins + draws/2) / games.
double evaluate_fitness(const Theta& theta, const FitnessSpec& spec, std::uint64_t seed);

struct GenerationLog {
  int generation = 0;
  double best_fitness = 0;   // best candidate's fitness this generation
  double mean_fitness = 0;
  double sigma = 0;          // step size after the update
  double reevaluated = 0;    // that candidate's fitness on a fresh seed block
  double best_ever = 0;      // running maximum of `reevaluated`
};

struct EvolutionOptions {
  int generations = 10;
  std::optional<int> lambda;
  double sigma0 = 0.3;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::optional<std::filesystem::path> checkpoint;
  std::function<void(const GenerationLog&)> on_generation;
};

struct EvolutionResult {
  Theta best_theta;
  double best_fitness = 0;
  std::vector<GenerationLog> history;
  CmaState state;
};

// ask -> evaluate_fitness -> tell for `generations` generations starting from
// `initial`. With a checkpoint path, state is saved after every generation and
// an existing checkpoint is resumed.
EvolutionResult run_evolution(const Theta& initial, const FitnessSpec& spec, const EvolutionOptions& options);

// Checkpoint I/O (JSON, versioned). Exposed for tests and the CLI.
struct Checkpoint {
  CmaState state;
  std::string rng_state;
  Theta best_theta;
  double best_fitness = -1;
  std::vector<GenerationLog> history;
  std::uint64_t seed = 0;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
// Throws ParseError on malformed or wrong-version files.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dragonchess
