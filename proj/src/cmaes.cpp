#include "dragonchess/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <sstream>

namespace dragonchess {

namespace {

constexpr double kEigenFloor = 1e-12;
constexpr int kCheckpointVersion = 1;
constexpr std::uint64_t kReevalStream = 0x5245u;

using json = nlohmann::json;

// Returns (B, D) with C = B diag(D^2) B^T, flooring eigenvalues.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> decompose(const Eigen::MatrixXd& c) {
  if (!c.allFinite()) throw std::runtime_error("cma-es: covariance has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  if (eig.info() != Eigen::Success) throw std::runtime_error("cma-es: eigendecomposition failed");
  Eigen::VectorXd d = eig.eigenvalues().cwiseMax(kEigenFloor).cwiseSqrt();
  return {eig.eigenvectors(), d};
}

void repair(Eigen::MatrixXd& c) {
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  if (eig.info() != Eigen::Success || !eig.eigenvalues().allFinite()) {
    throw std::runtime_error("cma-es: covariance is not repairable");
  }
  if (eig.eigenvalues().minCoeff() < kEigenFloor) {
    const Eigen::VectorXd floored = eig.eigenvalues().cwiseMax(kEigenFloor);
    c = eig.eigenvectors() * floored.asDiagonal() * eig.eigenvectors().transpose();
    c = 0.5 * (c + c.transpose());
  }
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json& j, int n) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<int>(values.size()) != n) throw ParseError("checkpoint: vector has wrong length");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), n);
}

json log_json(const GenerationLog& g) {
  return {{"generation", g.generation}, {"best_fitness", g.best_fitness}, {"mean_fitness", g.mean_fitness},
          {"sigma", g.sigma},           {"reevaluated", g.reevaluated},   {"best_ever", g.best_ever}};
}

GenerationLog json_log(const json& j) {
  GenerationLog g;
  g.generation = j.at("generation").get<int>();
  g.best_fitness = j.at("best_fitness").get<double>();
  g.mean_fitness = j.at("mean_fitness").get<double>();
  g.sigma = j.at("sigma").get<double>();
  g.reevaluated = j.at("reevaluated").get<double>();
  g.best_ever = j.at("best_ever").get<double>();
  return g;
}

}  // namespace

CmaParams CmaParams::defaults(int n, std::optional<int> lambda) {
  if (n < 1) throw std::invalid_argument("cma-es: dimension must be positive");
  CmaParams p;
  p.n = n;
  p.lambda = lambda.value_or(4 + static_cast<int>(std::floor(3.0 * std::log(n))));
  if (p.lambda < 2) throw std::invalid_argument("cma-es: lambda must be at least 2");
  p.mu = p.lambda / 2;
  double sum = 0;
  for (int i = 0; i < p.mu; ++i) {
    p.weights.push_back(std::log((p.lambda + 1) / 2.0) - std::log(i + 1.0));
    sum += p.weights.back();
  }
  double sq = 0;
  for (double& w : p.weights) {
    w /= sum;
    sq += w * w;
  }
  p.mu_eff = 1.0 / sq;
  const double nd = n;
  p.c_sigma = (p.mu_eff + 2) / (nd + p.mu_eff + 5);
  p.d_sigma = 1 + 2 * std::max(0.0, std::sqrt((p.mu_eff - 1) / (nd + 1)) - 1) + p.c_sigma;
  p.c_c = (4 + p.mu_eff / nd) / (nd + 4 + 2 * p.mu_eff / nd);
  p.c_1 = 2 / ((nd + 1.3) * (nd + 1.3) + p.mu_eff);
  p.c_mu = std::min(1 - p.c_1, 2 * (p.mu_eff - 2 + 1 / p.mu_eff) / ((nd + 2) * (nd + 2) + p.mu_eff));
  p.chi_n = std::sqrt(nd) * (1 - 1 / (4 * nd) + 1 / (21 * nd * nd));
  return p;
}

CmaState CmaState::start(const Eigen::VectorXd& mean, double sigma, std::optional<int> lambda) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw std::invalid_argument("cma-es: sigma must be positive");
  CmaState s;
  const int n = static_cast<int>(mean.size());
  s.params = CmaParams::defaults(n, lambda);
  s.mean = mean;
  s.sigma = sigma;
  s.C = Eigen::MatrixXd::Identity(n, n);
  s.p_sigma = Eigen::VectorXd::Zero(n);
  s.p_c = Eigen::VectorXd::Zero(n);
  return s;
}

std::vector<Eigen::VectorXd> ask(const CmaState& state, std::mt19937_64& rng) {
  const auto [b, d] = decompose(state.C);
  const Eigen::MatrixXd transform = b * d.asDiagonal();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(state.params.lambda);
  const int n = state.params.n;
  for (int k = 0; k < state.params.lambda; ++k) {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = normal(rng);
    out.push_back(state.mean + state.sigma * (transform * z));
  }
  return out;
}

void tell(CmaState& state, const std::vector<Eigen::VectorXd>& candidates, const std::vector<double>& fitness) {
  const CmaParams& p = state.params;
  if (static_cast<int>(candidates.size()) != p.lambda || fitness.size() != candidates.size()) {
    throw std::invalid_argument("cma-es: expected one fitness per candidate");
  }
  std::vector<int> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  int bad = 0;
  for (double f : fitness) bad += !std::isfinite(f);
  if (bad > 0) {
    state.rejected += bad;
    std::cerr << "warning: cma-es generation " << state.generation << ": " << bad
              << " candidate(s) with non-finite fitness ranked last\n";
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const bool fa = std::isfinite(fitness[a]), fb = std::isfinite(fitness[b]);
    if (fa != fb) return fa;
    return fa && fitness[a] > fitness[b];
  });

  const int n = p.n;
  const auto [b, d] = decompose(state.C);
  const Eigen::MatrixXd inv_sqrt = b * d.cwiseInverse().asDiagonal() * b.transpose();

  Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < p.mu; ++i) {
    const Eigen::VectorXd y = (candidates[order[i]] - state.mean) / state.sigma;
    y_w += p.weights[i] * y;
    rank_mu += p.weights[i] * y * y.transpose();
  }
  state.mean += state.sigma * y_w;

  state.p_sigma = (1 - p.c_sigma) * state.p_sigma + std::sqrt(p.c_sigma * (2 - p.c_sigma) * p.mu_eff) * (inv_sqrt * y_w);
  const double ps_norm = state.p_sigma.norm();
  const double decay = 1 - std::pow(1 - p.c_sigma, 2.0 * (state.generation + 1));
  const bool h_sigma = ps_norm / std::sqrt(decay) < (1.4 + 2.0 / (n + 1)) * p.chi_n;
  state.p_c = (1 - p.c_c) * state.p_c;
  if (h_sigma) state.p_c += std::sqrt(p.c_c * (2 - p.c_c) * p.mu_eff) * y_w;

  const double delta = h_sigma ? 0.0 : p.c_c * (2 - p.c_c);
  state.C = (1 + p.c_1 * delta - p.c_1 - p.c_mu) * state.C + p.c_1 * state.p_c * state.p_c.transpose() +
            p.c_mu * rank_mu;
  repair(state.C);

  state.sigma *= std::exp((p.c_sigma / p.d_sigma) * (ps_norm / p.chi_n - 1));
  if (!std::isfinite(state.sigma) || !state.mean.allFinite()) throw std::runtime_error("cma-es: state became non-finite");
  ++state.generation;
}

double asymmetry(const Eigen::MatrixXd& c) { return (c - c.transpose()).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Eigen::VectorXd to_vector(const Theta& theta) { return Eigen::Map<const Eigen::VectorXd>(theta.w.data(), kThetaSize); }

Theta to_theta(const Eigen::VectorXd& v) {
  if (v.size() != kThetaSize) throw std::invalid_argument("theta needs 25 entries");
  Theta t;
  for (int i = 0; i < kThetaSize; ++i) t.w[i] = v[i];
  return t;
}

double evaluate_fitness(const Theta& theta, const FitnessSpec& spec, std::uint64_t seed) {
  if (spec.games_per_opponent < 1) throw std::invalid_argument("fitness: games per opponent must be at least 1");
  if (spec.opponents.empty()) throw std::invalid_argument("fitness: opponent pool is empty");
  const AgentConfig candidate = minimax_agent("candidate", theta, spec.depth);
  const GameOptions options{spec.random_opening_plies};
  double score = 0;
  int games = 0;
  for (std::size_t j = 0; j < spec.opponents.size(); ++j) {
    for (int g = 0; g < spec.games_per_opponent; ++g) {
      const std::uint64_t game_seed = mix_seed(mix_seed(seed, j), static_cast<std::uint64_t>(g / 2));
      const bool as_gold = g % 2 == 0;
      const GameRecord r = as_gold ? play_game(candidate, spec.opponents[j], game_seed, options)
                                   : play_game(spec.opponents[j], candidate, game_seed, options);
      score += as_gold ? r.gold_score() : 1.0 - r.gold_score();
      ++games;
    }
  }
  return score / games;
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  const CmaState& s = c.state;
  json c_rows = json::array();
  for (int r = 0; r < s.C.rows(); ++r) c_rows.push_back(vec_json(s.C.row(r).transpose()));
  json history = json::array();
  for (const auto& g : c.history) history.push_back(log_json(g));
  json j = {{"format", "dragonfish-cmaes-checkpoint"},
            {"version", kCheckpointVersion},
            {"seed", c.seed},
            {"lambda", s.params.lambda},
            {"generation", s.generation},
            {"rejected", s.rejected},
            {"sigma", s.sigma},
            {"mean", vec_json(s.mean)},
            {"C", c_rows},
            {"p_sigma", vec_json(s.p_sigma)},
            {"p_c", vec_json(s.p_c)},
            {"rng", c.rng_state},
            {"best_theta", std::vector<double>(c.best_theta.w.begin(), c.best_theta.w.end())},
            {"best_fitness", c.best_fitness},
            {"history", history}};
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << j.dump(1) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("checkpoint: cannot read " + path.string());
  try {
    const json j = json::parse(in);
    if (j.at("format") != "dragonfish-cmaes-checkpoint") throw ParseError("checkpoint: unknown format");
    if (j.at("version").get<int>() != kCheckpointVersion) throw ParseError("checkpoint: unsupported version");
    Checkpoint c;
    const auto mean = j.at("mean").get<std::vector<double>>();
    const int n = static_cast<int>(mean.size());
    c.state = CmaState::start(Eigen::Map<const Eigen::VectorXd>(mean.data(), n), j.at("sigma").get<double>(),
                              j.at("lambda").get<int>());
    c.state.generation = j.at("generation").get<int>();
    c.state.rejected = j.at("rejected").get<int>();
    const auto& rows = j.at("C");
    if (static_cast<int>(rows.size()) != n) throw ParseError("checkpoint: covariance has wrong size");
    for (int r = 0; r < n; ++r) c.state.C.row(r) = json_vec(rows[r], n).transpose();
    c.state.p_sigma = json_vec(j.at("p_sigma"), n);
    c.state.p_c = json_vec(j.at("p_c"), n);
    c.rng_state = j.at("rng").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto best = j.at("best_theta").get<std::vector<double>>();
    if (best.size() != kThetaSize) throw ParseError("checkpoint: best theta has wrong length");
    std::copy(best.begin(), best.end(), c.best_theta.w.begin());
    c.best_fitness = j.at("best_fitness").get<double>();
    for (const auto& g : j.at("history")) c.history.push_back(json_log(g));
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
}

EvolutionResult run_evolution(const Theta& initial, const FitnessSpec& spec, const EvolutionOptions& options) {
  if (options.generations < 1) throw std::invalid_argument("evolution: generations must be at least 1");
  Checkpoint cp;
  std::mt19937_64 rng(options.seed);
  if (options.checkpoint && std::filesystem::exists(*options.checkpoint)) {
    cp = load_checkpoint(*options.checkpoint);
    if (cp.seed != options.seed) throw std::invalid_argument("evolution: checkpoint was written with another seed");
    std::istringstream(cp.rng_state) >> rng;
  } else {
    cp.state = CmaState::start(to_vector(initial), options.sigma0, options.lambda);
    cp.seed = options.seed;
    cp.best_theta = initial;
    cp.best_fitness = -1;
  }

  while (cp.state.generation < options.generations) {
    const int gen = cp.state.generation;
    const auto candidates = ask(cp.state, rng);
    // Common random numbers: every candidate faces the same game seeds.
    const std::uint64_t block = mix_seed(options.seed, static_cast<std::uint64_t>(gen));
    std::vector<double> fitness(candidates.size());
    parallel_for(static_cast<int>(candidates.size()), options.jobs, [&](int i) {
      fitness[i] = evaluate_fitness(to_theta(candidates[i]), spec, block);
    });
    int top = 0;
    double sum = 0;
    for (int i = 0; i < static_cast<int>(fitness.size()); ++i) {
      sum += fitness[i];
      if (fitness[i] > fitness[top]) top = i;
    }
    const Theta top_theta = to_theta(candidates[top]);
    const double re = evaluate_fitness(top_theta, spec, mix_seed(block, kReevalStream));
    tell(cp.state, candidates, fitness);
    if (re > cp.best_fitness) {
      cp.best_fitness = re;
      cp.best_theta = top_theta;
    }
    GenerationLog log;
    log.generation = gen;
    log.best_fitness = fitness[top];
    log.mean_fitness = sum / fitness.size();
    log.sigma = cp.state.sigma;
    log.reevaluated = re;
    log.best_ever = cp.best_fitness;
    cp.history.push_back(log);
    if (options.checkpoint) {
      std::ostringstream rng_text;
      rng_text << rng;
      cp.rng_state = rng_text.str();
      save_checkpoint(cp, *options.checkpoint);
    }
    if (options.on_generation) options.on_generation(log);
  }

  EvolutionResult result;
  result.best_theta = cp.best_theta;
  result.best_fitness = cp.best_fitness;
  result.history = cp.history;
  result.state = cp.state;
  return result;
}

}  // namespace dragonchess
