#include "dragonchess/service.hpp"

#include "dragonchess/agents.hpp"
#include "dragonchess/eval.hpp"

namespace dragonchess {

using json = nlohmann::json;

namespace {

std::string colour_name(Color c) { return c == Color::Gold ? "gold" : "scarlet"; }

std::string kind_text(MoveKind k) {
  switch (k) {
    case MoveKind::RemoteCapture: return "remote";
    case MoveKind::Promotion: return "promotion";
    default: return "normal";
  }
}

json controller_json(const Controller& c) {
  if (c.is_human()) return {{"kind", "human"}};
  return agent_to_json(*c.agent);
}

}  // namespace

json breakdown_json(const EvalBreakdown& b) {
  json comps = json::object();
  for (int i = 0; i < kComponentCount; ++i) comps[std::string(component_name(static_cast<Component>(i)))] = b.components[i];
  return {{"components", comps}, {"total", b.total}};
}

json move_json(const Move& m) {
  return {{"from", square_name(m.from)}, {"to", square_name(m.to)},  {"text", move_to_text(m)},
          {"kind", kind_text(m.kind)},   {"capture", m.is_capture()}};
}

GameService::GameService(ServiceOptions options) : options_(std::move(options)) {
  if (options_.data_dir.empty()) options_.data_dir = default_data_dir();
}

GameService::~GameService() {
  std::lock_guard lock(workers_mutex_);
  for (auto& t : workers_)
    if (t.joinable()) t.join();
}

Controller GameService::controller_from_json(const json& j) const {
  if (j.is_string() && j.get<std::string>() == "human") return Controller::human();
  if (j.is_object() && j.value("kind", "") == "human") return Controller::human();
  try {
    return Controller::engine(agent_from_json(j, options_.data_dir));
  } catch (const ParseError& e) {
    throw ServiceError(400, e.what());
  }
}

std::string GameService::create_session(Controller gold, Controller scarlet, std::optional<Position> start) {
  auto s = std::make_shared<Session>();
  s->start = start ? *start : initial_position();
  s->position = s->start;
  s->result = terminal_state(s->position);
  s->gold = std::move(gold);
  s->scarlet = std::move(scarlet);
  std::lock_guard lock(sessions_mutex_);
  s->id = "g" + std::to_string(next_id_++);
  sessions_[s->id] = s;
  return s->id;
}

std::string GameService::create_session(const json& body) {
  if (!body.is_object()) throw ServiceError(400, "request body must be a JSON object");
  const json gold = body.contains("gold") ? body.at("gold") : json("human");
  const json scarlet = body.contains("scarlet") ? body.at("scarlet") : json("human");
  std::optional<Position> start;
  if (body.contains("dpn")) {
    try {
      start = from_dpn(body.at("dpn").get<std::string>());
    } catch (const ParseError& e) {
      throw ServiceError(400, e.what());
    } catch (const std::exception& e) {
      throw ServiceError(400, std::string("bad dpn: ") + e.what());
    }
  }
  return create_session(controller_from_json(gold), controller_from_json(scarlet), start);
}

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "no such game '" + id + "'");
  return it->second;
}

json GameService::state_locked(const Session& s) const {
  const Position& p = s.position;
  json cells = json::array();
  for (int sq = 0; sq < kNumSquares; ++sq) {
    const PieceCode code = p.cells[sq];
    json cell = {{"square", square_name(sq)}, {"level", level_of(sq)}, {"rank", rank_of(sq)},
                 {"file", file_of(sq)},       {"code", code}};
    if (code != 0) {
      cell["kind"] = std::string(kind_name(kind_of(code)));
      cell["color"] = colour_name(color_of(code));
      cell["frozen"] = is_frozen_at(p, sq);
    }
    cells.push_back(cell);
  }
  json history = json::array();
  for (const Move& m : s.history) history.push_back(move_to_text(m));
  return {{"id", s.id},
          {"dpn", to_dpn(p)},
          {"side_to_move", colour_name(p.side_to_move)},
          {"ply", p.ply_count},
          {"halfmove_clock", p.halfmove_clock},
          {"status", s.result == GameResult::Ongoing ? "ongoing" : "finished"},
          {"result", std::string(result_name(s.result))},
          {"in_check", king_square(p, p.side_to_move) ? in_check(p, p.side_to_move) : false},
          {"pending", s.pending},
          {"last_error", s.last_error},
          {"controllers", {{"gold", controller_json(s.gold)}, {"scarlet", controller_json(s.scarlet)}}},
          {"history", history},
          {"last_move", s.history.empty() ? json(nullptr) : json(move_to_text(s.history.back()))},
          {"cells", cells}};
}

json GameService::state(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return state_locked(*s);
}

json GameService::legal(const std::string& id, const std::optional<std::string>& from) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  std::optional<int> origin;
  if (from) {
    try {
      origin = parse_square(*from);
    } catch (const ParseError& e) {
      throw ServiceError(400, e.what());
    }
  }
  json moves = json::array();
  if (s->result == GameResult::Ongoing) {
    for (const Move& m : legal_moves(s->position))
      if (!origin || m.from == *origin) moves.push_back(move_json(m));
  }
  return {{"id", s->id}, {"side_to_move", colour_name(s->position.side_to_move)}, {"moves", moves},
          {"count", moves.size()}};
}

void GameService::apply_locked(Session& s, const Move& m) {
  make_move(s.position, m);
  s.history.push_back(m);
  s.result = terminal_state(s.position);
  if (s.result != GameResult::Ongoing) archive_locked(s);
}

void GameService::archive_locked(const Session& s) const {
  if (!options_.archive_dir) return;
  GameRecord r;
  r.gold = s.gold.is_human() ? "human" : s.gold.agent->name;
  r.scarlet = s.scarlet.is_human() ? "human" : s.scarlet.agent->name;
  r.depth_capped = false;
  r.gold_budget = "interactive";
  r.scarlet_budget = "interactive";
  r.result = s.result;
  r.moves = s.history;
  if (to_dpn(s.start) != to_dpn(initial_position())) r.start = to_dpn(s.start);
  std::filesystem::create_directories(*options_.archive_dir);
  save_game_record(r, *options_.archive_dir / (s.id + ".game"));
}

json GameService::submit_move(const std::string& id, const std::string& text, const std::optional<std::string>& side) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->result != GameResult::Ongoing) throw ServiceError(409, "game is finished");
  if (s->pending) throw ServiceError(409, "engine is thinking");
  if (side && *side != "gold" && *side != "scarlet") throw ServiceError(400, "side must be 'gold' or 'scarlet'");
  const Color mover = s->position.side_to_move;
  if (side && *side != colour_name(mover)) throw ServiceError(409, "it is " + colour_name(mover) + "'s turn");
  const Controller& c = mover == Color::Gold ? s->gold : s->scarlet;
  if (!c.is_human()) throw ServiceError(409, colour_name(mover) + " is engine-controlled");
  Move m;
  try {
    m = resolve_move(s->position, text);
  } catch (const ParseError& e) {
    throw ServiceError(400, e.what());
  } catch (const ContractViolation&) {
    json moves = json::array();
    for (const Move& lm : legal_moves(s->position)) moves.push_back(move_to_text(lm));
    throw ServiceError(422, "illegal move '" + text + "'", {{"legal", moves}});
  }
  apply_locked(*s, m);
  return {{"move", move_json(m)}, {"state", state_locked(*s)}};
}

const Theta& GameService::display_theta(const Session& s) const {
  static const Theta identity = Theta::identity();
  for (const Controller* c : {&s.gold, &s.scarlet})
    if (!c->is_human() && c->agent->kind == AgentKind::Minimax) return c->agent->theta;
  return identity;
}

json GameService::engine_move(const std::string& id, std::optional<int> budget_ms, std::optional<int> depth, bool wait) {
  auto s = find(id);
  AgentConfig agent;
  Position snapshot;
  {
    std::lock_guard lock(s->mutex);
    if (s->result != GameResult::Ongoing) throw ServiceError(409, "game is finished");
    if (s->pending) throw ServiceError(409, "engine is already thinking");
    const Controller& c = s->position.side_to_move == Color::Gold ? s->gold : s->scarlet;
    if (c.is_human()) throw ServiceError(409, colour_name(s->position.side_to_move) + " is human-controlled");
    agent = *c.agent;
    if (budget_ms) {
      if (*budget_ms <= 0) throw ServiceError(400, "budget must be positive");
      agent.time_budget_ms = *budget_ms;
      if (!depth) agent.max_depth.reset();
    }
    if (depth) {
      if (*depth < 1) throw ServiceError(400, "depth must be at least 1");
      agent.max_depth = *depth;
    }
    if (agent.kind == AgentKind::Random) agent.rng_seed = mix_seed(agent.rng_seed, s->position.ply_count);
    snapshot = s->position;
    s->pending = true;
    s->last_error.clear();
  }

  auto run = [this, s, agent, snapshot]() -> json {
    Move m;
    try {
      m = best_move(snapshot, agent);
    } catch (const std::exception& e) {
      std::lock_guard lock(s->mutex);
      s->pending = false;
      s->last_error = e.what();
      throw ServiceError(500, e.what());
    }
    std::lock_guard lock(s->mutex);
    s->pending = false;
    apply_locked(*s, m);
    return {{"move", move_json(m)},
            {"state", state_locked(*s)},
            {"eval", breakdown_json(evaluate(s->position, display_theta(*s)))}};
  };

  if (wait) return run();
  {
    std::lock_guard lock(workers_mutex_);
    workers_.emplace_back([run] {
      try {
        run();
      } catch (const std::exception&) {
        // recorded in last_error
      }
    });
  }
  std::lock_guard lock(s->mutex);
  return {{"pending", true}, {"state", state_locked(*s)}};
}

json GameService::eval(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  try {
    return {{"id", s->id}, {"eval", breakdown_json(evaluate(s->position, display_theta(*s)))}};
  } catch (const std::domain_error& e) {
    throw ServiceError(409, e.what());
  }
}

Position GameService::replay(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  Position p = s->start;
  for (const Move& m : s->history) p = apply_legal_move(p, m);
  return p;
}

}  // namespace dragonchess
