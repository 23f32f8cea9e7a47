#pragma once

#include <filesystem>
#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dragonchess/search.hpp"

namespace dragonchess {

// Error carrying the HTTP status it maps to and an optional JSON payload
// (e.g. the legal-move list for a rejected move).
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& message, nlohmann::json detail = nullptr)
      : std::runtime_error(message), status_(status), detail_(std::move(detail)) {}
  int status() const { return status_; }
  const nlohmann::json& detail() const { return detail_; }

 private:
  int status_;
  nlohmann::json detail_;
};

// Human player or engine agent for one side of a session.
struct Controller {
  std::optional<AgentConfig> agent;  // nullopt = human

  static Controller human() { return {}; }
  static Controller engine(AgentConfig a) { return {std::move(a)}; }
  bool is_human() const { return !agent.has_value(); }
};

struct ServiceOptions {
  std::filesystem::path data_dir;
  // Finished games are written here as game records when set.
  std::optional<std::filesystem::path> archive_dir;
  int default_budget_ms = 3000;
};

class GameService {
 public:
  explicit GameService(ServiceOptions options = {});
  ~GameService();
  GameService(const GameService&) = delete;
  GameService& operator=(const GameService&) = delete;

  // `start` defaults to the initial position.
  std::string create_session(Controller gold, Controller scarlet, std::optional<Position> start = std::nullopt);
  // Body of POST /games: {"gold": <controller>, "scarlet": <controller>,
  // "dpn": <optional start position>}, where a controller is "human",
  // {"kind": "human"} or an agent object. Omitted controllers are human.
  std::string create_session(const nlohmann::json& body);

  nlohmann::json state(const std::string& id) const;
  // Optional `from` (square name) restricts the list to one origin.
  nlohmann::json legal(const std::string& id, const std::optional<std::string>& from = std::nullopt) const;
  // `side` ("gold"/"scarlet"), when given, must be the side to move.
  nlohmann::json submit_move(const std::string& id, const std::string& text,
                             const std::optional<std::string>& side = std::nullopt);
  // Searches for the engine side to move and applies its move. With
  // wait = false the search runs in the background and the call returns at
  // once with "pending": true; poll state() for completion.
  nlohmann::json engine_move(const std::string& id, std::optional<int> budget_ms = std::nullopt,
                             std::optional<int> depth = std::nullopt, bool wait = true);
  nlohmann::json eval(const std::string& id) const;

  // Replays the session's history from its start position.
  Position replay(const std::string& id) const;

 private:
  struct Session {
    std::string id;
    Position start;
    Position position;
    std::vector<Move> history;
    Controller gold;
    Controller scarlet;
    GameResult result = GameResult::Ongoing;
    bool pending = false;
    std::string last_error;
    mutable std::mutex mutex;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  Controller controller_from_json(const nlohmann::json& j) const;
  nlohmann::json state_locked(const Session& s) const;
  const Theta& display_theta(const Session& s) const;
  void apply_locked(Session& s, const Move& m);
  void archive_locked(const Session& s) const;

  ServiceOptions options_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

nlohmann::json breakdown_json(const EvalBreakdown& b);
nlohmann::json move_json(const Move& m);

}  // namespace dragonchess
