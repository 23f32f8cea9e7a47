#pragma once

#include <memory>
#include <string>

#include "dragonchess/service.hpp"

namespace httplib {
class Server;
}

namespace dragonchess {

// JSON REST front end for GameService:
//   POST /games                     {"gold": ..., "scarlet": ...}
//   GET  /games/{id}
//   GET  /games/{id}/legal?from=2g2
//   POST /games/{id}/moves          {"move": "2g2-2g3", "side": "gold"}
//   POST /games/{id}/engine-move    {"budget_ms": 500, "depth": 2, "wait": true}
//   GET  /games/{id}/eval
// Errors come back as {"error": message, ...detail} with the ServiceError status.
class HttpServer {
 public:
  explicit HttpServer(GameService& service);
  ~HttpServer();

  // Binds and returns the bound port (0 picks a free one); throws on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void wait_until_ready() const;
  void stop();

 private:
  GameService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace dragonchess
