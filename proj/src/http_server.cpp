#include "dragonchess/http_server.hpp"

#include <httplib.h>

namespace dragonchess {

using json = nlohmann::json;

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw ServiceError(400, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ServiceError(400, std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw ServiceError(400, std::string("bad field '") + key + "'");
  }
}

// Runs a handler, turning exceptions into JSON error responses.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      json body = {{"error", e.what()}};
      if (e.detail().is_object()) body.update(e.detail());
      send(res, e.status(), body);
    } catch (const std::exception& e) {
      send(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace

HttpServer::HttpServer(GameService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Post("/games", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const std::string id = service_.create_session(parse_body(req));
           send(res, 201, service_.state(id));
         }));
  s.Get(R"(/games/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send(res, 200, service_.state(req.matches[1]));
        }));
  s.Get(R"(/games/([^/]+)/legal)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          std::optional<std::string> from;
          if (req.has_param("from")) from = req.get_param_value("from");
          send(res, 200, service_.legal(req.matches[1], from));
        }));
  s.Post(R"(/games/([^/]+)/moves)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           const auto move = optional_field<std::string>(body, "move");
           if (!move) throw ServiceError(400, "missing field 'move'");
           send(res, 200, service_.submit_move(req.matches[1], *move, optional_field<std::string>(body, "side")));
         }));
  s.Post(R"(/games/([^/]+)/engine-move)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           const bool wait = optional_field<bool>(body, "wait").value_or(true);
           json out = service_.engine_move(req.matches[1], optional_field<int>(body, "budget_ms"),
                                           optional_field<int>(body, "depth"), wait);
           send(res, wait ? 200 : 202, out);
         }));
  s.Get(R"(/games/([^/]+)/eval)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send(res, 200, service_.eval(req.matches[1]));
        }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

void HttpServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace dragonchess
