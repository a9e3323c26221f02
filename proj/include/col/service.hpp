#pragma once

// Live play sessions: a human acts as the environment against a registered
// machine. SessionStore holds the state and is independent of HTTP; serve()
// puts it behind cpp-httplib.
//
//   POST   /sessions               {formula, interp?, machine}
//   GET    /sessions/{id}
//   POST   /sessions/{id}/moves    {moves: [string]}
//   DELETE /sessions/{id}
//   GET    /sessions/{id}/stream   server-sent events, one state per change
//
// A state document is {id, formula, machine, run, status, hints,
// last_machine_moves, version}; status is {"state": "RUNNING"} or
// {"state": "FINISHED", "winner": "TOP"|"BOT", "offender": null | {player, index}}.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "col/errors.hpp"

namespace httplib {
class Server;
}

namespace col {

class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct ServiceOptions {
  std::size_t step_cap = 128;  // machine steps per request
  std::chrono::seconds ttl{1800};
  // Used when a create request carries no interpretation.
  std::string default_interp;
  std::function<std::chrono::steady_clock::time_point()> now = [] {
    return std::chrono::steady_clock::now();
  };
};

// Reads COL_SESSION_TTL_SECONDS.
std::chrono::seconds ttl_from_env();

struct Session;

class SessionStore {
 public:
  explicit SessionStore(ServiceOptions options = {});
  ~SessionStore();

  // All of these throw ServiceError with an HTTP status: 400 for bad input,
  // 404 for unknown or expired sessions, 409 for moves on a finished one.
  nlohmann::json create(const nlohmann::json& request);
  nlohmann::json get(const std::string& id);
  nlohmann::json submit(const std::string& id, const nlohmann::json& request);
  void remove(const std::string& id);

  // Waits until the session's version exceeds `seen`; returns its state, or
  // the unchanged state after `timeout`. Throws 404 once the session is gone.
  nlohmann::json wait(const std::string& id, std::uint64_t seen,
                      std::chrono::milliseconds timeout);

  std::size_t size();

 private:
  std::shared_ptr<Session> find(const std::string& id);
  void expire();

  ServiceOptions options_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

void mount(httplib::Server& server, SessionStore& store);

// Blocks serving on 0.0.0.0:port.
int serve(int port, ServiceOptions options);

}  // namespace col
