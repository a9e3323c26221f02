#include "col/service.hpp"

#include <condition_variable>
#include <cstdlib>
#include <random>

#include <httplib.h>

#include "col/formula.hpp"
#include "col/interpretation.hpp"
#include "col/machine.hpp"
#include "col/registry.hpp"
#include "col/run_format.hpp"

namespace col {

using nlohmann::json;

struct Session {
  std::mutex mutex;
  std::condition_variable changed;

  std::string id;
  std::string formula;
  std::string machine;
  ExprPtr expr;
  Interpretation interp;
  GamePtr game;
  std::unique_ptr<Scheduler> scheduler;

  std::vector<Move> last_machine_moves;
  std::uint64_t version = 0;
  bool terminal = false;
  bool removed = false;
  std::chrono::steady_clock::time_point last_access;
};

std::chrono::seconds ttl_from_env() {
  const char* v = std::getenv("COL_SESSION_TTL_SECONDS");
  if (v) {
    if (auto n = parse_numeral(v)) return std::chrono::seconds(*n);
  }
  return std::chrono::seconds(1800);
}

namespace {

json status_of(const Session& s) {
  if (!s.terminal) return {{"state", "RUNNING"}};
  Verdict v = s.scheduler->verdict();
  json offender = nullptr;
  if (v.illegal) {
    offender = {{"player", std::string(to_string(v.illegal->player))},
                {"index", v.illegal->index}};
  }
  return {{"state", "FINISHED"}, {"winner", std::string(to_string(v.winner))},
          {"offender", offender}};
}

json state_of(const Session& s) {
  json hints = json::array();
  if (!s.terminal) {
    for (const auto& m : moves(*s.game, s.scheduler->run(), Player::kBot,
                               s.interp.universe_bound)) {
      hints.push_back(format_move(m));
    }
  }
  json last = json::array();
  for (const auto& m : s.last_machine_moves) last.push_back(format_move(m));
  return {{"id", s.id},
          {"formula", s.formula},
          {"machine", s.machine},
          {"run", format_run(s.scheduler->run())},
          {"status", status_of(s)},
          {"hints", hints},
          {"last_machine_moves", last},
          {"version", s.version}};
}

// Neither side can move any more. The empty position never counts, so a
// session on a moveless game stays open until someone moves.
bool exhausted(const Session& s) {
  const Run& run = s.scheduler->run();
  if (run.empty()) return false;
  std::size_t bound = run.size() + 2;
  return moves(*s.game, run, Player::kBot, bound).empty() &&
         moves(*s.game, run, Player::kTop, bound).empty();
}

void advance(Session& s, const std::vector<Move>& env_moves, std::size_t cap) {
  Scheduler& sched = *s.scheduler;
  std::size_t before = sched.run().size();
  sched.cycle(env_moves, false);
  for (std::size_t steps = 1; steps < cap && !sched.finished() && !sched.machine_idle();
       ++steps) {
    sched.cycle({}, false);
  }
  s.last_machine_moves.clear();
  const Run& run = sched.run();
  for (std::size_t i = before; i < run.size(); ++i) {
    if (run[i].player == Player::kTop) s.last_machine_moves.push_back(run[i].move);
  }
  s.terminal = sched.finished() || exhausted(s);
  ++s.version;
  s.changed.notify_all();
}

std::string fresh_id(std::uint64_t counter) {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(rng() ^ (counter * 0x9E3779B97F4A7C15ull)));
  return buf;
}

}  // namespace

SessionStore::SessionStore(ServiceOptions options) : options_(std::move(options)) {}

SessionStore::~SessionStore() {
  std::lock_guard lock(mutex_);
  for (auto& [id, s] : sessions_) {
    std::lock_guard inner(s->mutex);
    s->removed = true;
    s->changed.notify_all();
  }
}

void SessionStore::expire() {
  auto now = options_.now();
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    auto& s = it->second;
    std::unique_lock inner(s->mutex, std::try_to_lock);
    // a session busy with a request is in use and so not idle
    if (inner.owns_lock() && now - s->last_access > options_.ttl) {
      s->removed = true;
      s->changed.notify_all();
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  expire();
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "no such session: " + id);
  return it->second;
}

json SessionStore::create(const json& request) {
  auto s = std::make_shared<Session>();
  try {
    if (!request.is_object()) throw ServiceError(400, "request body must be a JSON object");
    if (!request.contains("formula") || !request["formula"].is_string()) {
      throw ServiceError(400, "missing formula");
    }
    if (!request.contains("machine") || !request["machine"].is_string()) {
      throw ServiceError(400, "missing machine");
    }
    s->formula = request["formula"].get<std::string>();
    s->machine = request["machine"].get<std::string>();
    const json interp = request.value("interp", json());
    if (interp.is_object()) {
      s->interp = interpretation_from_json(interp);
    } else if (interp.is_string()) {
      s->interp = load_interpretation(interp.get<std::string>());
    } else if (!options_.default_interp.empty()) {
      s->interp = load_interpretation(options_.default_interp);
    }
    s->expr = parse_expr(s->formula);
    s->game = interpret(s->expr, s->interp);
    s->scheduler = std::make_unique<Scheduler>(
        *s->game, make_strategy(s->machine, *s->expr, s->interp));
  } catch (const ServiceError&) {
    throw;
  } catch (const std::exception& e) {
    throw ServiceError(400, e.what());
  }
  std::lock_guard lock(mutex_);
  expire();
  s->id = fresh_id(++counter_);
  s->last_access = options_.now();
  std::lock_guard inner(s->mutex);
  advance(*s, {}, options_.step_cap);
  sessions_[s->id] = s;
  return state_of(*s);
}

json SessionStore::get(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->last_access = options_.now();
  return state_of(*s);
}

json SessionStore::submit(const std::string& id, const json& request) {
  auto s = find(id);
  std::vector<Move> env_moves;
  if (!request.is_object() || !request.contains("moves") || !request["moves"].is_array()) {
    throw ServiceError(400, "expected {\"moves\": [...]}");
  }
  for (const auto& m : request["moves"]) {
    if (!m.is_string()) throw ServiceError(400, "moves must be strings");
    std::string text = m.get<std::string>();
    try {
      env_moves.push_back(text.empty() ? Move() : parse_move(text));
    } catch (const FormatError& e) {
      throw ServiceError(400, e.what());
    }
  }
  std::lock_guard lock(s->mutex);
  if (s->removed) throw ServiceError(404, "no such session: " + id);
  s->last_access = options_.now();
  if (s->terminal) throw ServiceError(409, "session has finished");
  advance(*s, env_moves, options_.step_cap);
  return state_of(*s);
}

void SessionStore::remove(const std::string& id) {
  std::lock_guard lock(mutex_);
  expire();
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "no such session: " + id);
  {
    std::lock_guard inner(it->second->mutex);
    it->second->removed = true;
    it->second->changed.notify_all();
  }
  sessions_.erase(it);
}

json SessionStore::wait(const std::string& id, std::uint64_t seen,
                        std::chrono::milliseconds timeout) {
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  s->changed.wait_for(lock, timeout, [&] { return s->removed || s->version > seen; });
  if (s->removed) throw ServiceError(404, "no such session: " + id);
  s->last_access = options_.now();
  return state_of(*s);
}

std::size_t SessionStore::size() {
  std::lock_guard lock(mutex_);
  expire();
  return sessions_.size();
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    reply(res, e.status(), {{"error", e.what()}});
  } catch (const std::exception& e) {
    reply(res, 500, {{"error", e.what()}});
  }
}

json body_of(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw ServiceError(400, std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

void mount(httplib::Server& server, SessionStore& store) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  server.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 201, store.create(body_of(req))); });
  });
  server.Get(R"(/sessions/([0-9a-f]+))",
             [&store](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] { reply(res, 200, store.get(req.matches[1])); });
             });
  server.Post(R"(/sessions/([0-9a-f]+)/moves)",
              [&store](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  reply(res, 200, store.submit(req.matches[1], body_of(req)));
                });
              });
  server.Delete(R"(/sessions/([0-9a-f]+))",
                [&store](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    store.remove(req.matches[1]);
                    res.status = 204;
                  });
                });
  server.Get(R"(/sessions/([0-9a-f]+)/stream)",
             [&store](const httplib::Request& req, httplib::Response& res) {
               std::string id = req.matches[1];
               guarded(res, [&] {
                 json first = store.get(id);
                 auto seen = std::make_shared<std::optional<std::uint64_t>>();
                 res.set_header("Cache-Control", "no-cache");
                 res.set_chunked_content_provider(
                     "text/event-stream",
                     [&store, id, seen](std::size_t, httplib::DataSink& sink) {
                       json state;
                       try {
                         state = *seen ? store.wait(id, **seen, std::chrono::seconds(1))
                                       : store.get(id);
                       } catch (const ServiceError&) {
                         sink.done();
                         return true;
                       }
                       std::uint64_t version = state["version"].get<std::uint64_t>();
                       if (!*seen || version > **seen) {
                         json event = {{"run", state["run"]},
                                       {"status", state["status"]},
                                       {"hints", state["hints"]},
                                       {"last_machine_moves", state["last_machine_moves"]}};
                         std::string chunk = "data: " + event.dump() + "\n\n";
                         if (!sink.write(chunk.data(), chunk.size())) return false;
                         *seen = version;
                       }
                       if (state["status"]["state"] == "FINISHED") sink.done();
                       return sink.is_writable();
                     });
                 (void)first;
               });
             });
}

int serve(int port, ServiceOptions options) {
  httplib::Server server;
  SessionStore store(std::move(options));
  mount(server, store);
  if (!server.listen("0.0.0.0", port)) return 1;
  return 0;
}

}  // namespace col
