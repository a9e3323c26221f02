#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "col/service.hpp"
#include "support.hpp"

using namespace col;
using namespace col::testing;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

const json kStd = json::parse(R"({"universe_bound": 10, "atoms": {
    "Eq": {"kind": "builtin", "name": "Eq"},
    "Halts": {"kind": "builtin", "name": "Halts"},
    "P": {"kind": "const", "value": true}}})");

json create_req(const std::string& formula, const std::string& machine, json interp = kStd) {
  return {{"formula", formula}, {"machine", machine}, {"interp", interp}};
}

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e.status();
  }
  return 200;
}

// A catalog whose only machine needs 601 instructions to halt on 0.
json slow_catalog_interp() {
  json program = json::array();
  for (int i = 0; i < 600; ++i) program.push_back("INC 1");
  program.push_back("ACCEPT");
  json table = json::array();
  for (int i = 0; i < 16; ++i) table.push_back(true);
  json interp = kStd;
  interp["catalog"] = json::array({{{"id", 0},
                                    {"program", program},
                                    {"halts_table", table},
                                    {"accepts_table", table},
                                    {"output_on_0", nullptr}}});
  return interp;
}

}  // namespace

TEST_CASE("create an echo session") {
  SessionStore store;
  json s = store.create(create_req("all x. exi y. Eq(y,x)", "function:id"));
  CHECK(s["status"]["state"] == "RUNNING");
  CHECK(s["run"] == "");
  CHECK(s["hints"] == json({"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"}));
  CHECK(s["last_machine_moves"].empty());
  CHECK(store.get(s["id"])["run"] == "");
  CHECK(store.size() == 1u);
}

TEST_CASE("creation errors are 400") {
  SessionStore store;
  CHECK(status_of([&] { store.create(create_req("P |", "copycat")); }) == 400);
  CHECK(status_of([&] { store.create(create_req("Q", "silent")); }) == 400);
  CHECK(status_of([&] { store.create(create_req("P", "copycat")); }) == 400);
  CHECK(status_of([&] { store.create(create_req("P", "nope")); }) == 400);
  CHECK(status_of([&] { store.create({{"formula", "P"}}); }) == 400);
  CHECK(status_of([&] { store.create(json::array()); }) == 400);
  try {
    store.create(create_req("P |", "copycat"));
  } catch (const ServiceError& e) {
    CHECK(std::string(e.what()).find("parse error at 3") != std::string::npos);
  }
  CHECK(store.size() == 0u);
}

TEST_CASE("a parallel copycat session shows both components") {
  SessionStore store;
  json s = store.create(create_req("P \\/ ~P", "copycat"));
  CHECK(s["status"]["state"] == "RUNNING");
  CHECK(s["run"] == "");
}

TEST_CASE("submitting moves") {
  SessionStore store;
  std::string id = store.create(create_req("all x. exi y. Eq(y,x)", "function:id"))["id"];
  json s = store.submit(id, {{"moves", {"5"}}});
  CHECK(s["run"] == "B:5 T:5");
  CHECK(s["status"] == json({{"state", "FINISHED"}, {"winner", "TOP"}, {"offender", nullptr}}));
  CHECK(s["last_machine_moves"] == json({"5"}));
  CHECK(s["hints"].empty());
  CHECK(status_of([&] { store.submit(id, {{"moves", {"6"}}}); }) == 409);
  // server-side adjudication agrees with the library
  auto g = game_of("all x. exi y. Eq(y,x)", interpretation_from_json(kStd));
  CHECK(std::string(to_string(winner(*g, run_of(s["run"])).winner)) == s["status"]["winner"]);
}

TEST_CASE("an illegal environment move finishes the session") {
  SessionStore store;
  std::string id = store.create(create_req("all x. exi y. Eq(y,x)", "function:id"))["id"];
  json s = store.submit(id, {{"moves", {"x=notanumeral"}}});
  CHECK(s["status"]["state"] == "FINISHED");
  CHECK(s["status"]["winner"] == "TOP");
  CHECK(s["status"]["offender"] == json({{"player", "BOT"}, {"index", 0}}));
}

TEST_CASE("bad submissions") {
  SessionStore store;
  std::string id = store.create(create_req("all x. exi y. Eq(y,x)", "function:id"))["id"];
  CHECK(status_of([&] { store.submit("deadbeef", {{"moves", json::array()}}); }) == 404);
  CHECK(status_of([&] { store.submit(id, {{"moves", "5"}}); }) == 400);
  CHECK(status_of([&] { store.submit(id, {{"moves", {5}}}); }) == 400);
  CHECK(status_of([&] { store.submit(id, {{"moves", {"a b"}}}); }) == 400);
  CHECK(status_of([&] { store.submit(id, json::object()); }) == 400);
  CHECK(store.get(id)["status"]["state"] == "RUNNING");
  store.remove(id);
  CHECK(status_of([&] { store.get(id); }) == 404);
  CHECK(status_of([&] { store.remove(id); }) == 404);
}

TEST_CASE("an empty submission lets a busy machine continue") {
  ServiceOptions options;
  options.step_cap = 1;
  SessionStore store(options);
  json interp = slow_catalog_interp();
  std::string id =
      store.create(create_req("all x. ~Halts(x,0) sor Halts(x,0)", "re-switch", interp))["id"];
  json s = store.submit(id, {{"moves", {"0"}}});
  CHECK(s["run"] == "B:0");
  CHECK(s["status"]["state"] == "RUNNING");
  s = store.submit(id, {{"moves", json::array()}});
  CHECK(s["run"] == "B:0");
  CHECK(s["last_machine_moves"].empty());
  s = store.submit(id, {{"moves", json::array()}});
  CHECK(s["run"] == "B:0 T:s");
  CHECK(s["last_machine_moves"] == json({"s"}));

  // with the default cap the same switch happens within one request
  SessionStore roomy;
  id = roomy.create(create_req("all x. ~Halts(x,0) sor Halts(x,0)", "re-switch", interp))["id"];
  CHECK(roomy.submit(id, {{"moves", {"0"}}})["run"] == "B:0 T:s");
}

TEST_CASE("sessions expire after the idle time") {
  auto now = std::make_shared<std::chrono::steady_clock::time_point>(
      std::chrono::steady_clock::now());
  ServiceOptions options;
  options.ttl = 60s;
  options.now = [now] { return *now; };
  SessionStore store(options);
  std::string a = store.create(create_req("P \\/ ~P", "copycat"))["id"];
  *now += 40s;
  std::string b = store.create(create_req("P \\/ ~P", "copycat"))["id"];
  *now += 30s;
  CHECK(status_of([&] { store.get(a); }) == 404);
  CHECK(store.get(b)["id"] == b);
  *now += 59s;
  CHECK(store.size() == 1u);
  *now += 61s;
  CHECK(store.size() == 0u);
}

TEST_CASE("the idle time comes from the environment") {
  unsetenv("COL_SESSION_TTL_SECONDS");
  CHECK(ttl_from_env() == 1800s);
  setenv("COL_SESSION_TTL_SECONDS", "5", 1);
  CHECK(ttl_from_env() == 5s);
  setenv("COL_SESSION_TTL_SECONDS", "soon", 1);
  CHECK(ttl_from_env() == 1800s);
  unsetenv("COL_SESSION_TTL_SECONDS");
}

TEST_CASE("sessions are isolated") {
  SessionStore store;
  std::string a = store.create(create_req("all x. exi y. Eq(y,x)", "function:id"))["id"];
  std::string b = store.create(create_req("all x. exi y. Eq(y,x)", "function:id"))["id"];
  CHECK(a != b);
  store.submit(a, {{"moves", {"3"}}});
  CHECK(store.get(b)["run"] == "");
  CHECK(store.get(b)["version"] == 1);
}

TEST_CASE("concurrent submissions to separate sessions") {
  SessionStore store;
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i) {
    ids.push_back(store.create(create_req("all x. exi y. Eq(y,x)", "function:id"))["id"]);
  }
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] { store.submit(ids[i], {{"moves", {numeral(i)}}}); });
  }
  for (auto& t : threads) t.join();
  for (int i = 0; i < 8; ++i) {
    CHECK(store.get(ids[i])["run"] == "B:" + numeral(i) + " T:" + numeral(i));
  }
}

TEST_CASE("wait returns on change and on timeout") {
  SessionStore store;
  json s = store.create(create_req("all x. exi y. Eq(y,x)", "function:id"));
  std::string id = s["id"];
  std::uint64_t v = s["version"];
  CHECK(store.wait(id, v, 10ms)["version"] == v);
  std::thread t([&] {
    std::this_thread::sleep_for(50ms);
    store.submit(id, {{"moves", {"2"}}});
  });
  json after = store.wait(id, v, 5s);
  t.join();
  CHECK(after["version"].get<std::uint64_t>() > v);
  CHECK(after["run"] == "B:2 T:2");
}

TEST_CASE("http endpoints") {
  httplib::Server server;
  SessionStore store;
  mount(server, store);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(5, 0);
  auto created = client.Post("/sessions", create_req("all x. exi y. Eq(y,x)", "function:id").dump(),
                             "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
  json s = json::parse(created->body);
  std::string id = s["id"];
  CHECK(s["hints"].size() == 10u);

  auto bad = client.Post("/sessions", create_req("P |", "copycat").dump(), "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  CHECK(json::parse(bad->body).contains("error"));
  auto garbage = client.Post("/sessions", "{not json", "application/json");
  REQUIRE(garbage);
  CHECK(garbage->status == 400);

  auto got = client.Get("/sessions/" + id);
  REQUIRE(got);
  CHECK(json::parse(got->body)["run"] == "");
  auto missing = client.Get("/sessions/abc123");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  // the stream delivers the current state, then each change, and closes at the end
  std::vector<json> events;
  std::thread reader([&] {
    httplib::Client sse("127.0.0.1", port);
    sse.set_read_timeout(5, 0);
    std::string buffer;
    sse.Get("/sessions/" + id + "/stream", [&](const char* data, std::size_t n) {
      buffer.append(data, n);
      for (auto pos = buffer.find("\n\n"); pos != std::string::npos; pos = buffer.find("\n\n")) {
        std::string line = buffer.substr(0, pos);
        buffer.erase(0, pos + 2);
        if (line.starts_with("data: ")) events.push_back(json::parse(line.substr(6)));
      }
      return true;
    });
  });
  std::this_thread::sleep_for(200ms);
  auto moved = client.Post("/sessions/" + id + "/moves", R"({"moves": ["5"]})", "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  CHECK(json::parse(moved->body)["run"] == "B:5 T:5");
  reader.join();
  REQUIRE(events.size() >= 2u);
  CHECK(events.front()["run"] == "");
  CHECK(events.back()["run"] == "B:5 T:5");
  CHECK(events.back()["status"]["winner"] == "TOP");
  CHECK(events.back()["last_machine_moves"] == json({"5"}));
  for (const auto& e : events) {
    CHECK(e.size() == 4u);
    CHECK(e.contains("hints"));
  }

  auto again = client.Post("/sessions/" + id + "/moves", R"({"moves": ["5"]})", "application/json");
  REQUIRE(again);
  CHECK(again->status == 409);
  auto removed = client.Delete("/sessions/" + id);
  REQUIRE(removed);
  CHECK(removed->status == 204);
  auto gone = client.Get("/sessions/" + id);
  REQUIRE(gone);
  CHECK(gone->status == 404);

  server.stop();
  listener.join();
}
