#include <doctest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "col/errors.hpp"
#include "col/fsm.hpp"
#include "col/registry.hpp"
#include "support.hpp"

using namespace col;
using namespace col::testing;
using nlohmann::json;

namespace {

bool wins(const Game& g, const Strategy& m, std::size_t depth, std::size_t bound) {
  return std::holds_alternative<VerifyOk>(verify_wins(g, m, depth, bound));
}

json bit_server_json() { return fsm_to_json(bit_server_fsm()); }

}  // namespace

TEST_CASE("patterns") {
  auto lm = [](const char* text) { return run_of(text).at(0); };
  CHECK(pattern_matches(lm("B:*.1"), lm("B:0.1")));
  CHECK(pattern_matches(lm("B:*.1"), lm("B:17.1")));
  CHECK_FALSE(pattern_matches(lm("B:*.1"), lm("B:1")));
  CHECK_FALSE(pattern_matches(lm("B:*.1"), lm("T:0.1")));
  CHECK_FALSE(pattern_matches(lm("B:*.1"), lm("B:x.1")));
  CHECK_FALSE(pattern_matches(lm("B:*.1"), lm("B:0.1.1")));
  CHECK(pattern_matches(lm("B:*.*._"), lm("B:3.4._")));
  CHECK(pattern_matches(lm("B:_"), lm("B:_")));
  CHECK_FALSE(pattern_matches(lm("B:_"), lm("B:0")));
}

TEST_CASE("json round trip") {
  FsmSpec spec = bit_server_fsm();
  FsmSpec back = fsm_from_json(bit_server_json());
  CHECK(back.states == spec.states);
  CHECK(back.start == spec.start);
  CHECK(back.alphabet == spec.alphabet);
  CHECK(back.transition == spec.transition);
  CHECK(back.sink == spec.sink);
  REQUIRE(back.emission.size() == spec.emission.size());
  for (std::size_t i = 0; i < spec.emission.size(); ++i) {
    CHECK(back.emission[i].has_value() == spec.emission[i].has_value());
    if (spec.emission[i]) {
      CHECK(back.emission[i]->copy == spec.emission[i]->copy);
      CHECK(back.emission[i]->move == spec.emission[i]->move);
    }
  }
  CHECK(fsm_to_json(back) == bit_server_json());

  // the shipped file is the same machine
  std::ifstream f(std::string(COL_DATA_DIR) + "/bit_server.fsm.json");
  CHECK(json::parse(f) == bit_server_json());
}

TEST_CASE("malformed specs") {
  auto broken = [](auto edit) {
    json j = bit_server_json();
    edit(j);
    return j;
  };
  CHECK_THROWS_AS(fsm_from_json(broken([](json& j) { j["start"] = "nowhere"; })), MalformedSpec);
  CHECK_THROWS_AS(fsm_from_json(broken([](json& j) { j["transitions"]["S0"].erase("B:0"); })),
                  MalformedSpec);
  CHECK_THROWS_AS(fsm_from_json(broken([](json& j) { j["transitions"]["S0"]["B:0"] = "X"; })),
                  MalformedSpec);
  CHECK_THROWS_AS(fsm_from_json(broken([](json& j) { j["transitions"]["S0"]["B:9"] = "S0"; })),
                  MalformedSpec);
  CHECK_THROWS_AS(fsm_from_json(broken([](json& j) { j["alphabet"].push_back("B:0"); })),
                  MalformedSpec);
  CHECK_THROWS_AS(fsm_from_json(broken([](json& j) { j.erase("states"); })), MalformedSpec);
  CHECK_THROWS_AS(fsm_from_json(json::array()), MalformedSpec);

  FsmSpec spec = bit_server_fsm();
  spec.transition[0].pop_back();
  CHECK_THROWS_AS(validate(spec), MalformedSpec);
  spec = bit_server_fsm();
  spec.sink[1] = 99;
  CHECK_THROWS_AS(validate(spec), MalformedSpec);
  CHECK_THROWS_AS(load_fsm("/nonexistent.fsm.json"), Error);
}

TEST_CASE("the bit server answers queries from its state") {
  auto m = fsm_strategy(bit_server_fsm());
  ScriptedEnv env(std::vector<std::vector<Move>>{{"1"}, {""}});
  Simulation s = simulate(*bit_game(), *m, env, 10, 0);
  CHECK(format_run(s.run) == "B:1 B:_ T:1");
  CHECK(s.verdict.winner == Player::kTop);
}

TEST_CASE("the bit server wins bit and its sequential recurrence") {
  auto m = fsm_strategy(bit_server_fsm());
  CHECK(m->kind() == StrategyKind::kFiniteState);
  CHECK(wins(*bit_game(), *m, 6, 2));
  CHECK(wins(*srecurrence(bit_game()), *m, 6, 2));
}

TEST_CASE("memory defeats the bit server") {
  auto m = fsm_strategy(bit_server_fsm());
  auto script = defeat_search(*memory_game(), *m, 6, 2);
  REQUIRE(script);
  Simulation s = simulate(*memory_game(), *m, *script, 64, 0);
  CHECK(s.verdict.winner == Player::kBot);
  auto loss = find_losing_run(*memory_game(), *m, 6, 2);
  REQUIRE(loss);
  CHECK(format_run(loss->run) == "B:0.0.0 B:0.0._");
}

TEST_CASE("registry loads FSM files") {
  Interpretation none;
  auto m = make_strategy("fsm:" + std::string(COL_DATA_DIR) + "/bit_server.fsm.json",
                         *expr::bit(), none);
  CHECK(m->kind() == StrategyKind::kFiniteState);
  CHECK(wins(*bit_game(), *m, 4, 2));
}

TEST_CASE("fsm play is deterministic and clones are independent") {
  auto m = fsm_strategy(bit_server_fsm());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomEnv a(2, 0.8, 8);
    RandomEnv b(2, 0.8, 8);
    Simulation x = simulate(*srecurrence(bit_game()), *m, a, 30, seed);
    Simulation y = simulate(*srecurrence(bit_game()), *m, b, 30, seed);
    CHECK(x.run == y.run);
  }
  auto c = m->clone();
  c->step(run_of("B:1"));
  CHECK(dynamic_cast<FsmStrategy&>(*c).state() != dynamic_cast<FsmStrategy&>(*m).state());
}

TEST_CASE("reactive enumeration") {
  std::vector<LabeledMove> alphabet = {{Player::kBot, "0"}, {Player::kBot, "1"}};
  std::vector<Move> outputs = {"0", "1"};
  // states 1: emission choice only (3); 2: rgs rows 00,01 -> 1+... counted by brute force
  auto one = enumerate_reactive_fsms(alphabet, outputs, 1);
  CHECK(one.size() == 3u);
  auto two = enumerate_reactive_fsms(alphabet, outputs, 2);
  // one state: 3; two states, start rows {01, 10, 11} after renaming: 3 * 9
  CHECK(two.size() == 3u + 3u * 9u);
  for (const auto& f : two) CHECK_NOTHROW(validate(f));
}

TEST_CASE("no machine with at most four states wins the echo over five numerals") {
  auto interp = interp_from(R"({"universe_bound": 5, "atoms": {"Eq": {"kind": "builtin", "name": "Eq"}}})");
  auto g = game_of("all x. exi y. Eq(y,x)", interp);
  std::vector<LabeledMove> alphabet;
  std::vector<Move> outputs;
  for (int i = 0; i < 5; ++i) {
    alphabet.push_back({Player::kBot, numeral(i)});
    outputs.push_back(numeral(i));
  }
  auto machines = enumerate_reactive_fsms(alphabet, outputs, 4);
  std::size_t defeated = 0;
  for (const auto& f : machines) {
    auto m = fsm_strategy(f);
    if (defeat_search(*g, *m, 1, 5)) ++defeated;
  }
  CHECK(defeated == machines.size());
  CHECK(machines.size() > 100000u);
}
