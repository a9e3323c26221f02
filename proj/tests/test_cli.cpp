#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "../tools/cli.hpp"
#include "col/machine.hpp"
#include "support.hpp"

using namespace col;
using namespace col::testing;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(COL_DATA_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "col_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("winner on the echo game") {
  auto r = cli({"winner", "--formula", "all x. exi y. Eq(y,x)", "--interp", data("std.json"),
                "--run", "B:5 T:5"});
  CHECK(r.code == 0);
  CHECK(r.out == "TOP\n");
  r = cli({"winner", "--formula", "all x. exi y. Eq(y,x)", "--interp", data("std.json"), "--run",
           "B:5 T:4"});
  CHECK(r.code == 1);
  CHECK(r.out == "BOT\n");
  r = cli({"winner", "--formula", "all x. exi y. Eq(y,x)", "--interp", data("std.json"), "--run",
           "T:5"});
  CHECK(r.code == 1);
  CHECK(r.out == "BOT (illegal move by TOP at 0)\n");
}

TEST_CASE("static") {
  auto r = cli({"static", "--formula", "P \\/ ~P", "--interp", data("p_true.json"), "--depth", "4",
                "--universe", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "OK static\n");
  r = cli({"static", "--formula", "F", "--interp", data("fmw.json"), "--depth", "2", "--json"});
  CHECK(r.code == 1);
  json j = json::parse(r.out);
  CHECK(j["verdict"] == "not static");
  auto run = parse_run(j["counterexample"]["run"].get<std::string>());
  auto delayed = parse_run(j["counterexample"]["delayed"].get<std::string>());
  CHECK(run.size() == delayed.size());
}

TEST_CASE("verify prints a losing run") {
  auto r = cli({"verify", "--formula", "P | ~P", "--interp", data("p_false.json"), "--machine",
                "choose-left", "--env-depth", "2", "--env-bound", "2"});
  CHECK(r.code == 1);
  CHECK(r.out.starts_with("losing run: T:0\n"));
  r = cli({"verify", "--formula", "P | ~P", "--interp", data("p_false.json"), "--machine",
           "choose-right", "--env-depth", "2", "--env-bound", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "OK\n");
}

TEST_CASE("legal, moves, delays, parse") {
  auto r = cli({"legal", "--formula", "P & P", "--interp", data("p_true.json"), "--run", "T:0"});
  CHECK(r.code == 1);
  CHECK(r.out == "illegal at 0 (TOP)\n");
  r = cli({"moves", "--formula", "all x. exi y. Eq(y,x)", "--interp", data("std.json"), "--run",
           "B:2", "--player", "T", "--bound", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "0\n1\n2\n");
  r = cli({"delays", "--run", "T:a B:b", "--player", "T"});
  CHECK(r.code == 0);
  CHECK((r.out == "T:a B:b\nB:b T:a\n" || r.out == "B:b T:a\nT:a B:b\n"));
  r = cli({"parse", "--formula", "A -> (B -> C)"});
  CHECK(r.out == "A -> B -> C\n");
}

TEST_CASE("errors exit 2") {
  auto r = cli({"winner", "--formula", "P |", "--run", ""});
  CHECK(r.code == 2);
  CHECK(r.err.starts_with("col: "));
  CHECK(r.err.find("parse error at 3") != std::string::npos);
  CHECK(cli({"winner", "--formula", "P", "--run", ""}).code == 2);  // unbound atom
  CHECK(cli({"winner", "--formula", "P", "--interp", "/nonexistent.json", "--run", ""}).code == 2);
  CHECK(cli({"winner", "--formula", "P", "--interp", data("p_true.json"), "--run", "X:1"}).code ==
        2);
  CHECK(cli({"simulate", "--formula", "P", "--interp", data("p_true.json"), "--machine",
             "nope"}).code == 2);
  CHECK(cli({"simulate", "--formula", "P", "--interp", data("p_true.json"), "--machine",
             "copycat"}).code == 2);  // shape mismatch
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"winner", "--run", "T:1"}).code == 2);
}

TEST_CASE("json schema") {
  const std::vector<std::vector<std::string>> commands = {
      {"parse", "--formula", "P"},
      {"legal", "--formula", "P", "--interp", data("p_true.json"), "--run", ""},
      {"winner", "--formula", "P", "--interp", data("p_true.json"), "--run", "T:1"},
      {"moves", "--formula", "P & P", "--interp", data("p_true.json")},
      {"delays", "--run", "T:a B:b"},
      {"static", "--formula", "P", "--interp", data("p_true.json")},
      {"simulate", "--formula", "P \\/ ~P", "--interp", data("p_true.json"), "--machine",
       "copycat"},
      {"verify", "--formula", "P | ~P", "--interp", data("p_false.json"), "--machine",
       "choose-left"},
  };
  const std::set<std::string> allowed = {"command", "verdict", "run", "counterexample",
                                         "trace_path", "moves", "formula"};
  for (auto args : commands) {
    args.push_back("--json");
    auto r = cli(args);
    INFO(args[0] << ": " << r.out << r.err);
    CHECK(r.code != 2);
    json j = json::parse(r.out);
    CHECK(j["command"] == args[0]);
    CHECK(j["verdict"].is_string());
    CHECK(j["run"].is_string());
    for (const auto& [k, v] : j.items()) CHECK(allowed.count(k) == 1);
  }
}

TEST_CASE("cli verdicts equal library verdicts") {
  auto interp = load_interpretation(data("std.json"));
  const std::pair<const char*, const char*> cases[] = {
      {"all x. exi y. Eq(y,x)", "B:3 T:3"},
      {"all x. exi y. Eq(y,x)", "B:3 T:2"},
      {"all x. exi y. Eq(y,x)", ""},
      {"Halts(0,0) & Halts(1,0)", "B:1"},
      {"Halts(0,0) | Halts(1,0)", "T:0"},
      {"all x. ~Halts(x,0) sor Halts(x,0)", "B:0 T:s"},
      {"all x. ~Halts(x,0) sor Halts(x,0)", "B:1 T:s"},
      {"(all x. Eq(x,x)) \\/ ~(all x. Eq(x,x))", "B:0.4 T:1.4"},
      {"prec all x. exi y. Succ(y,x)", "B:0.2 T:0.3 B:1.1 T:1.3"},
  };
  for (const auto& [f, run] : cases) {
    auto r = cli({"winner", "--formula", f, "--interp", data("std.json"), "--run", run, "--json"});
    Verdict v = winner(*game_of(f, interp), run_of(run));
    INFO(f << " on " << run);
    CHECK(json::parse(r.out)["verdict"] == std::string(to_string(v.winner)));
    CHECK(r.code == (v.winner == Player::kTop ? 0 : 1));
  }
}

TEST_CASE("simulate traces replay to the reported verdict") {
  struct Case {
    const char* formula;
    const char* interp;
    const char* machine;
  };
  const Case cases[] = {
      {"all x. exi y. Eq(y,x)", "std.json", "function:id"},
      {"all x. exi y. Eq(y,x)", "std.json", "function:succ"},
      {"(all x. exi y. Eq(y,x)) \\/ ~(all x. exi y. Eq(y,x))", "std.json", "copycat"},
      {"P | ~P", "p_false.json", "choose-left"},
      {"P | ~P", "p_false.json", "choose-right"},
      {"all x. ~Halts(x,0) sor Halts(x,0)", "std.json", "re-switch"},
      {"(all x. all y. Halts(x,y) | ~Halts(x,y)) -> (all x. all y. Accepts(x,y) | ~Accepts(x,y))",
       "std.json", "halt2accept"},
      {"srec BIT", "std.json", "fsm:bit_server.fsm.json"},
      {"prec srec BIT", "std.json", "fsm:bit_server.fsm.json"},
      {"prec all x. exi y. Eq(y,x)", "std.json", "silent"},
  };
  auto dir = scratch_dir();
  std::size_t replayed = 0;
  for (const auto& c : cases) {
    auto interp = load_interpretation(data(c.interp));
    auto game = game_of(c.formula, interp);
    std::string machine = c.machine;
    if (machine.starts_with("fsm:")) machine = "fsm:" + data(machine.substr(4));
    for (int seed = 0; seed < 6; ++seed) {
      auto path = dir / ("trace_" + std::to_string(replayed) + ".txt");
      auto r = cli({"simulate", "--formula", c.formula, "--interp", data(c.interp), "--machine",
                    machine, "--env", "random:" + std::to_string(seed), "--steps", "40",
                    "--trace", path.string(), "--json"});
      INFO(c.formula << " / " << machine << " seed " << seed << ": " << r.err);
      REQUIRE(r.code != 2);
      json j = json::parse(r.out);
      CHECK(j["trace_path"] == path.string());
      Trace trace = parse_trace(slurp(path));
      REQUIRE_FALSE(trace.empty());
      Run run = trace.back().run;
      CHECK(format_run(run) == j["run"].get<std::string>());
      CHECK(std::string(to_string(winner(*game, run).winner)) == j["verdict"].get<std::string>());
      ++replayed;
    }
  }
  CHECK(replayed >= 50u);
  std::filesystem::remove_all(dir);
}

TEST_CASE("simulate with a script environment") {
  auto dir = scratch_dir();
  auto script = dir / "env.txt";
  std::ofstream(script) << "7\n";
  auto r = cli({"simulate", "--formula", "all x. exi y. Eq(y,x)", "--interp", data("std.json"),
                "--machine", "function:id", "--env", "script:" + script.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("run: B:7 T:7\n") != std::string::npos);
  CHECK(r.out.starts_with("#0 env=[7] mach=[7]"));
  std::filesystem::remove_all(dir);
}
