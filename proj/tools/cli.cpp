#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "col/delay.hpp"
#include "col/errors.hpp"
#include "col/formula.hpp"
#include "col/interpretation.hpp"
#include "col/machine.hpp"
#include "col/registry.hpp"
#include "col/run_format.hpp"
#include "col/service.hpp"

namespace col {

namespace {

using nlohmann::json;

struct Config {
  std::string formula;
  std::string interp;
  std::string run;
  std::string player = "B";
  std::optional<std::size_t> bound;
  std::size_t depth = 4;
  std::string machine;
  std::string env = "silent";
  std::size_t steps = 64;
  std::uint64_t seed = 0;
  std::size_t env_depth = 4;
  std::optional<std::size_t> env_bound;
  std::string trace;
  int port = 8080;
  bool json = false;
};

struct Loaded {
  ExprPtr expr;
  Interpretation interp;
  GamePtr game;
};

Loaded load(const Config& c) {
  Loaded l;
  if (!c.interp.empty()) l.interp = load_interpretation(c.interp);
  l.expr = parse_expr(c.formula);
  l.game = interpret(l.expr, l.interp);
  return l;
}

std::size_t bound_of(const Config& c, const Loaded& l) {
  return c.bound.value_or(l.interp.universe_bound);
}

Player player_of(const std::string& p) {
  if (p == "T" || p == "TOP") return Player::kTop;
  if (p == "B" || p == "BOT") return Player::kBot;
  throw FormatError("player must be T or B, got " + p);
}

// Prints the plain line or the JSON record and returns the exit code.
class Report {
 public:
  Report(std::string command, const Config& c, std::ostream& out)
      : command_(std::move(command)), json_mode_(c.json), out_(out) {
    doc_["command"] = command_;
  }

  void line(const std::string& text) {
    if (!json_mode_) out_ << text << "\n";
  }
  json& doc() { return doc_; }

  int finish(const std::string& verdict, const std::string& run, int code) {
    doc_["verdict"] = verdict;
    doc_["run"] = run;
    if (json_mode_) out_ << doc_.dump() << "\n";
    return code;
  }

 private:
  std::string command_;
  bool json_mode_;
  std::ostream& out_;
  json doc_;
};

std::string verdict_text(const Verdict& v) {
  std::string s(to_string(v.winner));
  if (v.illegal) {
    s += " (illegal move by " + std::string(to_string(v.illegal->player)) + " at " +
         std::to_string(v.illegal->index) + ")";
  }
  return s;
}

json verdict_json(const Verdict& v) {
  json j = {{"winner", std::string(to_string(v.winner))}};
  if (v.illegal) {
    j["offender"] = {{"player", std::string(to_string(v.illegal->player))},
                     {"index", v.illegal->index}};
  }
  return j;
}

int cmd_parse(const Config& c, std::ostream& out) {
  Report r("parse", c, out);
  auto tree = parse(c.formula);
  std::string text = render(*tree.expr);
  r.line(text);
  r.doc()["formula"] = text;
  return r.finish("OK", "", 0);
}

int cmd_legal(const Config& c, std::ostream& out) {
  Report r("legal", c, out);
  Loaded l = load(c);
  Run run = parse_run(c.run);
  if (auto bad = first_illegal(*l.game, run)) {
    r.line("illegal at " + std::to_string(*bad) + " (" +
           std::string(to_string(run[*bad].player)) + ")");
    r.doc()["counterexample"] = {{"index", *bad}};
    return r.finish("illegal", format_run(run), 1);
  }
  r.line("legal");
  return r.finish("legal", format_run(run), 0);
}

int cmd_winner(const Config& c, std::ostream& out) {
  Report r("winner", c, out);
  Loaded l = load(c);
  Run run = parse_run(c.run);
  Verdict v = winner(*l.game, run);
  r.line(verdict_text(v));
  if (v.illegal) r.doc()["counterexample"] = verdict_json(v);
  return r.finish(std::string(to_string(v.winner)), format_run(run),
                  v.winner == Player::kTop ? 0 : 1);
}

int cmd_moves(const Config& c, std::ostream& out) {
  Report r("moves", c, out);
  Loaded l = load(c);
  Run run = parse_run(c.run);
  json list = json::array();
  for (const auto& m : moves(*l.game, run, player_of(c.player), bound_of(c, l))) {
    r.line(format_move(m));
    list.push_back(format_move(m));
  }
  r.doc()["moves"] = list;
  return r.finish("OK", format_run(run), 0);
}

int cmd_delays(const Config& c, std::ostream& out) {
  Report r("delays", c, out);
  Run run = parse_run(c.run);
  json list = json::array();
  for (const auto& d : delays(run, player_of(c.player), run.size())) {
    r.line(format_run(d).empty() ? "(empty)" : format_run(d));
    list.push_back(format_run(d));
  }
  r.doc()["moves"] = list;
  return r.finish("OK", format_run(run), 0);
}

int cmd_static(const Config& c, std::ostream& out) {
  Report r("static", c, out);
  Loaded l = load(c);
  auto cex = static_check(*l.game, c.depth, bound_of(c, l));
  if (!cex) {
    r.line("OK static");
    return r.finish("static", "", 0);
  }
  r.line("not static: " + std::string(to_string(cex->player)) + " wins \"" +
         format_run(cex->run) + "\" but not its delay \"" + format_run(cex->delayed) + "\"");
  r.doc()["counterexample"] = {{"run", format_run(cex->run)},
                               {"delayed", format_run(cex->delayed)},
                               {"player", std::string(to_string(cex->player))}};
  return r.finish("not static", format_run(cex->run), 1);
}

int cmd_simulate(const Config& c, std::ostream& out) {
  Report r("simulate", c, out);
  Loaded l = load(c);
  auto machine = make_strategy(c.machine, *l.expr, l.interp);
  EnvChoice env = make_env(c.env, bound_of(c, l), c.steps);
  Simulation sim = simulate(*l.game, *machine, *env.env, c.steps, env.seed.value_or(c.seed));
  std::string trace = format_trace(sim.trace);
  if (!c.trace.empty()) {
    std::ofstream f(c.trace);
    if (!f) throw FormatError("cannot write trace file: " + c.trace);
    f << trace;
    r.doc()["trace_path"] = c.trace;
  } else if (!c.json) {
    out << trace;
  }
  r.line("run: " + format_run(sim.run));
  r.line(verdict_text(sim.verdict));
  if (sim.verdict.illegal) r.doc()["counterexample"] = verdict_json(sim.verdict);
  return r.finish(std::string(to_string(sim.verdict.winner)), format_run(sim.run),
                  sim.verdict.winner == Player::kTop ? 0 : 1);
}

int cmd_verify(const Config& c, std::ostream& out) {
  Report r("verify", c, out);
  Loaded l = load(c);
  auto machine = make_strategy(c.machine, *l.expr, l.interp);
  VerifyOptions options;
  options.step_budget = c.steps;
  auto loss = find_losing_run(*l.game, *machine, c.env_depth,
                              c.env_bound.value_or(l.interp.universe_bound), options);
  if (!loss) {
    r.line("OK");
    return r.finish("OK", "", 0);
  }
  r.line("losing run: " + format_run(loss->run));
  r.line(verdict_text(loss->verdict));
  r.doc()["counterexample"] = {{"script", format_script(loss->script)},
                               {"verdict", verdict_json(loss->verdict)}};
  return r.finish("losing run", format_run(loss->run), 1);
}

int cmd_serve(const Config& c, std::ostream& out) {
  ServiceOptions options;
  options.default_interp = c.interp;
  options.ttl = ttl_from_env();
  out << "serving on port " << c.port << std::endl;
  return serve(c.port, options) == 0 ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Computability logic games: adjudication, analysis and play"};
  app.require_subcommand(1);

  auto add_formula = [&](CLI::App* sub, bool with_interp) {
    sub->add_option("--formula", c.formula, "formula text")->required();
    if (with_interp) sub->add_option("--interp", c.interp, "interpretation JSON file");
  };
  auto add_bound = [&](CLI::App* sub) {
    sub->add_option("--bound,--universe", c.bound, "numeral / choice bound for enumeration");
  };

  auto* parse_cmd = app.add_subcommand("parse", "parse and pretty-print a formula");
  add_formula(parse_cmd, false);

  auto* legal_cmd = app.add_subcommand("legal", "check a run for legality");
  add_formula(legal_cmd, true);
  legal_cmd->add_option("--run", c.run, "run text")->required();

  auto* winner_cmd = app.add_subcommand("winner", "adjudicate a run");
  add_formula(winner_cmd, true);
  winner_cmd->add_option("--run", c.run, "run text")->required();

  auto* moves_cmd = app.add_subcommand("moves", "list legal moves at a position");
  add_formula(moves_cmd, true);
  moves_cmd->add_option("--run", c.run, "position");
  moves_cmd->add_option("--player", c.player, "T or B");
  add_bound(moves_cmd);

  auto* delays_cmd = app.add_subcommand("delays", "list the delays of a run");
  delays_cmd->add_option("--run", c.run, "run text")->required();
  delays_cmd->add_option("--player", c.player, "T or B");

  auto* static_cmd = app.add_subcommand("static", "bounded static-game check");
  add_formula(static_cmd, true);
  static_cmd->add_option("--depth", c.depth, "run length bound");
  add_bound(static_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "play a machine against an environment");
  add_formula(simulate_cmd, true);
  simulate_cmd->add_option("--machine", c.machine, "machine name")->required();
  simulate_cmd->add_option("--env", c.env, "environment name");
  simulate_cmd->add_option("--steps", c.steps, "scheduler step budget");
  simulate_cmd->add_option("--seed", c.seed, "random seed");
  simulate_cmd->add_option("--trace", c.trace, "write the trace to this file");
  add_bound(simulate_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "exhaustive check against all environments");
  add_formula(verify_cmd, true);
  verify_cmd->add_option("--machine", c.machine, "machine name")->required();
  verify_cmd->add_option("--env-depth", c.env_depth, "environment opportunities");
  verify_cmd->add_option("--env-bound", c.env_bound, "environment move bound");
  verify_cmd->add_option("--steps", c.steps, "scheduler step budget");

  auto* serve_cmd = app.add_subcommand("serve", "run the play service");
  serve_cmd->add_option("--port", c.port, "TCP port");
  serve_cmd->add_option("--interp", c.interp, "default interpretation");

  for (auto* sub : {parse_cmd, legal_cmd, winner_cmd, moves_cmd, delays_cmd, static_cmd,
                    simulate_cmd, verify_cmd}) {
    sub->add_flag("--json", c.json, "machine-readable output");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "col: " << e.what() << "\n";
    return 2;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(c, out);
    if (legal_cmd->parsed()) return cmd_legal(c, out);
    if (winner_cmd->parsed()) return cmd_winner(c, out);
    if (moves_cmd->parsed()) return cmd_moves(c, out);
    if (delays_cmd->parsed()) return cmd_delays(c, out);
    if (static_cmd->parsed()) return cmd_static(c, out);
    if (simulate_cmd->parsed()) return cmd_simulate(c, out);
    if (verify_cmd->parsed()) return cmd_verify(c, out);
    if (serve_cmd->parsed()) return cmd_serve(c, out);
  } catch (const ParseError& e) {
    err << "col: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "col: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace col
