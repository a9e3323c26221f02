#include "col/machine.hpp"

#include <fstream>
#include <sstream>

#include "col/errors.hpp"
#include "col/run_format.hpp"

namespace col {

ScriptedEnv::ScriptedEnv(std::vector<std::vector<Move>> cycles)
    : cycles_(std::move(cycles)) {}

std::vector<Move> ScriptedEnv::step(const Game&, RunView, Rng&) {
  if (next_ >= cycles_.size()) return {};
  return cycles_[next_++];
}

std::unique_ptr<EnvScript> ScriptedEnv::clone() const {
  return std::make_unique<ScriptedEnv>(*this);
}

std::unique_ptr<EnvScript> SilentEnv::clone() const {
  return std::make_unique<SilentEnv>(*this);
}

RandomEnv::RandomEnv(std::size_t bound, double activity, std::size_t opportunities)
    : bound_(bound), activity_(activity), opportunities_(opportunities) {}

std::vector<Move> RandomEnv::step(const Game& g, RunView position, Rng& rng) {
  if (used_ >= opportunities_) return {};
  ++used_;
  std::bernoulli_distribution act(activity_);
  if (!act(rng)) return {};
  std::vector<Move> options = moves(g, position, Player::kBot, bound_);
  if (options.empty()) return {};
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  return {options[pick(rng)]};
}

std::unique_ptr<EnvScript> RandomEnv::clone() const {
  return std::make_unique<RandomEnv>(*this);
}

ScriptedEnv parse_script(const std::string& text) {
  std::vector<std::vector<Move>> cycles;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::vector<Move> cycle;
    std::string token;
    while (tokens >> token) cycle.push_back(parse_move(token));
    cycles.push_back(std::move(cycle));
  }
  return ScriptedEnv(std::move(cycles));
}

ScriptedEnv load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open script file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_script(buffer.str());
}

std::string format_script(const ScriptedEnv& script) {
  std::string out;
  for (const auto& cycle : script.cycles()) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) out += ' ';
      out += format_move(cycle[i]);
    }
    out += '\n';
  }
  return out;
}

std::unique_ptr<Strategy> SilentStrategy::clone() const {
  return std::make_unique<SilentStrategy>(*this);
}

FixedStrategy::FixedStrategy(std::vector<Move> moves) : moves_(std::move(moves)) {}

StepResult FixedStrategy::step(RunView) {
  if (next_ >= moves_.size()) return {};
  StepResult r{moves_[next_++], false};
  r.busy = next_ < moves_.size();
  return r;
}

std::unique_ptr<Strategy> FixedStrategy::clone() const {
  return std::make_unique<FixedStrategy>(*this);
}

DelayedStrategy::DelayedStrategy(std::unique_ptr<Strategy> inner)
    : inner_(std::move(inner)) {}

StepResult DelayedStrategy::step(RunView newly_observed) {
  StepResult out;
  out.emitted = std::move(held_);
  held_.reset();
  StepResult r = inner_->step(newly_observed);
  held_ = std::move(r.emitted);
  out.busy = r.busy || held_.has_value();
  return out;
}

std::unique_ptr<Strategy> DelayedStrategy::clone() const {
  auto copy = std::make_unique<DelayedStrategy>(inner_->clone());
  copy->held_ = held_;
  return copy;
}

std::string format_trace(const Trace& trace) {
  std::string out;
  for (const auto& s : trace) {
    out += "#" + std::to_string(s.index) + " env=[";
    for (std::size_t i = 0; i < s.env.size(); ++i) {
      if (i) out += ' ';
      out += format_move(s.env[i]);
    }
    out += "] mach=[";
    if (s.machine) out += format_move(*s.machine);
    out += "] run=\"" + format_run(s.run) + "\"\n";
  }
  return out;
}

Trace parse_trace(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto bad = [&] { return FormatError("malformed trace line: " + line); };
    if (line[0] != '#') throw bad();
    auto env_at = line.find(" env=[");
    auto mach_at = line.find("] mach=[");
    auto run_at = line.find("] run=\"");
    if (env_at == std::string::npos || mach_at == std::string::npos ||
        run_at == std::string::npos || line.back() != '"' || mach_at < env_at ||
        run_at < mach_at) {
      throw bad();
    }
    TraceStep step;
    step.index = std::stoul(line.substr(1, env_at - 1));
    std::istringstream env(line.substr(env_at + 6, mach_at - env_at - 6));
    std::string token;
    while (env >> token) step.env.push_back(parse_move(token));
    std::string mach = line.substr(mach_at + 8, run_at - mach_at - 8);
    if (!mach.empty()) step.machine = parse_move(mach);
    std::size_t run_begin = run_at + 7;
    step.run = parse_run(line.substr(run_begin, line.size() - 1 - run_begin));
    trace.push_back(std::move(step));
  }
  return trace;
}

Scheduler::Scheduler(const Game& g, std::unique_ptr<Strategy> machine)
    : game_(&g), machine_(std::move(machine)) {}

Scheduler Scheduler::clone() const {
  Scheduler copy(*game_, machine_->clone());
  copy.run_ = run_;
  copy.observed_ = observed_;
  copy.cycles_ = cycles_;
  copy.finished_ = finished_;
  copy.machine_idle_ = machine_idle_;
  copy.offence_ = offence_;
  copy.recording_ = recording_;
  copy.trace_ = trace_;
  return copy;
}

bool Scheduler::append(Player p, const Move& m) {
  bool ok = valid_move(m) && game_->legal_extension(run_, {p, m});
  run_.push_back({p, m});
  if (!ok) {
    offence_ = Offence{p, run_.size() - 1};
    finished_ = true;
  }
  return ok;
}

bool Scheduler::cycle(const std::vector<Move>& env_moves, bool env_exhausted) {
  if (finished_) return false;
  TraceStep record;
  record.index = cycles_++;
  auto done = [&] {
    if (recording_) {
      record.run = run_;
      trace_.push_back(std::move(record));
    }
    return !finished_;
  };
  for (const auto& m : env_moves) {
    record.env.push_back(m);
    if (!append(Player::kBot, m)) return done();
  }
  RunView fresh = RunView(run_).subspan(observed_);
  StepResult r = machine_->step(fresh);
  observed_ = run_.size();
  machine_idle_ = !r.emitted && !r.busy;
  if (r.emitted) {
    record.machine = *r.emitted;
    if (!append(Player::kTop, *r.emitted)) return done();
  }
  if (env_moves.empty() && !r.emitted && !r.busy && env_exhausted) finished_ = true;
  return done();
}

Verdict Scheduler::verdict() const {
  if (offence_) return {opponent(offence_->player), offence_};
  return {game_->winner_of_legal(run_), std::nullopt};
}

Simulation simulate(const Game& g, Strategy& machine, EnvScript& env,
                    std::size_t step_budget, std::uint64_t seed) {
  Rng rng(seed);
  Scheduler s(g, machine.clone());
  for (std::size_t i = 0; i < step_budget; ++i) {
    std::vector<Move> env_moves = env.step(g, s.run(), rng);
    if (!s.cycle(env_moves, env.exhausted())) break;
  }
  return {s.run(), s.verdict(), s.trace()};
}

namespace {

class LossSearch {
 public:
  LossSearch(const Game& g, std::size_t env_depth, std::size_t env_bound,
             VerifyOptions options)
      : game_(g), depth_(env_depth), bound_(env_bound), options_(options) {}

  std::optional<LosingRun> explore(Scheduler& s, std::size_t k) {
    if (++nodes_ > options_.node_limit) {
      throw BudgetExceeded("environment search: node limit " +
                           std::to_string(options_.node_limit) + " exceeded");
    }
    if (s.finished() || s.cycles() >= options_.step_budget || k >= depth_) {
      while (!s.finished() && s.cycles() < options_.step_budget) s.cycle({}, true);
      Verdict v = s.verdict();
      if (v.winner == Player::kTop) return std::nullopt;
      return LosingRun{s.run(), v, ScriptedEnv(script_)};
    }
    std::vector<std::vector<Move>> options{{}};
    for (Move& m : moves(game_, s.run(), Player::kBot, bound_)) {
      options.push_back({std::move(m)});
    }
    bool last = k + 1 >= depth_;
    for (const auto& option : options) {
      Scheduler branch = s.clone();
      script_.push_back(option);
      branch.cycle(option, last);
      auto found = explore(branch, k + 1);
      script_.pop_back();
      if (found) return found;
    }
    return std::nullopt;
  }

 private:
  const Game& game_;
  std::size_t depth_;
  std::size_t bound_;
  VerifyOptions options_;
  std::size_t nodes_ = 0;
  std::vector<std::vector<Move>> script_;
};

}  // namespace

std::optional<LosingRun> find_losing_run(const Game& g, const Strategy& machine,
                                         std::size_t env_depth, std::size_t env_bound,
                                         VerifyOptions options) {
  Scheduler root(g, machine.clone());
  root.set_recording(false);
  LossSearch search(g, env_depth, env_bound, options);
  return search.explore(root, 0);
}

VerifyResult verify_wins(const Game& g, const Strategy& machine, std::size_t env_depth,
                         std::size_t env_bound, VerifyOptions options) {
  if (auto loss = find_losing_run(g, machine, env_depth, env_bound, options)) {
    return std::move(*loss);
  }
  return VerifyOk{};
}

std::optional<ScriptedEnv> defeat_search(const Game& g, const Strategy& machine,
                                         std::size_t env_depth, std::size_t env_bound,
                                         VerifyOptions options) {
  if (auto loss = find_losing_run(g, machine, env_depth, env_bound, options)) {
    return std::move(loss->script);
  }
  return std::nullopt;
}

}  // namespace col
