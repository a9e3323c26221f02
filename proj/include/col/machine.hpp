#pragma once

// Interactive machines, environments and the simulation scheduler.
//
// One scheduler cycle: the environment appends any finite number of ⊥ moves;
// then the machine observes everything it has not yet seen and emits at most
// one ⊤ move. An illegal move ends the play and is adjudicated against its
// maker. A cycle with no moves from either side, an exhausted environment
// and an idle machine also ends the play.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "col/game.hpp"

namespace col {

enum class StrategyKind { kUnrestricted, kFiniteState };

struct StepResult {
  std::optional<Move> emitted;
  // The machine has internal work left even if nothing new is observed.
  bool busy = false;
};

class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual StrategyKind kind() const { return StrategyKind::kUnrestricted; }
  virtual StepResult step(RunView newly_observed) = 0;
  virtual std::unique_ptr<Strategy> clone() const = 0;
};

using Rng = std::mt19937_64;

class EnvScript {
 public:
  virtual ~EnvScript() = default;

  virtual std::vector<Move> step(const Game& g, RunView position, Rng& rng) = 0;
  // No further moves will ever be produced.
  virtual bool exhausted() const = 0;
  virtual std::unique_ptr<EnvScript> clone() const = 0;
};

// Per cycle move lists; replays the same moves regardless of the position.
class ScriptedEnv final : public EnvScript {
 public:
  explicit ScriptedEnv(std::vector<std::vector<Move>> cycles);

  std::vector<Move> step(const Game& g, RunView position, Rng& rng) override;
  bool exhausted() const override { return next_ >= cycles_.size(); }
  std::unique_ptr<EnvScript> clone() const override;

  const std::vector<std::vector<Move>>& cycles() const { return cycles_; }

 private:
  std::vector<std::vector<Move>> cycles_;
  std::size_t next_ = 0;
};

class SilentEnv final : public EnvScript {
 public:
  std::vector<Move> step(const Game&, RunView, Rng&) override { return {}; }
  bool exhausted() const override { return true; }
  std::unique_ptr<EnvScript> clone() const override;
};

// Plays a uniformly chosen legal move (within `bound`) with probability
// `activity` in each of its first `opportunities` cycles.
class RandomEnv final : public EnvScript {
 public:
  RandomEnv(std::size_t bound, double activity, std::size_t opportunities);

  std::vector<Move> step(const Game& g, RunView position, Rng& rng) override;
  bool exhausted() const override { return used_ >= opportunities_; }
  std::unique_ptr<EnvScript> clone() const override;

 private:
  std::size_t bound_;
  double activity_;
  std::size_t opportunities_;
  std::size_t used_ = 0;
};

// Script files: one line per cycle, whitespace separated moves in the run
// format's move notation; an empty line is a silent cycle.
ScriptedEnv load_script(const std::string& path);
ScriptedEnv parse_script(const std::string& text);
std::string format_script(const ScriptedEnv& script);

class SilentStrategy final : public Strategy {
 public:
  StepResult step(RunView) override { return {}; }
  std::unique_ptr<Strategy> clone() const override;
};

// Emits a fixed list of moves, one per step.
class FixedStrategy final : public Strategy {
 public:
  explicit FixedStrategy(std::vector<Move> moves);
  StepResult step(RunView) override;
  std::unique_ptr<Strategy> clone() const override;

 private:
  std::vector<Move> moves_;
  std::size_t next_ = 0;
};

// Holds every emission of the wrapped strategy back by one step.
class DelayedStrategy final : public Strategy {
 public:
  explicit DelayedStrategy(std::unique_ptr<Strategy> inner);
  StrategyKind kind() const override { return inner_->kind(); }
  StepResult step(RunView newly_observed) override;
  std::unique_ptr<Strategy> clone() const override;

 private:
  std::unique_ptr<Strategy> inner_;
  std::optional<Move> held_;
};

struct TraceStep {
  std::size_t index = 0;
  std::vector<Move> env;
  std::optional<Move> machine;
  Run run;  // cumulative
};

using Trace = std::vector<TraceStep>;

// `#<idx> env=[<moves>] mach=[<move?>] run="<run>"`, one line per step.
std::string format_trace(const Trace& trace);
Trace parse_trace(const std::string& text);

struct Simulation {
  Run run;
  Verdict verdict;
  Trace trace;
};

// One live play. Copyable through clone() so searches can branch.
class Scheduler {
 public:
  Scheduler(const Game& g, std::unique_ptr<Strategy> machine);
  Scheduler clone() const;

  // Runs one cycle with the given environment moves. Returns false once the
  // play has ended (illegal move or quiescence).
  bool cycle(const std::vector<Move>& env_moves, bool env_exhausted);

  bool finished() const { return finished_; }
  const Run& run() const { return run_; }
  const Trace& trace() const { return trace_; }
  Verdict verdict() const;
  std::size_t cycles() const { return cycles_; }
  // The machine neither emitted nor reported pending work in the last cycle.
  bool machine_idle() const { return machine_idle_; }
  void set_recording(bool on) { recording_ = on; }

 private:
  bool append(Player p, const Move& m);

  const Game* game_;
  std::unique_ptr<Strategy> machine_;
  Run run_;
  std::size_t observed_ = 0;
  std::size_t cycles_ = 0;
  bool finished_ = false;
  bool machine_idle_ = false;
  std::optional<Offence> offence_;
  bool recording_ = true;
  Trace trace_;
};

Simulation simulate(const Game& g, Strategy& machine, EnvScript& env,
                    std::size_t step_budget, std::uint64_t seed);

struct VerifyOptions {
  std::size_t step_budget = 64;
  std::size_t node_limit = 5'000'000;
};

struct LosingRun {
  Run run;
  Verdict verdict;
  ScriptedEnv script;
};

// Exhaustive environment class: in each of its first `env_depth` cycles the
// environment plays nothing or one legal move below `env_bound`; afterwards
// it is silent. Scripts are explored with the silent choice first, then
// moves in sorted order. Returns the first script the machine loses against.
// Throws BudgetExceeded past the node limit.
std::optional<LosingRun> find_losing_run(const Game& g, const Strategy& machine,
                                         std::size_t env_depth, std::size_t env_bound,
                                         VerifyOptions options = {});

struct VerifyOk {};
using VerifyResult = std::variant<VerifyOk, LosingRun>;

VerifyResult verify_wins(const Game& g, const Strategy& machine, std::size_t env_depth,
                         std::size_t env_bound, VerifyOptions options = {});

std::optional<ScriptedEnv> defeat_search(const Game& g, const Strategy& machine,
                                         std::size_t env_depth, std::size_t env_bound,
                                         VerifyOptions options = {});

}  // namespace col
