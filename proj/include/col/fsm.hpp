#pragma once

// Finite-state machine strategies (HPM*).
//
// The device has no tape: it consumes the newly observed labeled moves one
// per internal tick through its transition table and, when its state changed
// during the step, emits the move attached to the final state.
//
// Alphabet entries are labeled-move patterns; `*` stands for one numeral
// address segment, so "B:*.1" matches "B:0.1" and "B:17.1" alike. Moves that
// match no entry take the state's sink transition. An emission may copy the
// leading address segments of the move that last changed the state, which is
// how one finite table serves every copy of a recurrence.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "col/game.hpp"
#include "col/machine.hpp"

namespace col {

struct FsmEmission {
  std::size_t copy = 0;  // address segments taken from the triggering move
  Move move;
};

struct FsmSpec {
  std::vector<std::string> states;
  std::size_t start = 0;
  std::vector<LabeledMove> alphabet;  // patterns
  // transition[state][letter]
  std::vector<std::vector<std::size_t>> transition;
  std::vector<std::size_t> sink;
  std::vector<std::optional<FsmEmission>> emission;
};

// Throws MalformedSpec unless every table is total over states × alphabet.
void validate(const FsmSpec& spec);

bool pattern_matches(const LabeledMove& pattern, const LabeledMove& m);

class FsmStrategy final : public Strategy {
 public:
  explicit FsmStrategy(std::shared_ptr<const FsmSpec> spec);

  StrategyKind kind() const override { return StrategyKind::kFiniteState; }
  StepResult step(RunView newly_observed) override;
  std::unique_ptr<Strategy> clone() const override;

  std::size_t state() const { return state_; }

 private:
  std::shared_ptr<const FsmSpec> spec_;
  std::size_t state_;
  bool started_ = false;
  Move trigger_;
};

std::unique_ptr<Strategy> fsm_strategy(FsmSpec spec);

// {"states": [...], "start": name, "alphabet": [labeled patterns],
//  "transitions": {state: {pattern: state}}, "sink": {state: state},
//  "emissions": {state: null | move | {"copy": k, "move": suffix}}}
// A missing sink entry means "stay".
FsmSpec fsm_from_json(const nlohmann::json& doc);
nlohmann::json fsm_to_json(const FsmSpec& spec);
FsmSpec load_fsm(const std::string& path);

// Four states: the last written bit, and whether it was last asked for. Wins
// bit_game() and srecurrence(bit_game()).
FsmSpec bit_server_fsm();

// Every machine with at most `max_states` states that reacts to one letter of
// `alphabet`, up to renaming of states: the start row is a restricted growth
// string, all other rows and the sink stay put, and each state emits nothing
// or one of `outputs`. Against an environment that makes a single move these
// cover the behavior of every FSM of that size: only the start row is ever
// consulted on an environment move, and after the first emission a second
// one can only be an extra move.
std::vector<FsmSpec> enumerate_reactive_fsms(const std::vector<LabeledMove>& alphabet,
                                             const std::vector<Move>& outputs,
                                             std::size_t max_states);

}  // namespace col
