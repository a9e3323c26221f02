#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "col/game.hpp"

namespace col {

// All p-delays of a finite run: reorderings that keep each player's own
// subsequence and never move a p-move to the left of a non-p move it
// followed. Requires run.size() <= max_length.
std::vector<Run> delays(RunView run, Player p, std::size_t max_length);

// Direct check of the two delay conditions.
bool is_delay(RunView candidate, RunView original, Player p);

struct StaticCounterexample {
  Run run;      // legal run won by `player`
  Run delayed;  // a `player`-delay of `run` that `player` does not win
  Player player;
};

struct StaticOptions {
  std::size_t node_limit = 5'000'000;
};

// Exhaustive static-ness probe: every legal run up to `depth` moves over the
// `bound`-restricted alphabet, every delay by its winner. Runs are visited
// depth first with TOP moves before BOT moves, each in sorted order; the
// first failure is returned. Throws BudgetExceeded past the node limit.
std::optional<StaticCounterexample> static_check(const Game& g, std::size_t depth,
                                                 std::size_t bound,
                                                 StaticOptions options = {});

}  // namespace col
