#include "col/delay.hpp"

#include <string>

#include "col/errors.hpp"

namespace col {
namespace {

// For each p-move (in order), how many non-p moves precede it.
std::vector<std::size_t> precedence_profile(RunView run, Player p) {
  std::vector<std::size_t> out;
  std::size_t others = 0;
  for (const auto& m : run) {
    if (m.player == p) {
      out.push_back(others);
    } else {
      ++others;
    }
  }
  return out;
}

Run moves_of(RunView run, Player p) {
  Run out;
  for (const auto& m : run) {
    if (m.player == p) out.push_back(m);
  }
  return out;
}

void interleave(const Run& own, const Run& others,
                const std::vector<std::size_t>& min_before, std::size_t i,
                std::size_t j, Run& current, std::vector<Run>& out) {
  if (i == own.size() && j == others.size()) {
    out.push_back(current);
    return;
  }
  // Take the next p-move only once enough non-p moves have gone before it.
  if (i < own.size() && j >= min_before[i]) {
    current.push_back(own[i]);
    interleave(own, others, min_before, i + 1, j, current, out);
    current.pop_back();
  }
  if (j < others.size()) {
    current.push_back(others[j]);
    interleave(own, others, min_before, i, j + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Run> delays(RunView run, Player p, std::size_t max_length) {
  if (run.size() > max_length) {
    throw Error("delays: run of length " + std::to_string(run.size()) +
                " exceeds the limit " + std::to_string(max_length));
  }
  Run own = moves_of(run, p);
  Run others = moves_of(run, opponent(p));
  std::vector<std::size_t> min_before = precedence_profile(run, p);
  std::vector<Run> out;
  Run current;
  current.reserve(run.size());
  interleave(own, others, min_before, 0, 0, current, out);
  return out;
}

bool is_delay(RunView candidate, RunView original, Player p) {
  if (candidate.size() != original.size()) return false;
  for (Player q : {Player::kTop, Player::kBot}) {
    if (moves_of(candidate, q) != moves_of(original, q)) return false;
  }
  auto before_candidate = precedence_profile(candidate, p);
  auto before_original = precedence_profile(original, p);
  for (std::size_t n = 0; n < before_original.size(); ++n) {
    if (before_candidate[n] < before_original[n]) return false;
  }
  return true;
}

namespace {

class StaticSearch {
 public:
  StaticSearch(const Game& g, std::size_t depth, std::size_t bound,
               StaticOptions options)
      : game_(g), depth_(depth), bound_(bound), options_(options) {}

  std::optional<StaticCounterexample> visit(Run& run) {
    if (++nodes_ > options_.node_limit) {
      throw BudgetExceeded("static_check: node limit " +
                           std::to_string(options_.node_limit) + " exceeded");
    }
    if (auto found = check(run)) return found;
    if (run.size() == depth_) return std::nullopt;
    for (Player p : {Player::kTop, Player::kBot}) {
      for (Move& m : moves(game_, run, p, bound_)) {
        run.push_back({p, std::move(m)});
        auto found = visit(run);
        run.pop_back();
        if (found) return found;
      }
    }
    return std::nullopt;
  }

 private:
  std::optional<StaticCounterexample> check(const Run& run) const {
    Player w = game_.winner_of_legal(run);
    for (Run& omega : delays(run, w, run.size())) {
      if (winner(game_, omega).winner != w) {
        return StaticCounterexample{run, std::move(omega), w};
      }
    }
    return std::nullopt;
  }

  const Game& game_;
  std::size_t depth_;
  std::size_t bound_;
  StaticOptions options_;
  std::size_t nodes_ = 0;
};

}  // namespace

std::optional<StaticCounterexample> static_check(const Game& g, std::size_t depth,
                                                 std::size_t bound,
                                                 StaticOptions options) {
  StaticSearch search(g, depth, bound, options);
  Run run;
  return search.visit(run);
}

}  // namespace col
