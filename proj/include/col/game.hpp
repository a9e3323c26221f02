#pragma once

// Runs, games and adjudication.
//
// A game is a legality relation given by single-move extensions of a legal
// position, together with a winner function on finite legal runs. Legality of
// a whole run is always derived from extensions, so the set of legal runs is
// prefix closed by construction.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace col {

enum class Player : std::uint8_t { kTop, kBot };

constexpr Player opponent(Player p) {
  return p == Player::kTop ? Player::kBot : Player::kTop;
}

std::string_view to_string(Player p);

// Any finite string of printable non-whitespace characters except ':'.
// The empty string is a move.
using Move = std::string;

struct LabeledMove {
  Player player;
  Move move;

  friend bool operator==(const LabeledMove&, const LabeledMove&) = default;
  friend auto operator<=>(const LabeledMove&, const LabeledMove&) = default;
};

using Run = std::vector<LabeledMove>;
using RunView = std::span<const LabeledMove>;

struct Offence {
  Player player;
  std::size_t index;

  friend bool operator==(const Offence&, const Offence&) = default;
};

struct Verdict {
  Player winner;
  // Present iff the adjudicated run is illegal; then winner is the opponent
  // of the offender.
  std::optional<Offence> illegal;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

class Game {
 public:
  virtual ~Game() = default;

  // Whether appending `m` to the legal position `position` keeps it legal.
  virtual bool legal_extension(RunView position,
                               const LabeledMove& m) const = 0;

  // Winner of a finite legal run.
  virtual Player winner_of_legal(RunView run) const = 0;

  // Every move `p` may legally make at the legal `position`, restricted to
  // numerals, choice tokens and copy indices below `bound`. Order and
  // duplicates are unspecified; use moves() for the canonical set.
  virtual std::vector<Move> enumerate_moves(RunView position, Player p,
                                            std::size_t bound) const = 0;
};

using GamePtr = std::shared_ptr<const Game>;

bool legal(const Game& g, RunView run);

// Index of the first move that is not a legal extension of its prefix.
std::optional<std::size_t> first_illegal(const Game& g, RunView run);

Verdict winner(const Game& g, RunView run);

// Sorted, duplicate-free legal moves. Throws IllegalPosition.
std::vector<Move> moves(const Game& g, RunView position, Player p,
                        std::size_t bound);

// Canonical decimal numerals: "0" or a digit string without a leading zero
// that fits in 64 bits.
std::optional<std::uint64_t> parse_numeral(std::string_view text);
std::string numeral(std::uint64_t value);

Run flip_labels(RunView run);

// Moves of `run` whose text starts with `prefix`, with the prefix removed.
Run subrun(RunView run, std::string_view prefix);

// Splits "<numeral>.<rest>" into its index and rest.
struct Addressed {
  std::uint64_t index;
  std::string_view rest;
};
std::optional<Addressed> split_address(std::string_view move);

}  // namespace col
