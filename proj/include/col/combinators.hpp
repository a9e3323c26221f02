#pragma once

// Game operations.
//
// Move addressing:
//   parallel, implication      "0.α" / "1.α"
//   ⫰ copies                   "<i>.α"
//   choice, quantifier          bare "0" / "1" / numeral, then the chosen
//                               component's moves unprefixed
//   △ ▽                        "0.α" / "1.α" plus the bare switch "s"
//   ⟆                          "<copy>.α" plus the bare switch "s"
//   STACK                      "<copy>.α" plus "+" (push) and "-" (pop)
//
// In the sequential family the player who controls switching (pushing) may
// only move in the active copy; its adversary may keep moving in any copy
// that has been opened, abandoned ones included. Abandoned copies do not
// count towards the winner.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "col/game.hpp"

namespace col {

enum class ChoiceKind { kChand, kChor };
enum class QuantKind { kChall, kChexists };
enum class ParallelKind { kPand, kPor };
enum class SequentialKind { kSand, kSor };

using QuantBody = std::function<GamePtr(std::uint64_t)>;

GamePtr elementary(bool truth);
GamePtr negation(GamePtr g);
GamePtr choice(ChoiceKind kind, GamePtr g, GamePtr h);
GamePtr choice_quant(QuantKind kind, QuantBody body);
GamePtr parallel(ParallelKind kind, GamePtr g, GamePtr h);
GamePtr pimpl(GamePtr g, GamePtr h);
GamePtr precurrence(GamePtr g, std::optional<std::size_t> copies = std::nullopt);
GamePtr primpl(GamePtr g, GamePtr h);
GamePtr sequential(SequentialKind kind, GamePtr g, GamePtr h);
GamePtr srecurrence(GamePtr g);
GamePtr tau(std::size_t budget, GamePtr g);
GamePtr stack(GamePtr g);

// Write-once bit: ⊥ writes 0/1, ⊥ requests a read with the empty move, ⊤
// answers.
GamePtr bit_game();
// ⫰⟆BIT.
GamePtr memory_game();

// Every move is legal for both players and the first mover wins; the empty
// run is won by ⊤. The standard non-static game.
GamePtr first_mover_wins();

}  // namespace col
