#pragma once

// Textual run format: whitespace separated tokens `T:<move>` / `B:<move>`.
// The empty move is written `_`, and so is an empty residue after a trailing
// address dot (`B:4._` is the move "4."), so `_` cannot appear literally as
// the final segment of a move.

#include <string>
#include <string_view>
#include <vector>

#include "col/game.hpp"

namespace col {

std::string format_move(const Move& m);
Move parse_move(std::string_view text);

std::string format_labeled(const LabeledMove& m);
LabeledMove parse_labeled(std::string_view token);

std::string format_run(RunView run);
Run parse_run(std::string_view text);

bool valid_move(std::string_view m);

}  // namespace col
