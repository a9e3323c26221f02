#include "col/game.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "col/errors.hpp"
#include "col/run_format.hpp"

namespace col {

std::string_view to_string(Player p) { return p == Player::kTop ? "TOP" : "BOT"; }

ParseError::ParseError(std::size_t position, std::vector<std::string> expected,
                       const std::string& found)
    : Error([&] {
        std::string msg = "parse error at " + std::to_string(position) +
                          ": found " + found + ", expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
          if (i) msg += " | ";
          msg += expected[i];
        }
        return msg;
      }()),
      position_(position),
      expected_(std::move(expected)) {}

std::optional<std::size_t> first_illegal(const Game& g, RunView run) {
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (!g.legal_extension(run.first(i), run[i])) return i;
  }
  return std::nullopt;
}

bool legal(const Game& g, RunView run) { return !first_illegal(g, run); }

Verdict winner(const Game& g, RunView run) {
  if (auto bad = first_illegal(g, run)) {
    Player offender = run[*bad].player;
    return {opponent(offender), Offence{offender, *bad}};
  }
  return {g.winner_of_legal(run), std::nullopt};
}

std::vector<Move> moves(const Game& g, RunView position, Player p,
                        std::size_t bound) {
  if (auto bad = first_illegal(g, position)) {
    throw IllegalPosition("position is illegal at move " +
                          std::to_string(*bad) + ": " + format_run(position));
  }
  std::vector<Move> out = g.enumerate_moves(position, p, bound);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::uint64_t> parse_numeral(std::string_view text) {
  if (text.empty() || (text.size() > 1 && text[0] == '0')) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string numeral(std::uint64_t value) { return std::to_string(value); }

Run flip_labels(RunView run) {
  Run out;
  out.reserve(run.size());
  for (const auto& m : run) out.push_back({opponent(m.player), m.move});
  return out;
}

Run subrun(RunView run, std::string_view prefix) {
  Run out;
  for (const auto& m : run) {
    if (m.move.starts_with(prefix)) {
      out.push_back({m.player, m.move.substr(prefix.size())});
    }
  }
  return out;
}

std::optional<Addressed> split_address(std::string_view move) {
  auto dot = move.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto index = parse_numeral(move.substr(0, dot));
  if (!index) return std::nullopt;
  return Addressed{*index, move.substr(dot + 1)};
}

}  // namespace col
