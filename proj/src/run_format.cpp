#include "col/run_format.hpp"

#include <cctype>
#include <sstream>

#include "col/errors.hpp"

namespace col {

bool valid_move(std::string_view m) {
  for (unsigned char c : m) {
    if (!std::isgraph(c) || c == ':') return false;
  }
  return true;
}

std::string format_move(const Move& m) {
  if (m.empty() || m.back() == '.') return m + "_";
  return m;
}

Move parse_move(std::string_view text) {
  if (text.empty()) throw FormatError("empty move token (write the empty move as _)");
  if (!valid_move(text)) {
    throw FormatError("move contains whitespace, ':' or a non-printable character: " +
                      std::string(text));
  }
  if (text == "_") return {};
  if (text.size() >= 2 && text.ends_with("._")) {
    return Move(text.substr(0, text.size() - 1));
  }
  return Move(text);
}

std::string format_labeled(const LabeledMove& m) {
  return std::string(m.player == Player::kTop ? "T:" : "B:") + format_move(m.move);
}

LabeledMove parse_labeled(std::string_view token) {
  if (token.size() < 3 || token[1] != ':' || (token[0] != 'T' && token[0] != 'B')) {
    throw FormatError("malformed labeled move: " + std::string(token));
  }
  Player p = token[0] == 'T' ? Player::kTop : Player::kBot;
  return {p, parse_move(token.substr(2))};
}

std::string format_run(RunView run) {
  std::string out;
  for (const auto& m : run) {
    if (!out.empty()) out += ' ';
    out += format_labeled(m);
  }
  return out;
}

Run parse_run(std::string_view text) {
  Run out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) out.push_back(parse_labeled(token));
  return out;
}

}  // namespace col
