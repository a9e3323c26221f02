#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace col {

// Exit codes: 0 success / TOP / OK, 1 BOT / counterexample / losing run,
// 2 usage, parse and input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace col
