#pragma once

// Shared helpers: standard interpretations, a random formula generator and an
// exhaustive comparison of two games' trees.

#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "col/combinators.hpp"
#include "col/expr.hpp"
#include "col/formula.hpp"
#include "col/interpretation.hpp"
#include "col/run_format.hpp"

namespace col::testing {

inline Interpretation interp_from(const char* text) {
  return interpretation_from_json(nlohmann::json::parse(text));
}

// Eq, Succ, Halts, Accepts, K over the default catalog; numerals below 10.
inline Interpretation standard() {
  return interp_from(R"({"universe_bound": 10, "atoms": {
      "Eq": {"kind": "builtin", "name": "Eq"},
      "Succ": {"kind": "builtin", "name": "Succ"},
      "Halts": {"kind": "builtin", "name": "Halts"},
      "Accepts": {"kind": "builtin", "name": "Accepts"},
      "K": {"kind": "builtin", "name": "K"}}})");
}

// P true, Q false, E(x) = x is even below 4.
inline Interpretation elementary_atoms() {
  return interp_from(R"({"universe_bound": 3, "atoms": {
      "P": {"kind": "const", "value": true},
      "Q": {"kind": "const", "value": false},
      "E": {"kind": "predicate", "table": [[0, true], [1, false], [2, true], [3, false]]}}})");
}

inline GamePtr game_of(const std::string& formula, const Interpretation& interp) {
  return interpret(parse_expr(formula), interp);
}

inline Run run_of(const std::string& text) { return parse_run(text); }

// Random closed formulas over P, Q and E(x).
class FormulaGenerator {
 public:
  explicit FormulaGenerator(std::uint64_t seed) : rng_(seed) {}

  ExprPtr operator()(int depth) { return gen(depth, {}); }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  ExprPtr leaf(const std::vector<std::string>& vars) {
    switch (pick(vars.empty() ? 5 : 6)) {
      case 0:
        return expr::atom("P");
      case 1:
        return expr::atom("Q");
      case 2:
        return expr::elementary(pick(2) == 0);
      case 3:
        return expr::atom("E", {Term::num(static_cast<std::uint64_t>(pick(3)))});
      case 4:
        return pick(4) == 0 ? expr::bit() : expr::atom("P");
      default:
        return expr::atom("E", {Term::var(vars[pick(static_cast<int>(vars.size()))])});
    }
  }

  ExprPtr gen(int depth, std::vector<std::string> vars) {
    if (depth <= 0 || pick(4) == 0) return leaf(vars);
    static const ExprKind binaries[] = {ExprKind::kChand, ExprKind::kChor, ExprKind::kPand,
                                        ExprKind::kPor,   ExprKind::kPimpl, ExprKind::kPrimpl,
                                        ExprKind::kSand,  ExprKind::kSor};
    switch (pick(4)) {
      case 0:
      case 1:
        return expr::binary(binaries[pick(8)], gen(depth - 1, vars), gen(depth - 1, vars));
      case 2: {
        switch (pick(6)) {
          case 0:
            return expr::neg(gen(depth - 1, vars));
          case 1:
            return expr::unary(ExprKind::kPrec, gen(depth - 1, vars));
          case 2:
            return expr::bounded(ExprKind::kPrecBounded, pick(3), gen(depth - 1, vars));
          case 3:
            return expr::unary(ExprKind::kSrec, gen(depth - 1, vars));
          case 4:
            return expr::bounded(ExprKind::kTau, pick(4), gen(depth - 1, vars));
          default:
            return expr::unary(ExprKind::kStack, gen(depth - 1, vars));
        }
      }
      default: {
        std::string v = "x" + std::to_string(vars.size());
        vars.push_back(v);
        return expr::quant(pick(2) ? ExprKind::kChall : ExprKind::kChexists, v,
                           gen(depth - 1, vars));
      }
    }
  }

  std::mt19937_64 rng_;
};

// Both games have the same legal moves for both players at every legal
// position up to `depth` and the same winner everywhere. Writes the first
// discrepancy to `why`.
inline bool run_equivalent(const Game& a, const Game& b, std::size_t depth, std::size_t bound,
                           std::string* why, Run& position) {
  if (winner(a, position) != winner(b, position)) {
    if (why) *why = "winners differ at \"" + format_run(position) + "\"";
    return false;
  }
  if (position.size() >= depth) return true;
  for (Player p : {Player::kTop, Player::kBot}) {
    auto ma = moves(a, position, p, bound);
    if (ma != moves(b, position, p, bound)) {
      if (why) {
        *why = "moves of " + std::string(to_string(p)) + " differ at \"" +
               format_run(position) + "\"";
      }
      return false;
    }
    for (const auto& m : ma) {
      position.push_back({p, m});
      bool ok = run_equivalent(a, b, depth, bound, why, position);
      position.pop_back();
      if (!ok) return false;
    }
  }
  return true;
}

inline bool run_equivalent(const Game& a, const Game& b, std::size_t depth, std::size_t bound,
                           std::string* why = nullptr) {
  Run position;
  return run_equivalent(a, b, depth, bound, why, position);
}

}  // namespace col::testing
