#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "col/expr.hpp"
#include "col/game.hpp"
#include "col/toy_machine.hpp"

namespace col {

struct ConstBinding {
  bool value;
};

// Finite predicate; argument tuples absent from the table are false.
struct TableBinding {
  std::size_t arity;
  std::map<std::vector<std::uint64_t>, bool> rows;
};

enum class Builtin { kHalts, kAccepts, kK, kEq, kSucc };

struct BuiltinBinding {
  Builtin which;
};

// An atom standing for a closed formula, e.g. P := all x. exi y. Eq(y,x).
struct FormulaBinding {
  ExprPtr expr;
};

// An atom standing for a named resource game ("FirstMoverWins", "BIT", "T").
struct GameBinding {
  std::string name;
  GamePtr game;
};

using Binding =
    std::variant<ConstBinding, TableBinding, BuiltinBinding, FormulaBinding, GameBinding>;

struct Interpretation {
  std::map<std::string, Binding> atoms;
  std::shared_ptr<const Catalog> catalog;  // defaults to default_catalog()
  std::size_t universe_bound = 3;

  const Catalog& machines() const;
};

std::size_t builtin_arity(Builtin b);

// JSON document: {"atoms": {...}, "catalog": [...] | "path", "universe_bound": n}.
// A relative catalog path is resolved against `base_dir`.
Interpretation interpretation_from_json(const nlohmann::json& doc,
                                        const std::string& base_dir = ".");
Interpretation load_interpretation(const std::string& path);

// Throws UnboundAtom, ArityMismatch, FreeVariable.
GamePtr interpret(const ExprPtr& e, const Interpretation& interp);

// The same checks interpret() performs, without building a game.
void check_closed(const Expr& e, const Interpretation& interp);

}  // namespace col
