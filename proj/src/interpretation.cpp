#include "col/interpretation.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "col/combinators.hpp"
#include "col/errors.hpp"
#include "col/formula.hpp"

namespace col {

const Catalog& Interpretation::machines() const {
  return catalog ? *catalog : default_catalog();
}

std::size_t builtin_arity(Builtin) { return 2; }

namespace {

using Scope = std::map<std::string, std::uint64_t>;

Builtin builtin_named(const std::string& name) {
  if (name == "Halts") return Builtin::kHalts;
  if (name == "Accepts") return Builtin::kAccepts;
  if (name == "K") return Builtin::kK;
  if (name == "Eq") return Builtin::kEq;
  if (name == "Succ") return Builtin::kSucc;
  throw FormatError("unknown builtin predicate: " + name);
}

GamePtr resource_named(const std::string& name) {
  if (name == "FirstMoverWins") return first_mover_wins();
  if (name == "BIT") return bit_game();
  if (name == "T") return memory_game();
  throw FormatError("unknown resource game: " + name);
}

bool evaluate_builtin(Builtin b, const std::vector<std::uint64_t>& args,
                      const Interpretation& interp) {
  switch (b) {
    case Builtin::kHalts:
      return interp.machines().halts(args[0], args[1]);
    case Builtin::kAccepts:
      return interp.machines().accepts(args[0], args[1]);
    case Builtin::kK: {
      // K(z, t): z is the smallest machine returning t on input 0.
      auto producer = interp.machines().minimal_producer(args[1]);
      return producer && *producer == args[0];
    }
    case Builtin::kEq:
      return args[0] == args[1];
    case Builtin::kSucc:
      return args[0] == args[1] + 1;
  }
  return false;
}

void check(const Expr& e, const Interpretation& interp,
           std::vector<std::string>& bound, std::vector<std::string>& expanding) {
  switch (e.kind) {
    case ExprKind::kAtom: {
      auto it = interp.atoms.find(e.name);
      if (it == interp.atoms.end()) throw UnboundAtom("unbound atom: " + e.name);
      for (const auto& t : e.terms) {
        if (t.is_variable &&
            std::find(bound.begin(), bound.end(), t.variable) == bound.end()) {
          throw FreeVariable("free variable " + t.variable + " in " + render(e));
        }
      }
      std::size_t arity = std::visit(
          [](const auto& b) -> std::size_t {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, TableBinding>) {
              return b.arity;
            } else if constexpr (std::is_same_v<B, BuiltinBinding>) {
              return builtin_arity(b.which);
            } else {
              return 0;
            }
          },
          it->second);
      if (arity != e.terms.size()) {
        throw ArityMismatch("atom " + e.name + " expects " + std::to_string(arity) +
                            " arguments, got " + std::to_string(e.terms.size()));
      }
      if (auto* f = std::get_if<FormulaBinding>(&it->second)) {
        if (std::find(expanding.begin(), expanding.end(), e.name) != expanding.end()) {
          throw FormatError("cyclic formula binding through atom " + e.name);
        }
        std::vector<std::string> none;
        expanding.push_back(e.name);
        check(*f->expr, interp, none, expanding);
        expanding.pop_back();
      }
      return;
    }
    case ExprKind::kChall:
    case ExprKind::kChexists:
      bound.push_back(e.name);
      check(*e.children[0], interp, bound, expanding);
      bound.pop_back();
      return;
    default:
      for (const auto& c : e.children) check(*c, interp, bound, expanding);
  }
}

using InterpPtr = std::shared_ptr<const Interpretation>;

GamePtr build(const ExprPtr& e, const InterpPtr& ip, const Scope& scope) {
  const Interpretation& interp = *ip;
  const auto& c = e->children;
  switch (e->kind) {
    case ExprKind::kAtom: {
      const Binding& b = interp.atoms.at(e->name);
      if (auto* k = std::get_if<ConstBinding>(&b)) return elementary(k->value);
      if (auto* f = std::get_if<FormulaBinding>(&b)) return build(f->expr, ip, {});
      if (auto* g = std::get_if<GameBinding>(&b)) return g->game;
      std::vector<std::uint64_t> args;
      for (const auto& t : e->terms) {
        args.push_back(t.is_variable ? scope.at(t.variable) : t.value);
      }
      if (auto* t = std::get_if<TableBinding>(&b)) {
        auto row = t->rows.find(args);
        return elementary(row != t->rows.end() && row->second);
      }
      return elementary(evaluate_builtin(std::get<BuiltinBinding>(b).which, args, interp));
    }
    case ExprKind::kElementary:
      return elementary(e->truth);
    case ExprKind::kNeg:
      return negation(build(c[0], ip, scope));
    case ExprKind::kChand:
    case ExprKind::kChor:
      return choice(e->kind == ExprKind::kChand ? ChoiceKind::kChand : ChoiceKind::kChor,
                    build(c[0], ip, scope), build(c[1], ip, scope));
    case ExprKind::kChall:
    case ExprKind::kChexists: {
      QuantKind kind = e->kind == ExprKind::kChall ? QuantKind::kChall : QuantKind::kChexists;
      ExprPtr body = c[0];
      std::string var = e->name;
      return choice_quant(kind, [body, var, ip, scope](std::uint64_t value) {
        Scope inner = scope;
        inner[var] = value;
        return build(body, ip, inner);
      });
    }
    case ExprKind::kPand:
    case ExprKind::kPor:
      return parallel(e->kind == ExprKind::kPand ? ParallelKind::kPand : ParallelKind::kPor,
                      build(c[0], ip, scope), build(c[1], ip, scope));
    case ExprKind::kPimpl:
      return pimpl(build(c[0], ip, scope), build(c[1], ip, scope));
    case ExprKind::kPrec:
      return precurrence(build(c[0], ip, scope));
    case ExprKind::kPrecBounded:
      return precurrence(build(c[0], ip, scope), e->bound);
    case ExprKind::kPrimpl:
      return primpl(build(c[0], ip, scope), build(c[1], ip, scope));
    case ExprKind::kSand:
    case ExprKind::kSor:
      return sequential(
          e->kind == ExprKind::kSand ? SequentialKind::kSand : SequentialKind::kSor,
          build(c[0], ip, scope), build(c[1], ip, scope));
    case ExprKind::kSrec:
      return srecurrence(build(c[0], ip, scope));
    case ExprKind::kTau:
      return tau(e->bound, build(c[0], ip, scope));
    case ExprKind::kStack:
      return stack(build(c[0], ip, scope));
    case ExprKind::kBit:
      return bit_game();
    case ExprKind::kMemT:
      return memory_game();
  }
  throw Error("unhandled expression kind");
}

}  // namespace

void check_closed(const Expr& e, const Interpretation& interp) {
  std::vector<std::string> bound;
  std::vector<std::string> expanding;
  check(e, interp, bound, expanding);
}

GamePtr interpret(const ExprPtr& e, const Interpretation& interp) {
  check_closed(*e, interp);
  return build(e, std::make_shared<const Interpretation>(interp), {});
}

Interpretation interpretation_from_json(const nlohmann::json& doc,
                                        const std::string& base_dir) {
  Interpretation interp;
  try {
    if (!doc.is_object()) throw FormatError("interpretation must be a JSON object");
    if (doc.contains("universe_bound")) {
      interp.universe_bound = doc.at("universe_bound").get<std::size_t>();
    }
    if (doc.contains("catalog")) {
      const auto& c = doc.at("catalog");
      if (c.is_string()) {
        std::filesystem::path p = c.get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        interp.catalog = std::make_shared<Catalog>(load_catalog(p.string()));
      } else {
        interp.catalog = std::make_shared<Catalog>(catalog_from_json(c));
      }
    }
    if (doc.contains("atoms")) {
      for (const auto& [name, spec] : doc.at("atoms").items()) {
        std::string kind = spec.at("kind").get<std::string>();
        if (kind == "const") {
          interp.atoms[name] = ConstBinding{spec.at("value").get<bool>()};
        } else if (kind == "predicate") {
          TableBinding t{0, {}};
          bool first = true;
          for (const auto& row : spec.at("table")) {
            if (!row.is_array() || row.empty() || !row.back().is_boolean()) {
              throw FormatError("predicate rows are [args..., bool]: " + name);
            }
            std::vector<std::uint64_t> args;
            for (std::size_t i = 0; i + 1 < row.size(); ++i) {
              args.push_back(row[i].get<std::uint64_t>());
            }
            if (first) {
              t.arity = args.size();
              first = false;
            } else if (args.size() != t.arity) {
              throw FormatError("predicate rows disagree on arity: " + name);
            }
            t.rows[args] = row.back().get<bool>();
          }
          if (spec.contains("arity")) t.arity = spec.at("arity").get<std::size_t>();
          interp.atoms[name] = std::move(t);
        } else if (kind == "builtin") {
          interp.atoms[name] = BuiltinBinding{builtin_named(spec.at("name").get<std::string>())};
        } else if (kind == "formula") {
          interp.atoms[name] = FormulaBinding{parse_expr(spec.at("text").get<std::string>())};
        } else if (kind == "game") {
          std::string g = spec.at("name").get<std::string>();
          interp.atoms[name] = GameBinding{g, resource_named(g)};
        } else {
          throw FormatError("unknown atom kind '" + kind + "' for " + name);
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed interpretation: ") + e.what());
  }
  return interp;
}

Interpretation load_interpretation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open interpretation file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("interpretation is not valid JSON: " + std::string(e.what()));
  }
  auto dir = std::filesystem::path(path).parent_path();
  return interpretation_from_json(doc, dir.empty() ? "." : dir.string());
}

}  // namespace col
