#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace col {

struct Term {
  bool is_variable = false;
  std::string variable;
  std::uint64_t value = 0;

  static Term var(std::string name) { return {true, std::move(name), 0}; }
  static Term num(std::uint64_t v) { return {false, {}, v}; }

  friend bool operator==(const Term&, const Term&) = default;
};

enum class ExprKind {
  kAtom,
  kElementary,
  kNeg,
  kChand,
  kChor,
  kChall,
  kChexists,
  kPand,
  kPor,
  kPimpl,
  kPrec,
  kPrecBounded,
  kPrimpl,
  kSand,
  kSor,
  kSrec,
  kTau,
  kStack,
  kBit,
  kMemT,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  std::string name;           // atom name or bound variable
  std::vector<Term> terms;    // atom arguments
  bool truth = false;         // elementary
  std::size_t bound = 0;      // prec[n], tau[n]
  std::vector<ExprPtr> children;
  // Source offsets when produced by the parser.
  std::size_t source_begin = 0;
  std::size_t source_end = 0;
};

bool structurally_equal(const Expr& a, const Expr& b);

namespace expr {

ExprPtr atom(std::string name, std::vector<Term> terms = {});
ExprPtr elementary(bool truth);
ExprPtr unary(ExprKind kind, ExprPtr e);
ExprPtr binary(ExprKind kind, ExprPtr e, ExprPtr f);
ExprPtr quant(ExprKind kind, std::string var, ExprPtr body);
ExprPtr bounded(ExprKind kind, std::size_t n, ExprPtr e);
ExprPtr bit();
ExprPtr mem_t();

inline ExprPtr neg(ExprPtr e) { return unary(ExprKind::kNeg, std::move(e)); }

}  // namespace expr

bool is_binary(ExprKind kind);
bool is_quantifier(ExprKind kind);

}  // namespace col
