#include "col/expr.hpp"

namespace col {

bool is_binary(ExprKind kind) {
  switch (kind) {
    case ExprKind::kChand:
    case ExprKind::kChor:
    case ExprKind::kPand:
    case ExprKind::kPor:
    case ExprKind::kPimpl:
    case ExprKind::kPrimpl:
    case ExprKind::kSand:
    case ExprKind::kSor:
      return true;
    default:
      return false;
  }
}

bool is_quantifier(ExprKind kind) {
  return kind == ExprKind::kChall || kind == ExprKind::kChexists;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.terms != b.terms ||
      a.truth != b.truth || a.bound != b.bound ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

namespace expr {

ExprPtr atom(std::string name, std::vector<Term> terms) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kAtom;
  e->name = std::move(name);
  e->terms = std::move(terms);
  return e;
}

ExprPtr elementary(bool truth) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kElementary;
  e->truth = truth;
  return e;
}

ExprPtr unary(ExprKind kind, ExprPtr child) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->children = {std::move(child)};
  return e;
}

ExprPtr binary(ExprKind kind, ExprPtr left, ExprPtr right) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->children = {std::move(left), std::move(right)};
  return e;
}

ExprPtr quant(ExprKind kind, std::string var, ExprPtr body) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->name = std::move(var);
  e->children = {std::move(body)};
  return e;
}

ExprPtr bounded(ExprKind kind, std::size_t n, ExprPtr child) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->bound = n;
  e->children = {std::move(child)};
  return e;
}

ExprPtr bit() {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kBit;
  return e;
}

ExprPtr mem_t() {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kMemT;
  return e;
}

}  // namespace expr
}  // namespace col
