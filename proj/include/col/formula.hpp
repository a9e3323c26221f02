#pragma once

// Concrete syntax.
//
//   ~  /\  \/  &  |  ->  >-  sand  sor
//   prec  prec[n]  srec  stack  tau[n]  all x.  exi x.
//   BIT  T  true  false  IDENT  IDENT(term, ...)
//
// Binary precedence from loosest to tightest: -> >- (right associative),
// sor, sand, \/, /\, |, & (left associative). Unary operators bind tightest;
// a quantifier's body extends as far right as possible.

#include <cstddef>
#include <string>
#include <string_view>

#include "col/expr.hpp"

namespace col {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct ParseTree {
  ExprPtr expr;
  Span span;
};

// Throws ParseError.
ParseTree parse(std::string_view text);
ExprPtr parse_expr(std::string_view text);

std::string render(const Expr& e);

}  // namespace col
