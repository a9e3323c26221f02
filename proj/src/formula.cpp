#include "col/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <vector>

#include "col/errors.hpp"
#include "col/game.hpp"

namespace col {
namespace {

enum class Tok {
  kEnd,
  kIdent,
  kNumber,
  kTilde,
  kPand,
  kPor,
  kAmp,
  kBar,
  kArrow,
  kPrimpl,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kDot,
  kInvalid,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(s.substr(i, len)), i});
    i += len;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::string_view rest = s.substr(i);
    if (rest.starts_with("/\\")) {
      push(Tok::kPand, 2);
    } else if (rest.starts_with("\\/")) {
      push(Tok::kPor, 2);
    } else if (rest.starts_with("->")) {
      push(Tok::kArrow, 2);
    } else if (rest.starts_with(">-")) {
      push(Tok::kPrimpl, 2);
    } else if (c == '~') {
      push(Tok::kTilde, 1);
    } else if (c == '&') {
      push(Tok::kAmp, 1);
    } else if (c == '|') {
      push(Tok::kBar, 1);
    } else if (c == '(') {
      push(Tok::kLParen, 1);
    } else if (c == ')') {
      push(Tok::kRParen, 1);
    } else if (c == '[') {
      push(Tok::kLBracket, 1);
    } else if (c == ']') {
      push(Tok::kRBracket, 1);
    } else if (c == ',') {
      push(Tok::kComma, 1);
    } else if (c == '.') {
      push(Tok::kDot, 1);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::kNumber, j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) {
        ++j;
      }
      push(Tok::kIdent, j - i);
    } else {
      push(Tok::kInvalid, 1);
    }
  }
  out.push_back({Tok::kEnd, "", s.size()});
  return out;
}

struct BinaryOp {
  Tok tok;
  const char* keyword;  // for sand / sor
  ExprKind kind;
};

// Loosest first.
const std::vector<std::vector<BinaryOp>> kLevels = {
    {{Tok::kArrow, nullptr, ExprKind::kPimpl}, {Tok::kPrimpl, nullptr, ExprKind::kPrimpl}},
    {{Tok::kIdent, "sor", ExprKind::kSor}},
    {{Tok::kIdent, "sand", ExprKind::kSand}},
    {{Tok::kPor, nullptr, ExprKind::kPor}},
    {{Tok::kPand, nullptr, ExprKind::kPand}},
    {{Tok::kBar, nullptr, ExprKind::kChor}},
    {{Tok::kAmp, nullptr, ExprKind::kChand}},
};

bool is_keyword(std::string_view w) {
  static const char* const kKeywords[] = {"all",  "exi",   "prec", "srec", "stack", "tau",
                                          "sand", "sor",   "BIT",  "T",    "true",  "false"};
  return std::find(std::begin(kKeywords), std::end(kKeywords), w) != std::end(kKeywords);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  ExprPtr parse_all() {
    ExprPtr e = level(0);
    if (peek().kind != Tok::kEnd) fail({"binary operator", "end of input"});
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool at_word(std::string_view w) const {
    return peek().kind == Tok::kIdent && peek().text == w;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, std::move(expected), found);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail({what});
    advance();
  }

  std::optional<ExprKind> match_op(std::size_t lvl) const {
    for (const auto& op : kLevels[lvl]) {
      if (peek().kind != op.tok) continue;
      if (op.keyword && peek().text != op.keyword) continue;
      return op.kind;
    }
    return std::nullopt;
  }

  ExprPtr finish(ExprPtr e, std::size_t begin) const {
    auto copy = std::make_shared<Expr>(*e);
    copy->source_begin = begin;
    copy->source_end = pos_ > 0 ? tokens_[pos_ - 1].pos + tokens_[pos_ - 1].text.size() : 0;
    return copy;
  }

  ExprPtr level(std::size_t lvl) {
    if (lvl == kLevels.size()) return unary();
    std::size_t begin = peek().pos;
    ExprPtr lhs = level(lvl + 1);
    if (lvl == 0) {
      if (auto kind = match_op(0)) {
        advance();
        ExprPtr rhs = level(0);
        return finish(expr::binary(*kind, lhs, rhs), begin);
      }
      return lhs;
    }
    while (auto kind = match_op(lvl)) {
      advance();
      ExprPtr rhs = level(lvl + 1);
      lhs = finish(expr::binary(*kind, lhs, rhs), begin);
    }
    return lhs;
  }

  std::size_t bracketed_nat() {
    expect(Tok::kLBracket, "'['");
    if (peek().kind != Tok::kNumber) fail({"natural number"});
    auto n = parse_numeral(peek().text);
    if (!n) fail({"canonical natural number"});
    advance();
    expect(Tok::kRBracket, "']'");
    return static_cast<std::size_t>(*n);
  }

  ExprPtr unary() {
    std::size_t begin = peek().pos;
    if (peek().kind == Tok::kTilde) {
      advance();
      return finish(expr::neg(unary()), begin);
    }
    if (at_word("prec")) {
      advance();
      if (peek().kind == Tok::kLBracket) {
        std::size_t n = bracketed_nat();
        return finish(expr::bounded(ExprKind::kPrecBounded, n, unary()), begin);
      }
      return finish(expr::unary(ExprKind::kPrec, unary()), begin);
    }
    if (at_word("tau")) {
      advance();
      std::size_t n = bracketed_nat();
      return finish(expr::bounded(ExprKind::kTau, n, unary()), begin);
    }
    if (at_word("srec")) {
      advance();
      return finish(expr::unary(ExprKind::kSrec, unary()), begin);
    }
    if (at_word("stack")) {
      advance();
      return finish(expr::unary(ExprKind::kStack, unary()), begin);
    }
    if (at_word("all") || at_word("exi")) {
      ExprKind kind = peek().text == "all" ? ExprKind::kChall : ExprKind::kChexists;
      advance();
      if (peek().kind != Tok::kIdent || is_keyword(peek().text)) fail({"variable"});
      std::string var = advance().text;
      if (std::find(bound_.begin(), bound_.end(), var) != bound_.end()) {
        --pos_;
        fail({"variable not already bound on this path"});
      }
      expect(Tok::kDot, "'.'");
      bound_.push_back(var);
      ExprPtr body = level(0);
      bound_.pop_back();
      return finish(expr::quant(kind, var, body), begin);
    }
    return primary();
  }

  ExprPtr primary() {
    std::size_t begin = peek().pos;
    if (peek().kind == Tok::kLParen) {
      advance();
      ExprPtr e = level(0);
      expect(Tok::kRParen, "')'");
      return e;
    }
    if (at_word("BIT")) {
      advance();
      return finish(expr::bit(), begin);
    }
    if (at_word("T")) {
      advance();
      return finish(expr::mem_t(), begin);
    }
    if (at_word("true") || at_word("false")) {
      bool truth = advance().text == "true";
      return finish(expr::elementary(truth), begin);
    }
    if (peek().kind == Tok::kIdent && !is_keyword(peek().text)) {
      std::string name = advance().text;
      std::vector<Term> terms;
      if (peek().kind == Tok::kLParen) {
        advance();
        terms.push_back(term());
        while (peek().kind == Tok::kComma) {
          advance();
          terms.push_back(term());
        }
        expect(Tok::kRParen, "')' or ','");
      }
      return finish(expr::atom(std::move(name), std::move(terms)), begin);
    }
    fail({"'('", "'~'", "prefix operator", "quantifier", "atom", "BIT", "T",
          "true", "false"});
  }

  Term term() {
    if (peek().kind == Tok::kNumber) {
      auto n = parse_numeral(peek().text);
      if (!n) fail({"canonical numeral"});
      advance();
      return Term::num(*n);
    }
    if (peek().kind == Tok::kIdent && !is_keyword(peek().text)) {
      return Term::var(advance().text);
    }
    fail({"variable", "numeral"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

int binary_level(ExprKind kind) {
  switch (kind) {
    case ExprKind::kPimpl:
    case ExprKind::kPrimpl:
      return 0;
    case ExprKind::kSor:
      return 1;
    case ExprKind::kSand:
      return 2;
    case ExprKind::kPor:
      return 3;
    case ExprKind::kPand:
      return 4;
    case ExprKind::kChor:
      return 5;
    case ExprKind::kChand:
      return 6;
    default:
      return 7;
  }
}

const char* binary_symbol(ExprKind kind) {
  switch (kind) {
    case ExprKind::kPimpl:
      return "->";
    case ExprKind::kPrimpl:
      return ">-";
    case ExprKind::kSor:
      return "sor";
    case ExprKind::kSand:
      return "sand";
    case ExprKind::kPor:
      return "\\/";
    case ExprKind::kPand:
      return "/\\";
    case ExprKind::kChor:
      return "|";
    case ExprKind::kChand:
      return "&";
    default:
      return "?";
  }
}

std::string render_term(const Term& t) {
  return t.is_variable ? t.variable : numeral(t.value);
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string render_operand(const Expr& child) {
  std::string s = render(child);
  if (is_binary(child.kind) || is_quantifier(child.kind)) return paren(s);
  return s;
}

}  // namespace

ParseTree parse(std::string_view text) {
  Parser parser(text);
  ExprPtr e = parser.parse_all();
  return {e, {e->source_begin, e->source_end}};
}

ExprPtr parse_expr(std::string_view text) { return parse(text).expr; }

std::string render(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kAtom: {
      if (e.terms.empty()) return e.name;
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.terms.size(); ++i) {
        if (i) s += ",";
        s += render_term(e.terms[i]);
      }
      return s + ")";
    }
    case ExprKind::kElementary:
      return e.truth ? "true" : "false";
    case ExprKind::kBit:
      return "BIT";
    case ExprKind::kMemT:
      return "T";
    case ExprKind::kNeg:
      return "~" + render_operand(*e.children[0]);
    case ExprKind::kPrec:
      return "prec " + render_operand(*e.children[0]);
    case ExprKind::kPrecBounded:
      return "prec[" + std::to_string(e.bound) + "] " + render_operand(*e.children[0]);
    case ExprKind::kTau:
      return "tau[" + std::to_string(e.bound) + "] " + render_operand(*e.children[0]);
    case ExprKind::kSrec:
      return "srec " + render_operand(*e.children[0]);
    case ExprKind::kStack:
      return "stack " + render_operand(*e.children[0]);
    case ExprKind::kChall:
    case ExprKind::kChexists:
      return std::string(e.kind == ExprKind::kChall ? "all " : "exi ") + e.name + ". " +
             render(*e.children[0]);
    default:
      break;
  }
  int lvl = binary_level(e.kind);
  bool right_assoc = lvl == 0;
  auto side = [&](const Expr& child, bool is_left) {
    std::string s = render(child);
    if (is_quantifier(child.kind)) return paren(s);
    if (!is_binary(child.kind)) return s;
    int child_lvl = binary_level(child.kind);
    bool tight_side = right_assoc ? is_left : !is_left;
    bool needs = child_lvl < lvl || (child_lvl == lvl && tight_side);
    return needs ? paren(s) : s;
  };
  return side(*e.children[0], true) + " " + binary_symbol(e.kind) + " " +
         side(*e.children[1], false);
}

}  // namespace col
