#pragma once

// Text syntax for symbols:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['+'|'-'] INT)*
//   primary := NUMBER ['i'] | 'i' | 't' | 'chi' | 'e' '(' ['+'|'-'] NUMBER ')' | '(' expr ')'

#include <memory>
#include <string>
#include <string_view>

#include "whh/symbol/gsymbol.hpp"

namespace whh::dsl {

struct Expr {
  enum class Kind { number, var_t, chi, exp, neg, add, sub, mul, div, pow };

  Kind kind;
  std::size_t pos = 0;  // byte offset of the token that produced the node
  cplx value{};         // number
  double delta = 0.0;   // exp
  int exponent = 0;     // pow
  std::unique_ptr<Expr> lhs, rhs;
};

using ExprPtr = std::unique_ptr<Expr>;

/// Throws SyntaxError carrying the offending position and the expected tokens.
ExprPtr parse(std::string_view text);

/// Functional rendering of the tree, e.g. "div(sub(t, 2i), add(t, 3i))".
std::string to_string(const Expr& e);

/// Lowers a parsed expression to the symbol representation. Throws
/// RealPoleError, ImproperRational, NotInvertible or NotRepresentable.
GSymbol lower(const Expr& e);

/// parse + lower
GSymbol parse_symbol(std::string_view text);

/// Canonical text; parse_symbol(format(a)) reproduces a.
std::string format(const GSymbol& a);

/// Shortest text for a complex literal, e.g. "2", "-2i", "1+2i".
std::string format_complex(cplx z);
std::string format_real(double x);

}  // namespace whh::dsl
