#include <cctype>
#include <charconv>
#include <cmath>

#include "whh/dsl/dsl.hpp"

namespace whh::dsl {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExprPtr run() {
    skip();
    if (at_end()) fail("empty expression", "expression");
    auto e = expr();
    skip();
    if (!at_end()) fail("unexpected trailing input", "operator or end of input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t p_ = 0;
  int depth_ = 0;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > 256) p.fail("expression nested too deeply", "shallower expression");
    }
    ~DepthGuard() { --p.depth_; }
  };

  [[noreturn]] void fail(const std::string& msg, const std::string& expected) const {
    throw SyntaxError(p_, msg, expected);
  }

  bool at_end() const { return p_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[p_]; }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool accept(char c) {
    skip();
    if (peek() == c) {
      ++p_;
      return true;
    }
    return false;
  }

  static ExprPtr node(Expr::Kind k, std::size_t pos) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->pos = pos;
    return e;
  }
  static ExprPtr binary(Expr::Kind k, std::size_t pos, ExprPtr l, ExprPtr r) {
    auto e = node(k, pos);
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      skip();
      const std::size_t pos = p_;
      if (accept('+'))
        lhs = binary(Expr::Kind::add, pos, std::move(lhs), term());
      else if (accept('-'))
        lhs = binary(Expr::Kind::sub, pos, std::move(lhs), term());
      else
        return lhs;
    }
  }

  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      skip();
      const std::size_t pos = p_;
      if (accept('*'))
        lhs = binary(Expr::Kind::mul, pos, std::move(lhs), unary());
      else if (accept('/'))
        lhs = binary(Expr::Kind::div, pos, std::move(lhs), unary());
      else
        return lhs;
    }
  }

  ExprPtr unary() {
    DepthGuard guard(*this);
    skip();
    const std::size_t pos = p_;
    if (accept('-')) {
      auto e = node(Expr::Kind::neg, pos);
      e->lhs = unary();
      return e;
    }
    return power();
  }

  ExprPtr power() {
    auto base = primary();
    for (;;) {
      skip();
      const std::size_t pos = p_;
      if (!accept('^')) return base;
      skip();
      int sign = 1;
      if (accept('-'))
        sign = -1;
      else
        accept('+');
      skip();
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        fail("exponent must be an integer literal", "integer");
      long v = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        v = v * 10 + (s_[p_++] - '0');
        if (v > 1000) fail("exponent too large", "integer with |n| <= 1000");
      }
      if (peek() == '.') fail("exponent must be an integer literal", "integer");
      auto e = node(Expr::Kind::pow, pos);
      e->lhs = std::move(base);
      e->exponent = sign * static_cast<int>(v);
      base = std::move(e);
    }
  }

  // Unsigned decimal literal with optional fraction and exponent.
  double number() {
    const std::size_t start = p_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++p_;
    if (peek() == '.') {
      ++p_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++p_;
    }
    if ((peek() == 'e' || peek() == 'E') && p_ + 1 < s_.size()) {
      std::size_t q = p_ + 1;
      if (s_[q] == '+' || s_[q] == '-') ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        p_ = q;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++p_;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + p_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + p_) {
      p_ = start;
      fail("malformed number", "number");
    }
    if (!std::isfinite(v)) {
      p_ = start;
      fail("number out of range", "finite number");
    }
    return v;
  }

  ExprPtr primary() {
    skip();
    const std::size_t pos = p_;
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const double v = number();
      auto e = node(Expr::Kind::number, pos);
      if (peek() == 'i' && !(p_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[p_ + 1])))) {
        ++p_;
        e->value = cplx(0.0, v);
      } else {
        e->value = v;
      }
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t q = p_;
      while (q < s_.size() && std::isalnum(static_cast<unsigned char>(s_[q]))) ++q;
      const std::string_view id = s_.substr(p_, q - p_);
      if (id == "t") {
        p_ = q;
        return node(Expr::Kind::var_t, pos);
      }
      if (id == "chi") {
        p_ = q;
        return node(Expr::Kind::chi, pos);
      }
      if (id == "i") {
        p_ = q;
        auto e = node(Expr::Kind::number, pos);
        e->value = cplx(0.0, 1.0);
        return e;
      }
      if (id == "e") {
        p_ = q;
        if (!accept('(')) fail("e must be followed by a parenthesised shift", "'('");
        skip();
        double sign = 1.0;
        if (accept('-'))
          sign = -1.0;
        else
          accept('+');
        skip();
        if (!(std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.'))
          fail("shift must be a real literal", "number");
        auto e = node(Expr::Kind::exp, pos);
        e->delta = sign * number();
        if (!accept(')')) fail("unclosed e(", "')'");
        return e;
      }
      fail("unknown identifier '" + std::string(id) + "'", "t, chi, e, i, number or '('");
    }
    if (accept('(')) {
      auto e = expr();
      if (!accept(')')) fail("missing closing parenthesis", "')'");
      return e;
    }
    if (at_end()) fail("unexpected end of input", "t, chi, e, i, number or '('");
    fail(std::string("unexpected character '") + c + "'", "t, chi, e, i, number or '('");
  }
};

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: return format_complex(e.value);
    case Expr::Kind::var_t: return "t";
    case Expr::Kind::chi: return "chi";
    case Expr::Kind::exp: return "e(" + format_real(e.delta) + ")";
    case Expr::Kind::neg: return "neg(" + to_string(*e.lhs) + ")";
    case Expr::Kind::add: return "add(" + to_string(*e.lhs) + ", " + to_string(*e.rhs) + ")";
    case Expr::Kind::sub: return "sub(" + to_string(*e.lhs) + ", " + to_string(*e.rhs) + ")";
    case Expr::Kind::mul: return "mul(" + to_string(*e.lhs) + ", " + to_string(*e.rhs) + ")";
    case Expr::Kind::div: return "div(" + to_string(*e.lhs) + ", " + to_string(*e.rhs) + ")";
    case Expr::Kind::pow:
      return "power(" + to_string(*e.lhs) + ", " + std::to_string(e.exponent) + ")";
  }
  return "?";
}

}  // namespace whh::dsl
