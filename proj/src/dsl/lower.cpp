#include <algorithm>
#include <cmath>

#include "whh/dsl/dsl.hpp"

namespace whh::dsl {

namespace {

// Intermediate value: sum over shifts of e(shift) * R_shift(t), where R may
// still be improper.
class Value {
 public:
  static Value rational(RationalFunction f, double shift = 0.0) {
    Value v;
    if (!f.is_zero()) v.terms_.push_back({shift, std::move(f)});
    return v;
  }

  static Value from_symbol(const GSymbol& g) {
    Value v;
    for (const auto& a : g.ap()) v.add_term(a.freq, RationalFunction::constant(a.coeff));
    for (const auto& l : g.l0()) v.add_term(l.shift, RationalFunction{{}, l.rational});
    return v;
  }

  GSymbol to_symbol() const {
    GSymbol g;
    for (const auto& [s, f] : terms_) g = g + GSymbol::from_rational(f, s);
    return g;
  }

  bool single_shift() const { return terms_.size() <= 1; }

  friend Value operator+(const Value& a, const Value& b) {
    Value r = a;
    for (const auto& [s, f] : b.terms_) r.add_term(s, f);
    return r;
  }

  friend Value operator*(const Value& a, const Value& b) {
    Value r;
    for (const auto& [s1, f1] : a.terms_)
      for (const auto& [s2, f2] : b.terms_) r.add_term(s1 + s2, f1 * f2);
    return r;
  }

  Value scaled(cplx c) const {
    Value r;
    for (const auto& [s, f] : terms_) r.add_term(s, f.scaled(c));
    return r;
  }

  Value reciprocal() const {
    if (terms_.empty()) throw Error(ErrorCode::not_invertible, "division by zero");
    if (terms_.size() == 1) return rational(terms_[0].second.reciprocal(), -terms_[0].first);
    return from_symbol(inverse(to_symbol()));
  }

 private:
  void add_term(double shift, const RationalFunction& f) {
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      if (std::abs(it->first - shift) <= kFreqMergeTol * std::max(1.0, std::abs(shift))) {
        it->second = it->second + f;
        if (it->second.is_zero()) terms_.erase(it);
        return;
      }
    }
    if (f.is_zero()) return;
    terms_.push_back({shift, f});
    std::sort(terms_.begin(), terms_.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
  }

  std::vector<std::pair<double, RationalFunction>> terms_;
};

Value power(const Value& v, int n) {
  if (n < 0) return power(v.reciprocal(), -n);
  Value r = Value::rational(RationalFunction::constant(1.0)), b = v;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

Value eval(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: return Value::rational(RationalFunction::constant(e.value));
    case Expr::Kind::var_t: return Value::rational(RationalFunction::variable());
    case Expr::Kind::chi: return Value::from_symbol(GSymbol::chi(1));
    case Expr::Kind::exp: return Value::rational(RationalFunction::constant(1.0), e.delta);
    case Expr::Kind::neg: return eval(*e.lhs).scaled(-1.0);
    case Expr::Kind::add: return eval(*e.lhs) + eval(*e.rhs);
    case Expr::Kind::sub: return eval(*e.lhs) + eval(*e.rhs).scaled(-1.0);
    case Expr::Kind::mul: return eval(*e.lhs) * eval(*e.rhs);
    case Expr::Kind::div: return eval(*e.lhs) * eval(*e.rhs).reciprocal();
    case Expr::Kind::pow: return power(eval(*e.lhs), e.exponent);
  }
  throw Error(ErrorCode::syntax_error, "unknown node");
}

}  // namespace

GSymbol lower(const Expr& e) { return eval(e).to_symbol(); }

GSymbol parse_symbol(std::string_view text) { return lower(*parse(text)); }

}  // namespace whh::dsl
