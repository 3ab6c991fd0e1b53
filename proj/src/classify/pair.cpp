#include "whh/classify/pair.hpp"

#include "whh/error.hpp"

namespace whh {

namespace {

bool is_one(const GSymbol& g) {
  cplx c;
  if (g.is_constant(&c)) return std::abs(c - 1.0) < 1e-10;
  return sample_distance(g, GSymbol::constant(1.0)) < 1e-10;
}

}  // namespace

bool matching_condition(const GSymbol& a, const GSymbol& b) {
  const GSymbol lhs = a * a.tilde(), rhs = b * b.tilde();
  if (approx_equal(lhs, rhs, 1e-12)) return true;
  double scale = 1.0;
  for (double t : {0.0, 0.5, 1.0, 3.0, 10.0}) scale = std::max(scale, std::abs(lhs(t)));
  return sample_distance(lhs, rhs) < 1e-10 * scale;
}

MatchingPair MatchingPair::make(GSymbol a, GSymbol b) {
  if (!matching_condition(a, b))
    throw Error(ErrorCode::not_matching, "a * tilde(a) != b * tilde(b), max deviation " +
                                             std::to_string(sample_distance(a * a.tilde(), b * b.tilde())));
  return {std::move(a), std::move(b)};
}

SubordinatedPair subordinated(const MatchingPair& pair) {
  if (!matching_condition(pair.a, pair.b)) throw Error(ErrorCode::not_matching, "pair is not matching");
  SubordinatedPair s;
  s.c = pair.a * inverse(pair.b);
  s.d = inverse(pair.b.tilde()) * pair.a;
  if (!is_one(s.c * s.c.tilde()) || !is_one(s.d * s.d.tilde()))
    throw Error(ErrorCode::structure_violation, "subordinated pair is not made of matching functions");
  auto fill = [](const GSymbol& g, std::optional<double>& nu_out, std::optional<int>& n_out,
                 std::optional<int>& xi_out) {
    try {
      nu_out = nu(g);
    } catch (const Error&) {
      return;
    }
    if (*nu_out != 0.0) return;
    try {
      n_out = winding_n(g);
      xi_out = xi(g);
    } catch (const Error&) {
    }
  };
  fill(s.c, s.nu_c, s.n_c, s.xi_c);
  fill(s.d, s.nu_d, s.n_d, s.xi_d);
  return s;
}

SymbolMatrix v_symbol(const MatchingPair& pair, bool matching_form) {
  const GSymbol at_inv = inverse(pair.a.tilde());
  const GSymbol c = pair.b.tilde() * at_inv;
  const GSymbol d = pair.b * at_inv;
  SymbolMatrix m;
  m[0][0] = matching_form ? GSymbol() : pair.a - pair.b * pair.b.tilde() * at_inv;
  m[0][1] = d;
  m[1][0] = -c;
  m[1][1] = at_inv;
  return m;
}

MatchingPair adjoint_pair(const MatchingPair& pair) { return {pair.a.conj(), pair.b.tilde().conj()}; }

}  // namespace whh
