#pragma once

// Wiener-Hopf factorization g = g_- e(nu) chi^n g_+ for symbols of the form
// c * e(delta) * rational, and one-sided inverse recipes built from it.

#include <vector>

#include "whh/symbol/gsymbol.hpp"

namespace whh {

struct WHFactorization {
  GSymbol g_minus;  // g_-(0) = 1
  double nu = 0.0;
  int n = 0;
  GSymbol g_plus;

  /// g_-(t) e^{i nu t} chi(t)^n g_+(t)
  cplx reconstruct(double t) const;
};

/// Composition W(f_1) W(f_2) ... W(f_k). An empty list is the identity.
struct OperatorRecipe {
  std::vector<GSymbol> factors;
};

enum class Side { left, right };

/// Throws NotFactorizable outside the monomial-times-rational class and
/// NotInvertible / RealPoleError when g vanishes on the line.
WHFactorization factorize(const GSymbol& g);

struct MatchingFactorization {
  GSymbol g_plus;
  int n = 0;
  int xi = 1;
};

/// For matching g with nu(g) = 0: g_- = xi * tilde(g_+)^{-1}, checked pointwise.
MatchingFactorization matching_factorization(const GSymbol& g);

/// [g_+^{-1}, chi^{-n}, g_-^{-1}] with identity factors left out.
/// Right inverses need n <= 0, left inverses n >= 0; nu must vanish.
OperatorRecipe one_sided_inverse_recipe(const WHFactorization& f, Side side);

/// max |g - reconstruction| over the fixed sample set.
double reconstruction_error(const GSymbol& g, const WHFactorization& f);

}  // namespace whh
