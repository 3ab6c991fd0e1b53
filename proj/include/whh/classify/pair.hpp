#pragma once

// Matching pairs (a, b) with a * tilde(a) = b * tilde(b), their subordinated
// pairs c = a b^{-1}, d = tilde(b)^{-1} a, and the adjoint pair.

#include <array>
#include <optional>

#include "whh/symbol/gsymbol.hpp"

namespace whh {

struct MatchingPair {
  GSymbol a, b;

  /// Checks the matching condition; throws NotMatching.
  static MatchingPair make(GSymbol a, GSymbol b);
};

bool matching_condition(const GSymbol& a, const GSymbol& b);

struct SubordinatedPair {
  GSymbol c, d;
  std::optional<double> nu_c, nu_d;
  std::optional<int> n_c, n_d;
  std::optional<int> xi_c, xi_d;  // only when nu = 0
};

/// Throws NotMatching / NotRepresentable. Indices are filled where computable.
SubordinatedPair subordinated(const MatchingPair& pair);

using SymbolMatrix = std::array<std::array<GSymbol, 2>, 2>;

/// [[0, d], [-c, tilde(a)^{-1}]], or the general form with a - b tilde(b) tilde(a)^{-1}
/// in the corner when matching_form is false.
SymbolMatrix v_symbol(const MatchingPair& pair, bool matching_form = true);

/// (conj(a), conj(tilde(b))), the pair of the adjoint operator.
MatchingPair adjoint_pair(const MatchingPair& pair);

}  // namespace whh
