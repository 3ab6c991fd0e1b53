#pragma once

// Dense complex polynomials, coefficients in ascending degree.

#include <span>
#include <vector>

#include "whh/error.hpp"

namespace whh {

using Poly = std::vector<cplx>;

/// Drops trailing coefficients below `rel` times the largest magnitude.
void poly_trim(Poly& p, double rel = 1e-14);
int poly_degree(const Poly& p);

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, cplx s);
Poly poly_derivative(const Poly& a);
cplx poly_eval(const Poly& a, cplx x);

/// lead * prod (x - r).
Poly poly_from_roots(std::span<const cplx> roots, cplx lead = 1.0);

/// Coefficients of p(x0 + u) in powers of u.
Poly poly_taylor_shift(const Poly& p, cplx x0);

/// All complex roots with multiplicity. Companion-matrix eigenvalues are
/// Newton-polished; tight clusters are collapsed onto a multiple root when the
/// derivatives confirm it.
std::vector<cplx> poly_roots(const Poly& p);

}  // namespace whh
