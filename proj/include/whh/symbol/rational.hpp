#pragma once

// Strictly proper rational functions kept in partial-fraction form
//   R(t) = sum_p sum_k c_{p,k} / (t - p)^(k+1),
// and general rational functions (polynomial part plus such an R).

#include <span>
#include <vector>

#include "whh/symbol/poly.hpp"

namespace whh {

struct PoleTerm {
  cplx pole;
  std::vector<cplx> coeffs;  // coeffs[k] multiplies (t - pole)^-(k+1)

  int order() const { return static_cast<int>(coeffs.size()); }
};

/// Relative distance under which two poles are treated as one.
inline constexpr double kPoleMergeTol = 1e-8;
/// Absolute floor below which coefficients are dropped.
inline constexpr double kCoeffPruneAbs = 1e-14;
/// Cancellation threshold relative to the magnitudes that were summed.
inline constexpr double kCoeffPruneRel = 1e-11;

bool same_pole(cplx p, cplx q);

class RationalPart {
 public:
  RationalPart() = default;

  /// c / (t - pole)^order
  static RationalPart single(cplx pole, cplx c, int order = 1);
  /// Merges, prunes and sorts the given terms.
  static RationalPart from_terms(std::vector<PoleTerm> terms);

  const std::vector<PoleTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Degree of the (monic) denominator.
  int degree() const;
  /// Poles repeated according to multiplicity.
  std::vector<cplx> poles() const;

  cplx eval(cplx t) const;
  /// Sum of |c| over all coefficients, used as a size measure.
  double coeff_mass() const;

  Poly denominator() const;
  Poly numerator() const;

  RationalPart operator-() const;
  RationalPart scaled(cplx s) const;
  RationalPart tilde() const;
  RationalPart conj() const;

  friend RationalPart operator+(const RationalPart& a, const RationalPart& b);
  friend RationalPart operator-(const RationalPart& a, const RationalPart& b);
  friend RationalPart operator*(const RationalPart& a, const RationalPart& b);
  friend bool operator==(const RationalPart& a, const RationalPart& b);

 private:
  std::vector<PoleTerm> terms_;
};

/// Builds scale * prod(t - z) / prod(t - p) after cancelling coincident
/// zeros and poles. Returns the polynomial part through `poly`.
RationalPart partial_fractions(cplx scale, std::vector<cplx> zeros, std::vector<cplx> poles,
                               Poly* poly);

/// Polynomial part plus strictly proper part. Used for intermediate values
/// that may be improper (e.g. the variable t itself).
struct RationalFunction {
  Poly poly;
  RationalPart proper;

  static RationalFunction constant(cplx c);
  static RationalFunction variable();

  bool is_zero() const;
  int poly_degree() const;
  cplx eval(cplx t) const;

  /// Numerator and denominator of the reduced fraction; the denominator is
  /// monic with the poles of `proper` as roots.
  void fraction(Poly* num, Poly* den) const;

  /// 1 / this; poles of the result are the zeros of this function.
  /// Throws NotInvertible for the zero function.
  RationalFunction reciprocal() const;

  RationalFunction scaled(cplx s) const;
  RationalFunction tilde() const;
  RationalFunction conj() const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
};

}  // namespace whh
