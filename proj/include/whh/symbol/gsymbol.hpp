#pragma once

// Symbols a(t) = sum_j a_j e^{i d_j t} + sum_m e^{i s_m t} R_m(t): a finite
// almost-periodic part plus shifted strictly proper rational parts.

#include <optional>
#include <string>
#include <vector>

#include "whh/symbol/rational.hpp"

namespace whh {

struct APTerm {
  double freq;
  cplx coeff;
};

struct L0Term {
  double shift;
  RationalPart rational;
};

/// Two frequencies closer than this (relative) are merged.
inline constexpr double kFreqMergeTol = 1e-12;

class GSymbol {
 public:
  GSymbol() = default;

  static GSymbol constant(cplx c);
  /// c * e^{i delta t}
  static GSymbol exp(double delta, cplx c = 1.0);
  /// ((t - i)/(t + i))^n
  static GSymbol chi(int n = 1);
  static GSymbol from_l0(double shift, RationalPart r);
  /// constant plus proper part of a rational function; throws ImproperRational.
  static GSymbol from_rational(const RationalFunction& f, double shift = 0.0);
  static GSymbol from_parts(std::vector<APTerm> ap, std::vector<L0Term> l0);

  const std::vector<APTerm>& ap() const { return ap_; }
  const std::vector<L0Term>& l0() const { return l0_; }

  bool is_zero() const { return ap_.empty() && l0_.empty(); }
  /// True for c * e(0) with no L0 part; stores c.
  bool is_constant(cplx* c = nullptr) const;
  /// AP part is a single monomial (or empty) and every L0 term shares its shift.
  bool is_monomial_times_rational(double* shift = nullptr) const;

  cplx operator()(double t) const;
  double coeff_mass() const;
  /// Rational function R with a = e(shift) * R; requires is_monomial_times_rational.
  RationalFunction as_rational(double* shift) const;

  GSymbol tilde() const;
  GSymbol conj() const;
  GSymbol operator-() const;
  GSymbol scaled(cplx s) const;

  friend GSymbol operator+(const GSymbol& a, const GSymbol& b);
  friend GSymbol operator-(const GSymbol& a, const GSymbol& b);
  friend GSymbol operator*(const GSymbol& a, const GSymbol& b);
  friend bool operator==(const GSymbol& a, const GSymbol& b);

 private:
  void canonicalize();

  std::vector<APTerm> ap_;
  std::vector<L0Term> l0_;
};

// Named operations ---------------------------------------------------------

GSymbol add(const GSymbol& a, const GSymbol& b);
GSymbol mul(const GSymbol& a, const GSymbol& b);
GSymbol tilde(const GSymbol& a);
GSymbol conj(const GSymbol& a);
cplx eval(const GSymbol& a, double t);

/// Pointwise-equal within `tol` on coefficients and poles.
bool approx_equal(const GSymbol& a, const GSymbol& b, double tol = 1e-9);
/// max |a(t) - b(t)| over a fixed sample set.
double sample_distance(const GSymbol& a, const GSymbol& b);

/// Inverse in the finite representation. NotInvertible if inf|a| = 0 is
/// detected, NotRepresentable if the inverse leaves the representation.
GSymbol inverse(const GSymbol& a);

/// Integer power; negative powers go through inverse().
GSymbol power(const GSymbol& a, int n);

struct KernelPiece {
  enum class Half { positive, negative };
  Half half;
  double shift;            // piece lives on s > shift or s < shift
  cplx exponent;           // lambda
  std::vector<cplx> poly;  // ascending powers of (s - shift)
};

/// k(s) = sum of p(s - shift) e^{lambda (s - shift)} on the indicated half-lines;
/// a(t) = AP part + integral of k(s) e^{i t s} ds.
struct TimeKernel {
  std::vector<KernelPiece> pieces;

  /// Value at s; at a jump the two one-sided limits are averaged.
  cplx operator()(double s) const;
  bool empty() const { return pieces.empty(); }
};

TimeKernel time_kernel(const GSymbol& a);

struct InvertibilityEvidence {
  double sampled_min;
  double grid_error;
  double tail_bound;
};

/// inf |a| > 0 on the real line. Throws Inconclusive inside the uncertainty band.
bool is_invertible(const GSymbol& a, InvertibilityEvidence* evidence = nullptr);

/// Mean motion of the AP part.
double nu(const GSymbol& a);
/// Winding number of 1 + b^{-1} k where b is the AP part and k the L0 part.
int winding_n(const GSymbol& a);
/// (-1)^n g(0) for a matching g with nu(g) = 0.
int xi(const GSymbol& g);

bool is_matching(const GSymbol& g);
bool is_plus(const GSymbol& a);
bool is_minus(const GSymbol& a);

/// sum |a_j| + ||k||_{L1}, a diagnostic only.
double norm_estimate(const GSymbol& a);

}  // namespace whh
