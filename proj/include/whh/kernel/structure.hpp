#pragma once

// Kernel elements and maps between kernels, evaluated on a grid: psi0,
// scalar kernel bases, the involution JQW0(g)P and its projections, the
// transport maps between ker W(V(a,b)) and ker diag(W(a)+H(b), W(a)-H(b)),
// phi_pm, and the case-3 element kappa.

#include <utility>

#include "whh/classify/pair.hpp"
#include "whh/io/serialize.hpp"
#include "whh/oracle/estimate.hpp"

namespace whh::kernel {

using oracle::Grid;
using oracle::Matrix;
using oracle::Vector;

enum class Support { half, full };

struct GridFunction {
  Grid grid;
  Vector values;
  Support support = Support::half;
};

/// [[node, re, im], ...]
io::json to_json(const GridFunction& f);

/// e^{-t}; with the Cayley scheme the exact discrete generator
/// sqrt(h) w^{i+1/2}, w = (2-h)/(2+h), which approximates sqrt(h) e^{-t_i}.
GridFunction psi0(const Grid& grid, Support support = Support::half);

// Discrete operators on half-line vectors (N x N sections).
Vector W(const GSymbol& a, const Vector& x, const Grid& grid);
Vector H(const GSymbol& b, const Vector& x, const Grid& grid);
/// J Q W0(g) P x, i.e. H(tilde g) x computed on the whole-line window.
Vector JQW0P(const GSymbol& g, const Vector& x, const Grid& grid);

/// ||W(g) f|| / ||f||
double wh_residual(const GSymbol& g, const Vector& f, const Grid& grid);
/// ||(W(a) + sign H(b)) f|| / ||f||
double whh_residual(const GSymbol& a, const GSymbol& b, int sign, const Vector& f, const Grid& grid);

/// W(g_+^{-1}) psi0 normalized; requires a matching g with nu = 0, n = -1.
GridFunction kernel_basis_scalar(const GSymbol& g, const Grid& grid);

struct Projection {
  Vector Pf;     // J Q W0(g) P f
  Vector plus;   // (f + Pf)/2
  Vector minus;  // (f - Pf)/2
  double kernel_residual;
};

/// Throws NotInKernel when ||W(g) f|| > tol ||f||.
Projection projection_P(const GSymbol& g, const Vector& f, const Grid& grid, double tol = 1e-5);

/// M = V^H P(g) V on an orthonormal kernel basis V; ranks of P^+ and P^-
/// as rounded traces of (I +- M)/2.
struct ProjectionRanks {
  int plus = 0, minus = 0;
  double involution_defect = 0.0;  // ||M^2 - I||
  Matrix M;
};
ProjectionRanks projection_ranks(const GSymbol& g, const Matrix& basis, const Grid& grid);

/// (phi, psi) in ker W(V(a,b)) -> (Phi, Psi)
std::pair<Vector, Vector> e1_map(const MatchingPair& pair, const Vector& phi, const Vector& psi,
                                 const Grid& grid, double tol = 1e-5);
/// (Phi, Psi) -> (phi, psi)
std::pair<Vector, Vector> e2_map(const MatchingPair& pair, const Vector& Phi, const Vector& Psi,
                                 const Grid& grid, double tol = 1e-5);
/// Versions without the kernel-membership precondition.
std::pair<Vector, Vector> e1_raw(const MatchingPair& pair, const Vector& phi, const Vector& psi, const Grid& grid);
std::pair<Vector, Vector> e2_raw(const MatchingPair& pair, const Vector& Phi, const Vector& Psi, const Grid& grid);

struct PhiResult {
  Vector phi;
  double kernel_residual;  // ||(W(a) +- H(b)) phi|| / ||s||
  double pm_identity_residual;  // ||(W(tilde b) +- H(tilde a)) phi - P^{+-}(d) s|| / ||s||
};

/// phi_+ (sign > 0) or phi_- of s in ker W(d). NoRightInverse unless W(c)
/// has a right inverse from the factorization of c.
PhiResult phi_pm(const MatchingPair& pair, const Vector& s, int sign, const Grid& grid, double tol = 1e-5);

struct KappaResult {
  Vector kappa;
  Vector tested;              // H(alpha^{-1}) W(d_+^{-1}) psi0
  bool in_image = false;      // tested lies in im W(chi)
  double membership = 0.0;    // ||(I - Q0) tested|| / ||tested||
  double middle_term = 0.0;   // norm of the middle term, relative
  double first_term_defect = 0.0;  // ||(I - Q0) first|| / ||first||
  double kernel_residual = 0.0;    // ||(W(alpha) - H(alpha chi)) kappa|| / ||kappa||
  bool stable = true;         // same verdict on the refined grid
};

/// Case 3: nu(a) = n(a) = 0, b = a chi^{-1}, alpha = a chi^{-1}. Throws WrongCase otherwise.
KappaResult kappa_element(const GSymbol& a, const Grid& grid, double threshold = 1e-4, bool two_grid = true);

/// ||(I - Q0) y|| / ||y|| with Q0 = W(chi) W(chi^{-1}).
double image_defect(const Vector& y, const Grid& grid);

}  // namespace whh::kernel
