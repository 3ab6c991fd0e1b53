#pragma once

// Discretization of half-line and whole-line operators on a uniform grid.
//
// Default scheme ("cayley"): a symbol a(t) is pulled back to the unit circle
// by z = (1 + i h t/2) / (1 - i h t/2). Rational parts become rational
// functions of z and are represented exactly by their Fourier coefficients;
// e(delta) becomes z^(delta/h), a shift by delta/h nodes. W(a) is then the
// Toeplitz matrix T_ij = a_{i-j}, H(b) the Hankel matrix H_ij = b_{i+j+1}.
// Entry i of a half-line vector approximates sqrt(h) f((i + 1/2) h).
//
// The "nystrom" scheme uses a_m = h k(m h) from the time-domain kernel.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "whh/symbol/gsymbol.hpp"

namespace whh::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Scheme { cayley, nystrom };

std::string_view to_string(Scheme s);

struct Grid {
  double T = 25.0;
  double h = 0.1;
  Scheme scheme = Scheme::cayley;
  double pad_time = 10.0;  // extra rows for tall sections
  bool snap = true;        // snap AP shifts within h/10 of the lattice

  int N() const;
  int pad() const;
  double node(int i) const { return (i + 0.5) * h; }
  /// (h/2, 1.25 T), used for the stability check
  Grid refined() const;
  /// Throws GridMismatch unless h > 0 and T/h is an integer.
  void validate() const;

  friend bool operator==(const Grid& a, const Grid& b) = default;
};

/// Coefficients a_m for |m| <= L of a discretized symbol.
class DiscreteSymbol {
 public:
  DiscreteSymbol() = default;
  /// Warnings about snapped shifts are appended to `warnings` when given.
  DiscreteSymbol(const GSymbol& a, const Grid& grid, int L,
                 std::vector<std::string>* warnings = nullptr);

  int L() const { return L_; }
  cplx operator[](long m) const {
    return (m < -L_ || m > L_) ? cplx{} : fwd_[static_cast<std::size_t>(m + L_)];
  }
  /// fwd()[k] = a_{k - L}
  std::span<const cplx> fwd() const { return fwd_; }
  /// rev()[k] = a_{L - k}
  std::span<const cplx> rev() const { return rev_; }

 private:
  int L_ = 0;
  std::vector<cplx> fwd_, rev_;
};

/// Shift delta as a node count; throws ShiftNotCommensurate.
long shift_index(double delta, const Grid& grid, std::vector<std::string>* warnings);

/// rows x cols finite sections.
Matrix toeplitz_section(const DiscreteSymbol& a, int rows, int cols);
Matrix hankel_section(const DiscreteSymbol& b, int rows, int cols);

/// y = T x restricted to `rows` entries; uses the dispatched dot kernel.
Vector toeplitz_apply(const DiscreteSymbol& a, const Vector& x, int rows);
Vector hankel_apply(const DiscreteSymbol& b, const Vector& x, int rows);

struct DiscretizedOp {
  Matrix matrix;
  std::string description;
};

/// N x N section of W(a) / H(b).
DiscretizedOp wh_matrix(const GSymbol& a, const Grid& grid);
DiscretizedOp hankel_matrix(const GSymbol& b, const Grid& grid);

// Whole-line window: 2N entries, position p holds node index p - N, i.e.
// t = (p - N + 1/2) h. Positions N.. are the half-line.
namespace full {
Vector embed(const Vector& half);        // zero on the negative half
Vector restrict_plus(const Vector& v);   // positions N..2N-1
Vector apply_W0(const DiscreteSymbol& a, const Vector& v);
Vector apply_J(const Vector& v);
Vector apply_P(const Vector& v);
Vector apply_Q(const Vector& v);
}  // namespace full

/// Coefficient bandwidth sufficient for every section on this grid.
int default_bandwidth(const Grid& grid);

}  // namespace whh::oracle
