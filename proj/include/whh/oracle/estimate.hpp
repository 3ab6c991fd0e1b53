#pragma once

// Operators built from W and H terms (scalar or 2x2 block), and SVD-based
// kernel / cokernel measurement on tall finite sections.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "whh/factor/factorization.hpp"
#include "whh/oracle/grid.hpp"

namespace whh::oracle {

struct OpTerm {
  enum class Kind { W, H };
  Kind kind;
  cplx coeff;
  GSymbol symbol;
};

/// Block operator: `blocks` x `blocks` entries, each a sum of terms.
struct OpSpec {
  int blocks = 1;
  std::vector<OpTerm> entry[2][2];
  std::string description;

  static OpSpec wh(const GSymbol& a);
  /// W(a) + sign H(b)
  static OpSpec wh_plus_hankel(const GSymbol& a, const GSymbol& b, int sign);
  /// [[0, W(d)], [-W(c), W(ainv_tilde)]]
  static OpSpec block(const GSymbol& c, const GSymbol& d, const GSymbol& a_tilde_inv);
};

/// Discretization of an OpSpec; holds one DiscreteSymbol per term.
class DiscreteOp {
 public:
  DiscreteOp(const OpSpec& spec, const Grid& grid);

  const Grid& grid() const { return grid_; }
  int blocks() const { return spec_.blocks; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// (blocks*rows) x (blocks*cols) section.
  Matrix section(int rows, int cols) const;
  /// Matrix-free product; x has blocks*cols entries, result blocks*rows.
  Vector apply(const Vector& x, int rows) const;

 private:
  OpSpec spec_;
  Grid grid_;
  std::vector<DiscreteSymbol> sym_[2][2];
  std::vector<std::string> warnings_;
};

struct SvdResult {
  std::vector<double> s;  // descending
  Matrix V;               // right singular vectors as columns (n x n); empty unless requested
};

/// Dense SVD through LAPACK zgesdd.
SvdResult svd(Matrix A, bool vectors);

struct EstimateOptions {
  double rank_tol = 1e-8;
  bool stability = true;
  bool basis = true;
};

struct KernelEstimate {
  int dim = 0;
  Matrix basis;                 // orthonormal columns, blocks*N rows
  std::vector<double> singular_values;
  double tol = 0.0;             // relative
  double sigma_max = 0.0;
  double residual = 0.0;        // max ||M v|| over basis vectors
  bool stable = true;
  int refined_dim = -1;         // -1 when not computed
  int blocks = 1;
  std::vector<std::string> warnings;
};

/// ker of the tall section S[:, :N] (rows N + pad).
KernelEstimate kernel_estimate(const OpSpec& op, const Grid& grid, const EstimateOptions& opt = {});
/// ker of S[:N, :]^H, i.e. the cokernel measured in the codomain.
KernelEstimate coker_estimate(const OpSpec& op, const Grid& grid, const EstimateOptions& opt = {});
/// Same for an explicit matrix (no stability check): dim of ker A.
KernelEstimate matrix_kernel(const Matrix& A, double rank_tol, bool basis);

/// W(f_1) ... W(f_k) v on the N x N section.
Vector apply_recipe(const OperatorRecipe& r, const Vector& v, const Grid& grid);

/// Half-line samples sqrt(h) f(t_i)
Vector sample(const Grid& grid, const std::function<cplx(double)>& f);

}  // namespace whh::oracle
