#include "whh/oracle/estimate.hpp"

#include <algorithm>
#include <cmath>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "whh/dsl/dsl.hpp"
#include "whh/error.hpp"

namespace whh::oracle {

OpSpec OpSpec::wh(const GSymbol& a) {
  OpSpec s;
  s.entry[0][0].push_back({OpTerm::Kind::W, 1.0, a});
  s.description = "W(" + dsl::format(a) + ")";
  return s;
}

OpSpec OpSpec::wh_plus_hankel(const GSymbol& a, const GSymbol& b, int sign) {
  OpSpec s;
  s.entry[0][0].push_back({OpTerm::Kind::W, 1.0, a});
  s.entry[0][0].push_back({OpTerm::Kind::H, static_cast<double>(sign), b});
  s.description = "W(" + dsl::format(a) + ")" + (sign > 0 ? " + " : " - ") + "H(" + dsl::format(b) + ")";
  return s;
}

OpSpec OpSpec::block(const GSymbol& c, const GSymbol& d, const GSymbol& a_tilde_inv) {
  OpSpec s;
  s.blocks = 2;
  s.entry[0][1].push_back({OpTerm::Kind::W, 1.0, d});
  s.entry[1][0].push_back({OpTerm::Kind::W, -1.0, c});
  s.entry[1][1].push_back({OpTerm::Kind::W, 1.0, a_tilde_inv});
  s.description = "W(V)[c=" + dsl::format(c) + "; d=" + dsl::format(d) + "]";
  return s;
}

DiscreteOp::DiscreteOp(const OpSpec& spec, const Grid& grid) : spec_(spec), grid_(grid) {
  grid.validate();
  const int L = default_bandwidth(grid);
  for (int r = 0; r < spec.blocks; ++r)
    for (int c = 0; c < spec.blocks; ++c)
      for (const auto& t : spec.entry[r][c]) sym_[r][c].emplace_back(t.symbol, grid, L, &warnings_);
}

Matrix DiscreteOp::section(int rows, int cols) const {
  const int B = spec_.blocks;
  Matrix M = Matrix::Zero(B * rows, B * cols);
  for (int r = 0; r < B; ++r)
    for (int c = 0; c < B; ++c)
      for (std::size_t k = 0; k < spec_.entry[r][c].size(); ++k) {
        const auto& t = spec_.entry[r][c][k];
        const auto& ds = sym_[r][c][k];
        M.block(r * rows, c * cols, rows, cols) +=
            t.coeff * (t.kind == OpTerm::Kind::W ? toeplitz_section(ds, rows, cols) : hankel_section(ds, rows, cols));
      }
  return M;
}

Vector DiscreteOp::apply(const Vector& x, int rows) const {
  const int B = spec_.blocks;
  const int cols = static_cast<int>(x.size()) / B;
  Vector y = Vector::Zero(B * rows);
  for (int r = 0; r < B; ++r)
    for (int c = 0; c < B; ++c)
      for (std::size_t k = 0; k < spec_.entry[r][c].size(); ++k) {
        const auto& t = spec_.entry[r][c][k];
        const auto& ds = sym_[r][c][k];
        const Vector xc = x.segment(c * cols, cols);
        y.segment(r * rows, rows) +=
            t.coeff * (t.kind == OpTerm::Kind::W ? toeplitz_apply(ds, xc, rows) : hankel_apply(ds, xc, rows));
      }
  return y;
}

SvdResult svd(Matrix A, bool vectors) {
  const lapack_int m = static_cast<lapack_int>(A.rows()), n = static_cast<lapack_int>(A.cols());
  SvdResult r;
  r.s.resize(static_cast<std::size_t>(std::min(m, n)));
  if (m == 0 || n == 0) return r;
  lapack_int info;
  if (vectors) {
    const char jobz = m >= n ? 'S' : 'A';
    const lapack_int ucols = jobz == 'S' ? std::min(m, n) : m;
    const lapack_int vrows = jobz == 'S' ? std::min(m, n) : n;
    Matrix U(m, ucols), VT(vrows, n);
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, jobz, m, n, A.data(), m, r.s.data(), U.data(), m, VT.data(), vrows);
    r.V = VT.adjoint();
  } else {
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, A.data(), m, r.s.data(), nullptr, 1, nullptr, 1);
  }
  if (info != 0) throw Error(ErrorCode::io_error, "zgesdd failed with info " + std::to_string(info));
  return r;
}

KernelEstimate matrix_kernel(const Matrix& A, double rank_tol, bool basis) {
  KernelEstimate e;
  SvdResult r = svd(A, basis);
  e.singular_values = r.s;
  e.sigma_max = r.s.empty() ? 0.0 : r.s.front();
  e.tol = rank_tol;
  const int n = static_cast<int>(A.cols());
  int rank = 0;
  for (double s : r.s)
    if (s >= rank_tol * e.sigma_max && s > 0.0) ++rank;
  e.dim = n - rank;
  if (basis && e.dim > 0) {
    e.basis = r.V.rightCols(e.dim);
    for (int k = 0; k < e.dim; ++k) e.residual = std::max(e.residual, (A * e.basis.col(k)).norm());
  }
  return e;
}

namespace {

KernelEstimate estimate(const OpSpec& op, const Grid& grid, const EstimateOptions& opt, bool coker) {
  auto measure = [&](const Grid& g, bool basis) {
    const DiscreteOp d(op, g);
    const int N = g.N(), p = g.pad();
    Matrix A = coker ? Matrix(d.section(N, N + p).adjoint()) : d.section(N + p, N);
    KernelEstimate e = matrix_kernel(A, opt.rank_tol, basis);
    e.warnings = d.warnings();
    e.blocks = op.blocks;
    return e;
  };
  KernelEstimate e = measure(grid, opt.basis);
  if (opt.stability) {
    const KernelEstimate r = measure(grid.refined(), false);
    e.refined_dim = r.dim;
    e.stable = r.dim == e.dim;
  }
  return e;
}

}  // namespace

KernelEstimate kernel_estimate(const OpSpec& op, const Grid& grid, const EstimateOptions& opt) {
  return estimate(op, grid, opt, false);
}

KernelEstimate coker_estimate(const OpSpec& op, const Grid& grid, const EstimateOptions& opt) {
  return estimate(op, grid, opt, true);
}

Vector apply_recipe(const OperatorRecipe& r, const Vector& v, const Grid& grid) {
  const int N = grid.N();
  if (v.size() != N) throw Error(ErrorCode::grid_mismatch, "vector length does not match the grid");
  Vector x = v;
  const int L = default_bandwidth(grid);
  for (auto it = r.factors.rbegin(); it != r.factors.rend(); ++it)
    x = toeplitz_apply(DiscreteSymbol(*it, grid, L), x, N);
  return x;
}

Vector sample(const Grid& grid, const std::function<cplx(double)>& f) {
  Vector v(grid.N());
  const double w = std::sqrt(grid.h);
  for (int i = 0; i < grid.N(); ++i) v[i] = w * f(grid.node(i));
  return v;
}

}  // namespace whh::oracle
