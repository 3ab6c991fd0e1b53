#include "whh/kernel/structure.hpp"

#include <cmath>

#include "whh/error.hpp"
#include "whh/factor/factorization.hpp"

namespace whh::kernel {

namespace {

oracle::DiscreteSymbol disc(const GSymbol& a, const Grid& grid) {
  return oracle::DiscreteSymbol(a, grid, oracle::default_bandwidth(grid));
}

double rel(double num, double den) { return den > 0.0 ? num / den : num; }

void require_kernel(const GSymbol& g, const Vector& f, const Grid& grid, double tol, const char* what) {
  const double r = wh_residual(g, f, grid);
  if (r > tol)
    throw Error(ErrorCode::not_in_kernel,
                std::string(what) + ": relative residual " + std::to_string(r) + " exceeds " + std::to_string(tol));
}

}  // namespace

io::json to_json(const GridFunction& f) {
  io::json out = io::json::array();
  const int n = static_cast<int>(f.values.size());
  const int N = f.grid.N();
  for (int i = 0; i < n; ++i) {
    const double node = f.support == Support::half ? f.grid.node(i) : (i - N + 0.5) * f.grid.h;
    out.push_back(io::json::array({node, f.values[i].real(), f.values[i].imag()}));
  }
  return out;
}

GridFunction psi0(const Grid& grid, Support support) {
  const int N = grid.N();
  Vector half(N);
  const double sh = std::sqrt(grid.h);
  if (grid.scheme == oracle::Scheme::cayley) {
    const double w = (2.0 - grid.h) / (2.0 + grid.h);
    for (int i = 0; i < N; ++i) half[i] = sh * std::pow(w, i + 0.5);
  } else {
    for (int i = 0; i < N; ++i) half[i] = sh * std::exp(-grid.node(i));
  }
  if (support == Support::half) return {grid, half, Support::half};
  return {grid, oracle::full::embed(half), Support::full};
}

Vector W(const GSymbol& a, const Vector& x, const Grid& grid) {
  return oracle::toeplitz_apply(disc(a, grid), x, grid.N());
}

Vector H(const GSymbol& b, const Vector& x, const Grid& grid) {
  return oracle::hankel_apply(disc(b, grid), x, grid.N());
}

Vector JQW0P(const GSymbol& g, const Vector& x, const Grid& grid) {
  using namespace oracle::full;
  return restrict_plus(apply_J(apply_Q(apply_W0(disc(g, grid), embed(x)))));
}

double wh_residual(const GSymbol& g, const Vector& f, const Grid& grid) {
  return rel(W(g, f, grid).norm(), f.norm());
}

double whh_residual(const GSymbol& a, const GSymbol& b, int sign, const Vector& f, const Grid& grid) {
  const Vector r = W(a, f, grid) + static_cast<double>(sign) * H(b, f, grid);
  return rel(r.norm(), f.norm());
}

GridFunction kernel_basis_scalar(const GSymbol& g, const Grid& grid) {
  const MatchingFactorization m = matching_factorization(g);
  if (m.n != -1)
    throw Error(ErrorCode::wrong_index, "kernel basis needs n(g) = -1, got " + std::to_string(m.n));
  Vector v = W(inverse(m.g_plus), psi0(grid).values, grid);
  v /= v.norm();
  return {grid, v, Support::half};
}

Projection projection_P(const GSymbol& g, const Vector& f, const Grid& grid, double tol) {
  Projection p;
  p.kernel_residual = wh_residual(g, f, grid);
  if (p.kernel_residual > tol)
    throw Error(ErrorCode::not_in_kernel,
                "f is not in ker W(g): relative residual " + std::to_string(p.kernel_residual));
  p.Pf = JQW0P(g, f, grid);
  p.plus = 0.5 * (f + p.Pf);
  p.minus = 0.5 * (f - p.Pf);
  return p;
}

ProjectionRanks projection_ranks(const GSymbol& g, const Matrix& basis, const Grid& grid) {
  ProjectionRanks r;
  const int k = static_cast<int>(basis.cols());
  Matrix PV(basis.rows(), k);
  for (int j = 0; j < k; ++j) PV.col(j) = JQW0P(g, basis.col(j), grid);
  r.M = basis.adjoint() * PV;
  if (k == 0) return r;
  r.involution_defect = (r.M * r.M - Matrix::Identity(k, k)).norm();
  const cplx tr = r.M.trace();
  r.plus = static_cast<int>(std::lround(0.5 * (k + tr.real())));
  r.minus = k - r.plus;
  return r;
}

std::pair<Vector, Vector> e1_raw(const MatchingPair& pair, const Vector& phi, const Vector& psi, const Grid& grid) {
  const GSymbol c = pair.a * inverse(pair.b);
  const GSymbol at_inv = inverse(pair.a.tilde());
  const Vector x = JQW0P(c, phi, grid), y = JQW0P(at_inv, psi, grid);
  return {0.5 * (phi - x + y), 0.5 * (phi + x - y)};
}

std::pair<Vector, Vector> e2_raw(const MatchingPair& pair, const Vector& Phi, const Vector& Psi, const Grid& grid) {
  const Vector s = Phi + Psi, dlt = Phi - Psi;
  // P W0(tilde b) s + P W0(tilde a) J P dlt = W(tilde b) s + H(tilde a) dlt
  return {s, W(pair.b.tilde(), s, grid) + H(pair.a.tilde(), dlt, grid)};
}

std::pair<Vector, Vector> e1_map(const MatchingPair& pair, const Vector& phi, const Vector& psi,
                                 const Grid& grid, double tol) {
  const auto V = v_symbol(pair);
  // W(V) (phi, psi) = (W(d) psi, -W(c) phi + W(tilde a^{-1}) psi)
  const Vector r1 = W(V[0][1], psi, grid);
  const Vector r2 = W(V[1][0], phi, grid) + W(V[1][1], psi, grid);
  const double scale = std::sqrt(phi.squaredNorm() + psi.squaredNorm());
  const double res = rel(std::sqrt(r1.squaredNorm() + r2.squaredNorm()), scale);
  if (res > tol) throw Error(ErrorCode::not_in_kernel, "input not in ker W(V(a,b)): residual " + std::to_string(res));
  return e1_raw(pair, phi, psi, grid);
}

std::pair<Vector, Vector> e2_map(const MatchingPair& pair, const Vector& Phi, const Vector& Psi,
                                 const Grid& grid, double tol) {
  const double scale = std::sqrt(Phi.squaredNorm() + Psi.squaredNorm());
  const Vector rp = W(pair.a, Phi, grid) + H(pair.b, Phi, grid);
  const Vector rm = W(pair.a, Psi, grid) - H(pair.b, Psi, grid);
  const double res = rel(std::sqrt(rp.squaredNorm() + rm.squaredNorm()), scale);
  if (res > tol)
    throw Error(ErrorCode::not_in_kernel, "input not in ker diag(W(a)+H(b), W(a)-H(b)): residual " + std::to_string(res));
  return e2_raw(pair, Phi, Psi, grid);
}

PhiResult phi_pm(const MatchingPair& pair, const Vector& s, int sign, const Grid& grid, double tol) {
  const SubordinatedPair sp = subordinated(pair);
  require_kernel(sp.d, s, grid, tol, "phi_pm needs s in ker W(d)");
  OperatorRecipe rinv;
  try {
    rinv = one_sided_inverse_recipe(factorize(sp.c), Side::right);
  } catch (const Error& e) {
    throw Error(ErrorCode::no_right_inverse, std::string("W(c) has no right inverse recipe: ") + e.what());
  }
  const GSymbol at_inv = inverse(pair.a.tilde());
  const Vector u = oracle::apply_recipe(rinv, W(at_inv, s, grid), grid);
  const double sg = sign > 0 ? 1.0 : -1.0;
  PhiResult r;
  r.phi = 0.5 * (u - sg * JQW0P(sp.c, u, grid) + sg * JQW0P(at_inv, s, grid));
  const double ns = s.norm();
  r.kernel_residual = rel((W(pair.a, r.phi, grid) + sg * H(pair.b, r.phi, grid)).norm(), ns);
  const Vector Ps = 0.5 * (s + sg * JQW0P(sp.d, s, grid));
  r.pm_identity_residual = rel((W(pair.b.tilde(), r.phi, grid) + sg * H(pair.a.tilde(), r.phi, grid) - Ps).norm(), ns);
  return r;
}

double image_defect(const Vector& y, const Grid& grid) {
  const Vector q = W(GSymbol::chi(), W(GSymbol::chi(-1), y, grid), grid);
  return rel((y - q).norm(), y.norm());
}

namespace {

KappaResult kappa_once(const GSymbol& a, const Grid& grid, double threshold) {
  const GSymbol chi = GSymbol::chi(), chi_inv = GSymbol::chi(-1);
  const GSymbol alpha = a * chi_inv;
  const GSymbol d = a * inverse(a.tilde()) * chi_inv;
  const MatchingFactorization md = matching_factorization(d);
  if (md.n != -1) throw Error(ErrorCode::wrong_case, "n(d) must be -1 in case 3");
  const Vector s = W(inverse(md.g_plus), psi0(grid).values, grid);
  const GSymbol at_inv = inverse(alpha.tilde());

  const Vector inner = W(at_inv, s, grid);
  const Vector first = W(chi, inner, grid);
  const Vector middle = JQW0P(chi_inv, W(chi, inner, grid), grid);
  const Vector third = JQW0P(at_inv, s, grid);

  KappaResult r;
  r.kappa = first + middle - third;
  r.tested = H(inverse(alpha), s, grid);
  const double scale = std::max({first.norm(), third.norm(), 1e-300});
  r.middle_term = middle.norm() / scale;
  r.first_term_defect = image_defect(first, grid);
  r.membership = image_defect(r.tested, grid);
  r.in_image = r.membership < threshold;
  r.kernel_residual = whh_residual(alpha, alpha * chi, -1, r.kappa, grid);
  return r;
}

}  // namespace

KappaResult kappa_element(const GSymbol& a, const Grid& grid, double threshold, bool two_grid) {
  double v = 0.0;
  int n = 0;
  try {
    v = nu(a);
    n = winding_n(a);
  } catch (const Error& e) {
    throw Error(ErrorCode::wrong_case, std::string("indices of a unavailable: ") + e.what());
  }
  if (v != 0.0 || n != 0)
    throw Error(ErrorCode::wrong_case, "case 3 needs nu(a) = n(a) = 0, got nu = " + std::to_string(v) +
                                           ", n = " + std::to_string(n));
  KappaResult r = kappa_once(a, grid, threshold);
  if (two_grid) {
    const KappaResult r2 = kappa_once(a, grid.refined(), threshold);
    r.stable = r2.in_image == r.in_image;
  }
  return r;
}

}  // namespace whh::kernel
