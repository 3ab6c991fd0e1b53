#include "whh/symbol/poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace whh {

void poly_trim(Poly& p, double rel) {
  double mx = 0.0;
  for (const auto& c : p) mx = std::max(mx, std::abs(c));
  while (!p.empty() && std::abs(p.back()) <= rel * mx) p.pop_back();
  if (mx == 0.0) p.clear();
}

int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_scale(b, -1.0)); }

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_scale(const Poly& a, cplx s) {
  Poly r(a);
  for (auto& c : r) c *= s;
  return r;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k) r[k - 1] = a[k] * static_cast<double>(k);
  return r;
}

cplx poly_eval(const Poly& a, cplx x) {
  cplx acc = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * x + a[k];
  return acc;
}

Poly poly_from_roots(std::span<const cplx> roots, cplx lead) {
  Poly r{lead};
  for (const auto& z : roots) {
    Poly next(r.size() + 1, 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
      next[k + 1] += r[k];
      next[k] -= z * r[k];
    }
    r = std::move(next);
  }
  return r;
}

Poly poly_taylor_shift(const Poly& p, cplx x0) {
  // repeated synthetic division by (x - x0)
  Poly work(p), out;
  out.reserve(p.size());
  while (!work.empty()) {
    cplx acc = 0.0;
    Poly q(work.size() > 1 ? work.size() - 1 : 0);
    for (std::size_t k = work.size(); k-- > 0;) {
      acc = acc * x0 + work[k];
      if (k > 0) q[k - 1] = acc;
    }
    out.push_back(acc);
    work = std::move(q);
  }
  return out;
}

namespace {

cplx newton(const Poly& p, const Poly& dp, cplx x, int iters = 8) {
  cplx fx = poly_eval(p, x);
  for (int it = 0; it < iters; ++it) {
    const cplx d = poly_eval(dp, x);
    if (d == 0.0) break;
    const cplx y = x - fx / d;
    const cplx fy = poly_eval(p, y);
    if (!(std::abs(fy) < std::abs(fx))) break;
    x = y;
    fx = fy;
    if (fx == 0.0) break;
  }
  return x;
}

// Scale of p near x: sum |c_k| |x|^k, the natural size of rounding errors.
double eval_scale(const Poly& p, cplx x) {
  double s = 0.0, r = std::abs(x), pw = 1.0;
  for (const auto& c : p) {
    s += std::abs(c) * pw;
    pw *= r;
  }
  return s;
}

}  // namespace

std::vector<cplx> poly_roots(const Poly& p_in) {
  Poly p(p_in);
  poly_trim(p, 0.0);
  const int n = poly_degree(p);
  if (n <= 0) return {};
  std::vector<cplx> roots;
  if (n == 1) return {-p[0] / p[1]};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) C(0, k) = -p[n - 1 - k] / p[n];
  for (int k = 1; k < n; ++k) C(k, k - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  const Poly dp = poly_derivative(p);
  for (int k = 0; k < n; ++k) roots.push_back(newton(p, dp, es.eigenvalues()[k]));

  // Collapse clusters left behind by multiple roots.
  std::vector<bool> used(n, false);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::vector<int> cl{i};
    used[i] = true;
    const double tol = 1e-4 * std::max(1.0, std::abs(roots[i]));
    for (int j = i + 1; j < n; ++j)
      if (!used[j] && std::abs(roots[j] - roots[i]) < tol) {
        cl.push_back(j);
        used[j] = true;
      }
    const int m = static_cast<int>(cl.size());
    if (m == 1) {
      out.push_back(roots[i]);
      continue;
    }
    cplx c = 0.0;
    for (int j : cl) c += roots[j];
    c /= static_cast<double>(m);
    Poly dm = p;
    for (int k = 0; k < m - 1; ++k) dm = poly_derivative(dm);
    const cplx cm = newton(dm, poly_derivative(dm), c, 12);
    // accept only if the lower derivatives really vanish at the candidate
    bool multiple = true;
    Poly dk = p;
    for (int k = 0; k < m - 1 && multiple; ++k) {
      const double scale = eval_scale(dk, cm);
      if (std::abs(poly_eval(dk, cm)) > 1e-9 * std::max(scale, 1e-300)) multiple = false;
      dk = poly_derivative(dk);
    }
    if (multiple) {
      for (int k = 0; k < m; ++k) out.push_back(cm);
    } else {
      for (int j : cl) out.push_back(roots[j]);
    }
  }
  return out;
}

}  // namespace whh
