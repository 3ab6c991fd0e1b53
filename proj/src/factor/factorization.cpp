#include "whh/factor/factorization.hpp"

#include <algorithm>
#include <cmath>

#include "whh/error.hpp"

namespace whh {

namespace {

constexpr cplx I{0.0, 1.0};

bool on_real_axis(cplx z) { return std::abs(z.imag()) < 1e-9 * std::max(1.0, std::abs(z)); }

// scale * prod(t - z) / prod(t - p) as a symbol; degrees must balance.
GSymbol rational_symbol(cplx scale, std::vector<cplx> zeros, std::vector<cplx> poles) {
  RationalFunction f;
  f.proper = partial_fractions(scale, std::move(zeros), std::move(poles), &f.poly);
  return GSymbol::from_rational(f);
}

// Canonical order so repeated factorizations agree bit for bit.
void sort_roots(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

std::vector<double> sample_points() {
  std::vector<double> t;
  for (int j = 0; j < 200; ++j) {
    const double u = -1.0 + (2.0 * j + 1.0) / 200.0;
    t.push_back(5.0 * std::tan(0.49 * M_PI * u));
  }
  return t;
}

}  // namespace

cplx WHFactorization::reconstruct(double t) const {
  const cplx ch = cplx(t, -1.0) / cplx(t, 1.0);
  return g_minus(t) * std::exp(I * nu * t) * std::pow(ch, n) * g_plus(t);
}

double reconstruction_error(const GSymbol& g, const WHFactorization& f) {
  double err = 0.0;
  for (double t : sample_points()) err = std::max(err, std::abs(g(t) - f.reconstruct(t)));
  return err;
}

WHFactorization factorize(const GSymbol& g) {
  double shift = 0.0;
  if (!g.is_monomial_times_rational(&shift))
    throw Error(ErrorCode::not_factorizable,
                "AP part has more than one term or L0 shifts differ from the AP frequency");
  if (g.ap().empty())
    throw Error(ErrorCode::not_invertible, "symbol without AP part vanishes at infinity");

  const RationalFunction r = g.as_rational(nullptr);
  Poly num, den;
  r.fraction(&num, &den);
  const cplx lead = num.back() / den.back();

  std::vector<cplx> z_up, z_lo, p_up, p_lo;
  for (cplx z : poly_roots(num)) {
    if (on_real_axis(z)) throw RealPoleError(z, "symbol vanishes on the real axis");
    (z.imag() > 0 ? z_up : z_lo).push_back(z);
  }
  for (cplx p : poly_roots(den)) {
    if (on_real_axis(p)) throw RealPoleError(p, "pole on the real axis");
    (p.imag() > 0 ? p_up : p_lo).push_back(p);
  }
  const int n = static_cast<int>(z_up.size()) - static_cast<int>(p_up.size());

  // balance with (t - i) below / (t + i) above so the middle factor is chi^n
  std::vector<cplx> m_zeros = z_up, m_poles = p_up;
  std::vector<cplx> p_zeros = z_lo, p_poles = p_lo;
  for (int k = 0; k < std::abs(n); ++k) {
    if (n > 0) {
      m_poles.push_back(I);
      p_zeros.push_back(-I);
    } else {
      m_zeros.push_back(I);
      p_poles.push_back(-I);
    }
  }
  for (auto* v : {&m_zeros, &m_poles, &p_zeros, &p_poles}) sort_roots(*v);

  cplx m0 = 1.0;
  for (cplx z : m_zeros) m0 *= -z;
  for (cplx p : m_poles) m0 /= -p;

  WHFactorization f;
  f.nu = shift;
  f.n = n;
  f.g_minus = rational_symbol(1.0 / m0, m_zeros, m_poles);
  f.g_plus = rational_symbol(lead * m0, p_zeros, p_poles);
  return f;
}

MatchingFactorization matching_factorization(const GSymbol& g) {
  if (!is_matching(g)) throw Error(ErrorCode::not_matching, "g * tilde(g) != 1");
  const WHFactorization f = factorize(g);
  if (f.nu != 0.0) throw Error(ErrorCode::out_of_scope, "matching factorization needs nu = 0");
  MatchingFactorization m;
  m.g_plus = f.g_plus;
  m.n = f.n;
  m.xi = xi(g);
  const GSymbol rhs = inverse(f.g_plus.tilde()).scaled(static_cast<double>(m.xi));
  const double err = sample_distance(f.g_minus, rhs);
  if (!(err < 1e-10))
    throw Error(ErrorCode::structure_violation,
                "g_- differs from xi * tilde(g_+)^-1 by " + std::to_string(err));
  return m;
}

OperatorRecipe one_sided_inverse_recipe(const WHFactorization& f, Side side) {
  if (f.nu != 0.0) throw Error(ErrorCode::out_of_scope, "recipe needs nu = 0");
  if (side == Side::right && f.n > 0)
    throw Error(ErrorCode::wrong_side, "right inverse requires n <= 0, got n = " + std::to_string(f.n));
  if (side == Side::left && f.n < 0)
    throw Error(ErrorCode::wrong_side, "left inverse requires n >= 0, got n = " + std::to_string(f.n));
  OperatorRecipe r;
  for (GSymbol s : {inverse(f.g_plus), GSymbol::chi(-f.n), inverse(f.g_minus)}) {
    cplx c;
    if (s.is_constant(&c) && std::abs(c - 1.0) < 1e-14) continue;
    r.factors.push_back(std::move(s));
  }
  return r;
}

}  // namespace whh
