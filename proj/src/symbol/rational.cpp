#include "whh/symbol/rational.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace whh {

bool same_pole(cplx p, cplx q) {
  return std::abs(p - q) <= kPoleMergeTol * std::max(1.0, std::max(std::abs(p), std::abs(q)));
}

namespace {

bool pole_less(cplx a, cplx b) {
  return std::make_tuple(a.real(), a.imag()) < std::make_tuple(b.real(), b.imag());
}

// Sums coefficients per (pole, order) while remembering how large the
// summands were, so that cancellations can be told apart from real values.
class PoleAccumulator {
 public:
  void add(cplx pole, int index, cplx value) {
    Entry& e = entry(pole);
    if (static_cast<int>(e.sum.size()) <= index) {
      e.sum.resize(index + 1, 0.0);
      e.mag.resize(index + 1, 0.0);
    }
    e.sum[index] += value;
    e.mag[index] += std::abs(value);
  }

  std::vector<PoleTerm> finish() {
    std::vector<PoleTerm> out;
    for (auto& e : entries_) {
      for (std::size_t k = 0; k < e.sum.size(); ++k) {
        const double a = std::abs(e.sum[k]);
        if (a < kCoeffPruneAbs || a < kCoeffPruneRel * e.mag[k]) e.sum[k] = 0.0;
      }
      while (!e.sum.empty() && e.sum.back() == 0.0) e.sum.pop_back();
      if (!e.sum.empty()) out.push_back({e.pole, std::move(e.sum)});
    }
    std::sort(out.begin(), out.end(),
              [](const PoleTerm& a, const PoleTerm& b) { return pole_less(a.pole, b.pole); });
    return out;
  }

 private:
  struct Entry {
    cplx pole;
    std::vector<cplx> sum;
    std::vector<double> mag;
  };

  Entry& entry(cplx pole) {
    for (auto& e : entries_)
      if (same_pole(e.pole, pole)) return e;
    entries_.push_back({pole, {}, {}});
    return entries_.back();
  }

  std::vector<Entry> entries_;
};

// (-L choose r) for r = 0..n-1
std::vector<double> neg_binomials(int L, int n) {
  std::vector<double> b(n);
  double v = 1.0;
  for (int r = 0; r < n; ++r) {
    b[r] = v;
    v *= static_cast<double>(-L - r) / static_cast<double>(r + 1);
  }
  return b;
}

// Truncated power series in u, degree < n.
using Series = std::vector<cplx>;

Series series_mul(const Series& a, const Series& b, int n) {
  Series r(n, 0.0);
  for (int i = 0; i < n && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j < n && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace

RationalPart RationalPart::single(cplx pole, cplx c, int order) {
  PoleTerm t{pole, std::vector<cplx>(order, 0.0)};
  t.coeffs[order - 1] = c;
  return from_terms({t});
}

RationalPart RationalPart::from_terms(std::vector<PoleTerm> terms) {
  PoleAccumulator acc;
  for (const auto& t : terms)
    for (int k = 0; k < t.order(); ++k)
      if (t.coeffs[k] != 0.0) acc.add(t.pole, k, t.coeffs[k]);
  RationalPart r;
  r.terms_ = acc.finish();
  return r;
}

int RationalPart::degree() const {
  int d = 0;
  for (const auto& t : terms_) d += t.order();
  return d;
}

std::vector<cplx> RationalPart::poles() const {
  std::vector<cplx> out;
  for (const auto& t : terms_)
    for (int k = 0; k < t.order(); ++k) out.push_back(t.pole);
  return out;
}

cplx RationalPart::eval(cplx t) const {
  cplx s = 0.0;
  for (const auto& term : terms_) {
    const cplx w = 1.0 / (t - term.pole);
    cplx acc = 0.0;
    for (int k = term.order(); k-- > 0;) acc = acc * w + term.coeffs[k];
    s += acc * w;
  }
  return s;
}

double RationalPart::coeff_mass() const {
  double s = 0.0;
  for (const auto& t : terms_)
    for (const auto& c : t.coeffs) s += std::abs(c);
  return s;
}

Poly RationalPart::denominator() const {
  const auto ps = poles();
  return poly_from_roots(ps);
}

Poly RationalPart::numerator() const {
  Poly num;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    std::vector<cplx> others;
    for (std::size_t j = 0; j < terms_.size(); ++j)
      if (j != i)
        for (int k = 0; k < terms_[j].order(); ++k) others.push_back(terms_[j].pole);
    const Poly base = poly_from_roots(others);
    const int m = terms_[i].order();
    for (int k = 0; k < m; ++k) {
      if (terms_[i].coeffs[k] == 0.0) continue;
      std::vector<cplx> rep(m - k - 1, terms_[i].pole);
      num = poly_add(num, poly_mul(base, poly_from_roots(rep, terms_[i].coeffs[k])));
    }
  }
  return num;
}

RationalPart RationalPart::operator-() const { return scaled(-1.0); }

RationalPart RationalPart::scaled(cplx s) const {
  if (s == 0.0) return {};
  std::vector<PoleTerm> t = terms_;
  for (auto& term : t)
    for (auto& c : term.coeffs) c *= s;
  return from_terms(std::move(t));
}

RationalPart RationalPart::tilde() const {
  std::vector<PoleTerm> t;
  for (const auto& term : terms_) {
    PoleTerm r{-term.pole, term.coeffs};
    for (int k = 0; k < r.order(); ++k)
      if (k % 2 == 0) r.coeffs[k] = -r.coeffs[k];
    t.push_back(std::move(r));
  }
  return from_terms(std::move(t));
}

RationalPart RationalPart::conj() const {
  std::vector<PoleTerm> t;
  for (const auto& term : terms_) {
    PoleTerm r{std::conj(term.pole), term.coeffs};
    for (auto& c : r.coeffs) c = std::conj(c);
    t.push_back(std::move(r));
  }
  return from_terms(std::move(t));
}

RationalPart operator+(const RationalPart& a, const RationalPart& b) {
  std::vector<PoleTerm> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return RationalPart::from_terms(std::move(t));
}

RationalPart operator-(const RationalPart& a, const RationalPart& b) { return a + (-b); }

RationalPart operator*(const RationalPart& a, const RationalPart& b) {
  PoleAccumulator acc;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      const cplx p = ta.pole, q = tb.pole;
      if (same_pole(p, q)) {
        for (int k = 0; k < ta.order(); ++k)
          for (int l = 0; l < tb.order(); ++l) acc.add(p, k + l + 1, ta.coeffs[k] * tb.coeffs[l]);
        continue;
      }
      const cplx pq = p - q;
      for (int k = 0; k < ta.order(); ++k) {
        if (ta.coeffs[k] == 0.0) continue;
        for (int l = 0; l < tb.order(); ++l) {
          if (tb.coeffs[l] == 0.0) continue;
          const cplx cc = ta.coeffs[k] * tb.coeffs[l];
          const int K = k + 1, L = l + 1;
          // 1/((t-p)^K (t-q)^L), expanded around each pole
          const auto bl = neg_binomials(L, K);
          for (int r = 0; r < K; ++r) acc.add(p, K - r - 1, cc * bl[r] * std::pow(pq, -L - r));
          const auto bk = neg_binomials(K, L);
          for (int r = 0; r < L; ++r) acc.add(q, L - r - 1, cc * bk[r] * std::pow(-pq, -K - r));
        }
      }
    }
  }
  RationalPart r;
  r.terms_ = acc.finish();
  return r;
}

bool operator==(const RationalPart& a, const RationalPart& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].pole != b.terms_[i].pole || a.terms_[i].coeffs != b.terms_[i].coeffs)
      return false;
  return true;
}

RationalPart partial_fractions(cplx scale, std::vector<cplx> zeros, std::vector<cplx> poles,
                               Poly* poly) {
  if (poly) poly->clear();
  if (scale == 0.0) return {};
  // cancel coincident zeros and poles
  for (auto it = zeros.begin(); it != zeros.end();) {
    auto pit = std::find_if(poles.begin(), poles.end(), [&](cplx p) { return same_pole(p, *it); });
    if (pit != poles.end()) {
      poles.erase(pit);
      it = zeros.erase(it);
    } else {
      ++it;
    }
  }
  // group poles by location
  std::vector<std::pair<cplx, int>> groups;
  for (const auto& p : poles) {
    auto git = std::find_if(groups.begin(), groups.end(),
                            [&](const auto& g) { return same_pole(g.first, p); });
    if (git == groups.end())
      groups.push_back({p, 1});
    else
      ++git->second;
  }
  std::vector<PoleTerm> terms;
  for (const auto& [p, m] : groups) {
    Series f{scale};
    for (const auto& z : zeros) f = series_mul(f, {p - z, 1.0}, m);
    for (const auto& [q, mq] : groups) {
      if (q == p) continue;
      // (p - q + u)^-1 = sum_r (-1)^r u^r / (p-q)^(r+1)
      Series inv(m);
      const cplx d = p - q;
      cplx v = 1.0 / d;
      for (int r = 0; r < m; ++r) {
        inv[r] = v;
        v *= -1.0 / d;
      }
      for (int k = 0; k < mq; ++k) f = series_mul(f, inv, m);
    }
    PoleTerm t{p, std::vector<cplx>(m)};
    for (int j = 0; j < m; ++j) t.coeffs[m - j - 1] = f[j];
    terms.push_back(std::move(t));
  }
  if (poly && zeros.size() >= poles.size()) {
    // quotient of scale*prod(t-z) by prod(t-p)
    Poly num = poly_from_roots(zeros, scale);
    const Poly den = poly_from_roots(poles);
    const int dq = static_cast<int>(num.size()) - static_cast<int>(den.size());
    Poly q(dq + 1, 0.0);
    for (int k = dq; k >= 0; --k) {
      const cplx c = num[k + den.size() - 1];
      q[k] = c;
      for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= c * den[j];
    }
    *poly = std::move(q);
  }
  return RationalPart::from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------

RationalFunction RationalFunction::constant(cplx c) {
  RationalFunction r;
  if (c != 0.0) r.poly = {c};
  return r;
}

RationalFunction RationalFunction::variable() {
  RationalFunction r;
  r.poly = {0.0, 1.0};
  return r;
}

bool RationalFunction::is_zero() const { return poly.empty() && proper.is_zero(); }

int RationalFunction::poly_degree() const { return whh::poly_degree(poly); }

cplx RationalFunction::eval(cplx t) const { return poly_eval(poly, t) + proper.eval(t); }

void RationalFunction::fraction(Poly* num, Poly* den) const {
  *den = proper.denominator();
  *num = poly_add(poly_mul(poly, *den), proper.numerator());
  poly_trim(*num);
}

RationalFunction RationalFunction::reciprocal() const {
  Poly num, den;
  fraction(&num, &den);
  if (num.empty()) throw Error(ErrorCode::not_invertible, "division by the zero function");
  const auto zeros = poly_roots(num);
  for (const auto& z : zeros)
    if (std::abs(z.imag()) < 1e-9 * std::max(1.0, std::abs(z)))
      throw RealPoleError(z, "reciprocal has a pole on the real axis at t = " +
                                 std::to_string(z.real()));
  RationalFunction r;
  r.proper = partial_fractions(1.0 / num.back(), proper.poles(), zeros, &r.poly);
  poly_trim(r.poly);
  return r;
}

RationalFunction RationalFunction::scaled(cplx s) const {
  RationalFunction r;
  if (s == 0.0) return r;
  r.poly = poly_scale(poly, s);
  r.proper = proper.scaled(s);
  return r;
}

RationalFunction RationalFunction::tilde() const {
  RationalFunction r;
  r.poly = poly;
  for (std::size_t k = 1; k < r.poly.size(); k += 2) r.poly[k] = -r.poly[k];
  r.proper = proper.tilde();
  return r;
}

RationalFunction RationalFunction::conj() const {
  RationalFunction r;
  r.poly = poly;
  for (auto& c : r.poly) c = std::conj(c);
  r.proper = proper.conj();
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  RationalFunction r;
  r.poly = poly_add(a.poly, b.poly);
  poly_trim(r.poly, 0.0);
  r.proper = a.proper + b.proper;
  return r;
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return a + b.scaled(-1.0);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  RationalFunction r;
  r.poly = poly_mul(a.poly, b.poly);
  r.proper = a.proper * b.proper;
  // polynomial times pole terms
  auto cross = [&r](const Poly& P, const RationalPart& R) {
    if (P.empty()) return;
    std::vector<PoleTerm> extra;
    for (const auto& term : R.terms()) {
      const Poly s = poly_taylor_shift(P, term.pole);  // P in powers of (t - pole)
      PoleTerm out{term.pole, std::vector<cplx>(term.order(), 0.0)};
      for (int k = 0; k < term.order(); ++k) {
        const int K = k + 1;
        for (int j = 0; j < static_cast<int>(s.size()); ++j) {
          const cplx v = term.coeffs[k] * s[j];
          if (v == 0.0) continue;
          if (j < K) {
            out.coeffs[K - j - 1] += v;
          } else {
            std::vector<cplx> rep(j - K, term.pole);
            r.poly = poly_add(r.poly, poly_from_roots(rep, v));
          }
        }
      }
      extra.push_back(std::move(out));
    }
    r.proper = r.proper + RationalPart::from_terms(std::move(extra));
  };
  cross(a.poly, b.proper);
  cross(b.poly, a.proper);
  poly_trim(r.poly, 1e-15);
  return r;
}

}  // namespace whh
