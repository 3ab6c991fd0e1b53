#include "whh/symbol/gsymbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace whh {

namespace {

constexpr cplx I{0.0, 1.0};

bool same_freq(double a, double b) {
  return std::abs(a - b) <= kFreqMergeTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

cplx expi(double x) { return {std::cos(x), std::sin(x)}; }

}  // namespace

GSymbol GSymbol::constant(cplx c) { return exp(0.0, c); }

GSymbol GSymbol::exp(double delta, cplx c) {
  GSymbol g;
  if (c != 0.0) g.ap_.push_back({delta, c});
  return g;
}

GSymbol GSymbol::chi(int n) {
  // chi = 1 - 2i/(t+i), chi^{-1} = 1 + 2i/(t-i)
  GSymbol one = constant(1.0);
  if (n == 0) return one;
  const GSymbol base = n > 0 ? from_l0(0.0, RationalPart::single(-I, -2.0 * I))
                             : from_l0(0.0, RationalPart::single(I, 2.0 * I));
  return power(one + base, std::abs(n));
}

GSymbol GSymbol::from_l0(double shift, RationalPart r) {
  GSymbol g;
  if (!r.is_zero()) g.l0_.push_back({shift, std::move(r)});
  return g;
}

GSymbol GSymbol::from_rational(const RationalFunction& f, double shift) {
  if (f.poly_degree() > 0)
    throw Error(ErrorCode::improper_rational,
                "numerator degree exceeds denominator degree by " +
                    std::to_string(f.poly_degree()));
  GSymbol g;
  if (!f.poly.empty()) g.ap_.push_back({shift, f.poly[0]});
  if (!f.proper.is_zero()) g.l0_.push_back({shift, f.proper});
  g.canonicalize();
  return g;
}

GSymbol GSymbol::from_parts(std::vector<APTerm> ap, std::vector<L0Term> l0) {
  GSymbol g;
  g.ap_ = std::move(ap);
  g.l0_ = std::move(l0);
  g.canonicalize();
  return g;
}

void GSymbol::canonicalize() {
  std::stable_sort(ap_.begin(), ap_.end(),
                   [](const APTerm& a, const APTerm& b) { return a.freq < b.freq; });
  std::vector<APTerm> ap;
  for (std::size_t i = 0; i < ap_.size();) {
    std::size_t j = i;
    cplx sum = 0.0;
    double mag = 0.0;
    while (j < ap_.size() && same_freq(ap_[j].freq, ap_[i].freq)) {
      sum += ap_[j].coeff;
      mag += std::abs(ap_[j].coeff);
      ++j;
    }
    const double a = std::abs(sum);
    if (!(a < kCoeffPruneAbs || a < kCoeffPruneRel * mag)) ap.push_back({ap_[i].freq, sum});
    i = j;
  }
  ap_ = std::move(ap);

  std::stable_sort(l0_.begin(), l0_.end(),
                   [](const L0Term& a, const L0Term& b) { return a.shift < b.shift; });
  std::vector<L0Term> l0;
  for (std::size_t i = 0; i < l0_.size();) {
    std::size_t j = i;
    std::vector<PoleTerm> merged;
    while (j < l0_.size() && same_freq(l0_[j].shift, l0_[i].shift)) {
      const auto& t = l0_[j].rational.terms();
      merged.insert(merged.end(), t.begin(), t.end());
      ++j;
    }
    RationalPart r = (j - i == 1) ? l0_[i].rational : RationalPart::from_terms(std::move(merged));
    if (!r.is_zero()) l0.push_back({l0_[i].shift, std::move(r)});
    i = j;
  }
  l0_ = std::move(l0);
}

bool GSymbol::is_constant(cplx* c) const {
  if (!l0_.empty()) return false;
  if (ap_.empty()) {
    if (c) *c = 0.0;
    return true;
  }
  if (ap_.size() == 1 && ap_[0].freq == 0.0) {
    if (c) *c = ap_[0].coeff;
    return true;
  }
  return false;
}

bool GSymbol::is_monomial_times_rational(double* shift) const {
  if (ap_.size() > 1) return false;
  double s = !ap_.empty() ? ap_[0].freq : (!l0_.empty() ? l0_[0].shift : 0.0);
  for (const auto& t : l0_)
    if (!same_freq(t.shift, s)) return false;
  if (shift) *shift = s;
  return true;
}

cplx GSymbol::operator()(double t) const {
  cplx s = 0.0;
  for (const auto& a : ap_) s += a.coeff * expi(a.freq * t);
  for (const auto& l : l0_) s += expi(l.shift * t) * l.rational.eval(t);
  return s;
}

double GSymbol::coeff_mass() const {
  double s = 0.0;
  for (const auto& a : ap_) s += std::abs(a.coeff);
  for (const auto& l : l0_) s += l.rational.coeff_mass();
  return s;
}

RationalFunction GSymbol::as_rational(double* shift) const {
  double s = 0.0;
  if (!is_monomial_times_rational(&s))
    throw Error(ErrorCode::not_factorizable, "symbol is not a monomial times a rational function");
  RationalFunction f;
  if (!ap_.empty()) f.poly = {ap_[0].coeff};
  for (const auto& l : l0_) f.proper = f.proper + l.rational;
  if (shift) *shift = s;
  return f;
}

GSymbol GSymbol::tilde() const {
  GSymbol g;
  for (const auto& a : ap_) g.ap_.push_back({-a.freq, a.coeff});
  for (const auto& l : l0_) g.l0_.push_back({-l.shift, l.rational.tilde()});
  g.canonicalize();
  return g;
}

GSymbol GSymbol::conj() const {
  GSymbol g;
  for (const auto& a : ap_) g.ap_.push_back({-a.freq, std::conj(a.coeff)});
  for (const auto& l : l0_) g.l0_.push_back({-l.shift, l.rational.conj()});
  g.canonicalize();
  return g;
}

GSymbol GSymbol::operator-() const { return scaled(-1.0); }

GSymbol GSymbol::scaled(cplx s) const {
  GSymbol g;
  if (s == 0.0) return g;
  for (const auto& a : ap_) g.ap_.push_back({a.freq, a.coeff * s});
  for (const auto& l : l0_) g.l0_.push_back({l.shift, l.rational.scaled(s)});
  g.canonicalize();
  return g;
}

GSymbol operator+(const GSymbol& a, const GSymbol& b) {
  GSymbol g;
  g.ap_ = a.ap_;
  g.ap_.insert(g.ap_.end(), b.ap_.begin(), b.ap_.end());
  g.l0_ = a.l0_;
  g.l0_.insert(g.l0_.end(), b.l0_.begin(), b.l0_.end());
  g.canonicalize();
  return g;
}

GSymbol operator-(const GSymbol& a, const GSymbol& b) { return a + (-b); }

GSymbol operator*(const GSymbol& a, const GSymbol& b) {
  GSymbol g;
  for (const auto& x : a.ap_)
    for (const auto& y : b.ap_) g.ap_.push_back({x.freq + y.freq, x.coeff * y.coeff});
  for (const auto& x : a.ap_)
    for (const auto& y : b.l0_) g.l0_.push_back({x.freq + y.shift, y.rational.scaled(x.coeff)});
  for (const auto& x : a.l0_)
    for (const auto& y : b.ap_) g.l0_.push_back({x.shift + y.freq, x.rational.scaled(y.coeff)});
  for (const auto& x : a.l0_)
    for (const auto& y : b.l0_) g.l0_.push_back({x.shift + y.shift, x.rational * y.rational});
  g.canonicalize();
  return g;
}

bool operator==(const GSymbol& a, const GSymbol& b) {
  if (a.ap_.size() != b.ap_.size() || a.l0_.size() != b.l0_.size()) return false;
  for (std::size_t i = 0; i < a.ap_.size(); ++i)
    if (a.ap_[i].freq != b.ap_[i].freq || a.ap_[i].coeff != b.ap_[i].coeff) return false;
  for (std::size_t i = 0; i < a.l0_.size(); ++i)
    if (a.l0_[i].shift != b.l0_[i].shift || !(a.l0_[i].rational == b.l0_[i].rational))
      return false;
  return true;
}

GSymbol add(const GSymbol& a, const GSymbol& b) { return a + b; }
GSymbol mul(const GSymbol& a, const GSymbol& b) { return a * b; }
GSymbol tilde(const GSymbol& a) { return a.tilde(); }
GSymbol conj(const GSymbol& a) { return a.conj(); }
cplx eval(const GSymbol& a, double t) { return a(t); }

namespace {

const std::vector<double>& sample_points() {
  static const std::vector<double> pts = [] {
    std::vector<double> v;
    const int n = 200;
    for (int k = 0; k < n; ++k) {
      const double u = -1.0 + 2.0 * (k + 0.5) / n;
      v.push_back(5.0 * std::tan(0.49 * std::numbers::pi * u));
    }
    return v;
  }();
  return pts;
}

}  // namespace

double sample_distance(const GSymbol& a, const GSymbol& b) {
  double d = 0.0;
  for (double t : sample_points()) d = std::max(d, std::abs(a(t) - b(t)));
  return d;
}

bool approx_equal(const GSymbol& a, const GSymbol& b, double tol) {
  double scale = 1.0;
  for (double t : sample_points()) scale = std::max(scale, std::abs(a(t)));
  return sample_distance(a, b) <= tol * scale;
}

GSymbol inverse(const GSymbol& a) {
  if (a.is_zero()) throw Error(ErrorCode::not_invertible, "zero symbol");
  double shift = 0.0;
  if (a.is_monomial_times_rational(&shift)) {
    if (a.ap().empty())
      throw Error(ErrorCode::not_invertible, "symbol without AP part vanishes at infinity");
    const RationalFunction f = a.as_rational(nullptr);
    RationalFunction r;
    try {
      r = f.reciprocal();
    } catch (const RealPoleError& e) {
      throw Error(ErrorCode::not_invertible,
                  "symbol vanishes on the real axis near t = " + std::to_string(e.root().real()));
    }
    return GSymbol::from_rational(r, -shift);
  }
  bool inv = false;
  inv = is_invertible(a);
  if (!inv) throw Error(ErrorCode::not_invertible, "inf |a| = 0 on the real axis");
  throw Error(ErrorCode::not_representable,
              "inverse of a symbol with a non-monomial AP part is not a finite sum");
}

GSymbol power(const GSymbol& a, int n) {
  if (n < 0) return power(inverse(a), -n);
  GSymbol result = GSymbol::constant(1.0), base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------

cplx TimeKernel::operator()(double s) const {
  cplx v = 0.0;
  for (const auto& p : pieces) {
    const double u = s - p.shift;
    double w = 0.0;
    if (u == 0.0)
      w = 0.5;
    else if ((p.half == KernelPiece::Half::positive) == (u > 0.0))
      w = 1.0;
    if (w == 0.0) continue;
    cplx acc = 0.0;
    for (std::size_t k = p.poly.size(); k-- > 0;) acc = acc * u + p.poly[k];
    v += w * acc * std::exp(p.exponent * u);
  }
  return v;
}

TimeKernel time_kernel(const GSymbol& a) {
  TimeKernel k;
  for (const auto& l : a.l0()) {
    for (const auto& term : l.rational.terms()) {
      const bool lower = term.pole.imag() < 0.0;
      KernelPiece piece{lower ? KernelPiece::Half::positive : KernelPiece::Half::negative, l.shift,
                        -I * term.pole, std::vector<cplx>(term.order(), 0.0)};
      // (t-p)^-(k+1)  <->  (-i)^(k+1) s^k / k! e^{-ips}, s > 0   (Im p < 0)
      //                   -(-i)^(k+1) s^k / k! e^{-ips}, s < 0   (Im p > 0)
      cplx f = -I;
      double fact = 1.0;
      for (int j = 0; j < term.order(); ++j) {
        if (j > 0) {
          f *= -I;
          fact *= j;
        }
        piece.poly[j] = (lower ? 1.0 : -1.0) * term.coeffs[j] * f / fact;
      }
      k.pieces.push_back(std::move(piece));
    }
  }
  return k;
}

// ---------------------------------------------------------------------------

namespace {

// Upper bound of |L0 part| for |t| >= L.
double l0_tail_bound(const GSymbol& a, double L) {
  double s = 0.0;
  for (const auto& l : a.l0())
    for (const auto& term : l.rational.terms()) {
      const double d = std::max(std::abs(term.pole.imag()), L - std::abs(term.pole.real()));
      for (int k = 0; k < term.order(); ++k) s += std::abs(term.coeffs[k]) / std::pow(d, k + 1);
    }
  return s;
}

GSymbol ap_part(const GSymbol& a) { return GSymbol::from_parts(a.ap(), {}); }

// Index of an AP coefficient dominating all others, or -1.
int dominant_term(const GSymbol& a) {
  double total = 0.0;
  for (const auto& t : a.ap()) total += std::abs(t.coeff);
  for (std::size_t j = 0; j < a.ap().size(); ++j)
    if (std::abs(a.ap()[j].coeff) > total - std::abs(a.ap()[j].coeff)) return static_cast<int>(j);
  return -1;
}

// Lower bound for |b| of an AP polynomial b: exact under a dominant term,
// sampled otherwise.
double ap_lower_bound(const GSymbol& b) {
  if (b.ap().empty()) return 0.0;
  const int j0 = dominant_term(b);
  if (j0 >= 0) {
    double rest = 0.0;
    for (std::size_t j = 0; j < b.ap().size(); ++j)
      if (static_cast<int>(j) != j0) rest += std::abs(b.ap()[j].coeff);
    return std::abs(b.ap()[j0].coeff) - rest;
  }
  double m = INFINITY;
  for (double t = -200.0; t <= 200.0; t += 0.01) m = std::min(m, std::abs(b(t)));
  return m;
}

double golden_min(const GSymbol& a, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = std::abs(a(x1)), f2 = std::abs(a(x2));
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = std::abs(a(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = std::abs(a(x2));
    }
  }
  return std::min(f1, f2);
}

}  // namespace

bool is_invertible(const GSymbol& a, InvertibilityEvidence* evidence) {
  constexpr double L = 200.0, step = 0.01;
  const int n = static_cast<int>(std::lround(2 * L / step)) + 1;
  std::vector<double> vals(n);
  double var = 0.0;
  for (int k = 0; k < n; ++k) {
    vals[k] = std::abs(a(-L + k * step));
    if (k > 0) var = std::max(var, std::abs(vals[k] - vals[k - 1]));
  }
  double refined = *std::min_element(vals.begin(), vals.end());
  for (int k = 1; k + 1 < n; ++k)
    if (vals[k] < vals[k - 1] && vals[k] <= vals[k + 1])
      refined = std::min(refined, golden_min(a, -L + (k - 1) * step, -L + (k + 1) * step));
  const double grid_err = 0.5 * var;
  const double tail = ap_lower_bound(ap_part(a)) - l0_tail_bound(a, L);
  if (evidence) *evidence = {refined, grid_err, tail};
  if (refined < 1e-10 || a.ap().empty()) return false;
  const double m = std::min(refined, tail);
  if (m > 2.0 * grid_err && m > 1e-10) return true;
  throw Error(ErrorCode::inconclusive, "sampled minimum " + std::to_string(refined) +
                                           " is within the uncertainty band " +
                                           std::to_string(2.0 * grid_err) + " (tail bound " +
                                           std::to_string(tail) + ")");
}

namespace {

// Unwrapped argument increment of f over [lo, hi], refining the step until
// successive phase jumps stay below pi/4.
template <class F>
double unwrap(const F& f, double lo, double hi, double step) {
  double total = 0.0;
  double t = lo;
  cplx prev = f(t);
  while (t < hi) {
    double h = std::min(step, hi - t);
    cplx next = f(t + h);
    double d = std::arg(next / prev);
    int refine = 0;
    while (std::abs(d) > std::numbers::pi / 4 && refine < 30) {
      h *= 0.5;
      next = f(t + h);
      d = std::arg(next / prev);
      ++refine;
    }
    total += d;
    t += h;
    prev = next;
  }
  return total;
}

}  // namespace

double nu(const GSymbol& a) {
  if (a.ap().empty()) throw Error(ErrorCode::mean_motion_unresolved, "AP part vanishes");
  const int j0 = dominant_term(a);
  if (j0 >= 0) return a.ap()[j0].freq;
  const GSymbol b = ap_part(a);
  double fmax = 0.0;
  for (const auto& t : b.ap()) fmax = std::max(fmax, std::abs(t.freq));
  const double step = std::min(0.01, 0.2 / std::max(fmax, 1e-12));
  const double lb = ap_lower_bound(b);
  if (!(lb > 1e-8))
    throw Error(ErrorCode::mean_motion_unresolved, "AP part is not bounded away from zero");
  const double s1 = unwrap(b, -1e3, 1e3, step) / 2e3;
  const double s2 = unwrap(b, -1e4, 1e4, step) / 2e4;
  // bounded phase deviation gives O(1/L) error, 2*pi/2e3 at worst
  if (std::abs(s1 - s2) > 5e-3)
    throw Error(ErrorCode::mean_motion_unresolved,
                "mean slopes " + std::to_string(s1) + " and " + std::to_string(s2) + " disagree");
  return s2;
}

int winding_n(const GSymbol& a) {
  double shift = 0.0;
  if (a.is_monomial_times_rational(&shift)) {
    if (a.ap().empty())
      throw Error(ErrorCode::not_invertible, "symbol without AP part vanishes at infinity");
    Poly num, den;
    a.as_rational(nullptr).fraction(&num, &den);
    int n = 0;
    for (const auto& z : poly_roots(num)) {
      if (std::abs(z.imag()) < 1e-9 * std::max(1.0, std::abs(z)))
        throw Error(ErrorCode::not_invertible,
                    "symbol vanishes on the real axis near t = " + std::to_string(z.real()));
      if (z.imag() > 0) ++n;
    }
    for (const auto& p : poly_roots(den))
      if (p.imag() > 0) --n;
    return n;
  }
  const GSymbol b = ap_part(a);
  const double lb = ap_lower_bound(b);
  if (!(lb > 1e-8)) throw Error(ErrorCode::winding_unresolved, "AP part is not invertible");
  double L1 = 50.0;
  while (l0_tail_bound(a, L1) / lb >= 0.5 && L1 < 1e6) L1 *= 2.0;
  GSymbol k = a - b;
  auto f = [&](double t) { return 1.0 + k(t) / b(t); };
  double fmax = 0.0;
  for (const auto& t : a.ap()) fmax = std::max(fmax, std::abs(t.freq));
  for (const auto& t : a.l0()) fmax = std::max(fmax, std::abs(t.shift));
  const double step = std::min(0.01, 0.2 / std::max(fmax, 1e-12));
  double total = unwrap(f, -L1, L1, step);
  total += -std::arg(f(L1)) + std::arg(f(-L1));
  const double turns = total / (2 * std::numbers::pi);
  const double r = std::round(turns);
  if (std::abs(turns - r) > 1e-3)
    throw Error(ErrorCode::winding_unresolved,
                "phase increment " + std::to_string(turns) + " turns is not an integer");
  return static_cast<int>(r);
}

bool is_matching(const GSymbol& g) {
  if (g.is_zero()) return false;
  const GSymbol p = g * g.tilde();
  cplx c;
  if (p.is_constant(&c) && std::abs(c - 1.0) < 1e-12) return true;
  double dev = 0.0;
  for (double t : sample_points()) dev = std::max(dev, std::abs(g(t) * g(-t) - 1.0));
  for (int k = 0; k <= 2000; ++k) {
    const double t = -100.0 + 0.1 * k;
    dev = std::max(dev, std::abs(g(t) * g(-t) - 1.0));
  }
  return dev < 1e-10;
}

int xi(const GSymbol& g) {
  if (!is_matching(g)) throw Error(ErrorCode::not_matching, "g * tilde(g) != 1");
  const double v = nu(g);
  if (std::abs(v) > 1e-9)
    throw Error(ErrorCode::out_of_scope, "xi requires nu(g) = 0, got " + std::to_string(v));
  const int n = winding_n(g);
  const cplx x = (n % 2 == 0 ? 1.0 : -1.0) * g(0.0);
  if (std::abs(x - 1.0) < 1e-8) return 1;
  if (std::abs(x + 1.0) < 1e-8) return -1;
  throw Error(ErrorCode::xi_not_unimodular,
              "(-1)^n g(0) = (" + std::to_string(x.real()) + ", " + std::to_string(x.imag()) + ")");
}

bool is_plus(const GSymbol& a) {
  for (const auto& t : a.ap())
    if (t.freq < 0.0) return false;
  for (const auto& l : a.l0()) {
    if (l.shift < 0.0) return false;
    for (const auto& term : l.rational.terms())
      if (!(term.pole.imag() < 0.0)) return false;
  }
  return true;
}

bool is_minus(const GSymbol& a) { return is_plus(a.tilde()); }

double norm_estimate(const GSymbol& a) {
  double s = 0.0;
  for (const auto& t : a.ap()) s += std::abs(t.coeff);
  const TimeKernel k = time_kernel(a);
  if (k.empty()) return s;
  double lo = 0.0, hi = 0.0, rate = INFINITY;
  for (const auto& p : k.pieces) {
    lo = std::min(lo, p.shift);
    hi = std::max(hi, p.shift);
    rate = std::min(rate, std::abs(p.exponent.real()));
  }
  const double span = 40.0 / rate;
  lo -= span;
  hi += span;
  // composite Simpson on |k|
  const int m = 40000;
  const double h = (hi - lo) / m;
  double acc = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += w * std::abs(k(lo + j * h));
  }
  return s + acc * h / 3.0;
}

}  // namespace whh
