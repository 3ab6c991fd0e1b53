#include <charconv>
#include <cmath>

#include "whh/dsl/dsl.hpp"

namespace whh::dsl {

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_complex(cplx z) {
  const double re = z.real(), im = z.imag();
  if (im == 0.0) return format_real(re);
  std::string s;
  if (re != 0.0) s = format_real(re);
  if (re != 0.0 && im > 0.0) s += "+";
  s += format_real(im) + "i";
  return s;
}

namespace {

bool needs_parens(cplx z) { return z.imag() != 0.0 || z.real() < 0.0; }

std::string coeff(cplx z) { return needs_parens(z) ? "(" + format_complex(z) + ")" : format_complex(z); }

// "t-p" written with explicit signs on each component of -p
std::string linear(cplx p) {
  std::string s = "t";
  const double re = -p.real(), im = -p.imag();
  if (re != 0.0) s += (re > 0 ? "+" : "") + format_real(re);
  if (im != 0.0) s += (im > 0 ? "+" : "") + format_real(im) + "i";
  return s;
}

std::string pole_sum(const RationalPart& r) {
  std::string s;
  for (const auto& term : r.terms()) {
    for (int k = 0; k < term.order(); ++k) {
      if (term.coeffs[k] == 0.0) continue;
      if (!s.empty()) s += " + ";
      s += coeff(term.coeffs[k]);
      if (k == 0)
        s += "/(" + linear(term.pole) + ")";
      else
        s += "*(" + linear(term.pole) + ")^-" + std::to_string(k + 1);
    }
  }
  return s;
}

}  // namespace

std::string format(const GSymbol& a) {
  std::string out;
  auto append = [&out](const std::string& piece) {
    if (!out.empty()) out += " + ";
    out += piece;
  };
  for (const auto& t : a.ap()) {
    if (t.freq == 0.0)
      append(needs_parens(t.coeff) && t.coeff.real() != 0.0 && t.coeff.imag() != 0.0
                 ? "(" + format_complex(t.coeff) + ")"
                 : format_complex(t.coeff));
    else if (t.coeff == 1.0)
      append("e(" + format_real(t.freq) + ")");
    else
      append(coeff(t.coeff) + "*e(" + format_real(t.freq) + ")");
  }
  for (const auto& l : a.l0()) {
    if (l.shift == 0.0)
      append(pole_sum(l.rational));
    else
      append("e(" + format_real(l.shift) + ")*(" + pole_sum(l.rational) + ")");
  }
  return out.empty() ? "0" : out;
}

}  // namespace whh::dsl
