#include "whh/simd/kernels.hpp"

#include <cassert>

namespace whh::simd::scalar {

cplx dotu(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
  }
  return {re, im};
}

cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
  }
  return {re, im};
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  assert(x.size() == y.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

void pole_terms(std::span<const double> t, cplx pole, std::span<const cplx> coeffs,
                std::span<cplx> out) {
  assert(t.size() == out.size());
  if (coeffs.empty()) return;
  const std::size_t m = coeffs.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dr = t[i] - pole.real();
    const double di = -pole.imag();
    const double inv = 1.0 / (dr * dr + di * di);
    const cplx w{dr * inv, -di * inv};
    cplx acc = coeffs[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) acc = acc * w + coeffs[k];
    out[i] += acc * w;
  }
}

}  // namespace whh::simd::scalar
