// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "whh/simd/kernels.hpp"

#include <cassert>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define WHH_HAVE_AVX2 1
#else
#define WHH_HAVE_AVX2 0
#endif

namespace whh::simd::avx2 {

#if WHH_HAVE_AVX2

namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// Sum of the two complex lanes of v.
inline cplx hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double r[2];
  _mm_store_pd(r, s);
  return {r[0], r[1]};
}

}  // namespace

bool compiled() { return true; }

cplx dotu(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const double* pa = as_doubles(a.data());
  const double* pb = as_doubles(b.data());
  __m256d acc_re = _mm256_setzero_pd();  // a * dup(b.re)
  __m256d acc_im = _mm256_setzero_pd();  // swap(a) * dup(b.im)
  __m256d acc_re2 = _mm256_setzero_pd();
  __m256d acc_im2 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * k);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * k);
    const __m256d va2 = _mm256_loadu_pd(pa + 2 * k + 4);
    const __m256d vb2 = _mm256_loadu_pd(pb + 2 * k + 4);
    acc_re = _mm256_fmadd_pd(va, _mm256_movedup_pd(vb), acc_re);
    acc_im = _mm256_fmadd_pd(_mm256_permute_pd(va, 0x5), _mm256_permute_pd(vb, 0xF), acc_im);
    acc_re2 = _mm256_fmadd_pd(va2, _mm256_movedup_pd(vb2), acc_re2);
    acc_im2 = _mm256_fmadd_pd(_mm256_permute_pd(va2, 0x5), _mm256_permute_pd(vb2, 0xF), acc_im2);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * k);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * k);
    acc_re = _mm256_fmadd_pd(va, _mm256_movedup_pd(vb), acc_re);
    acc_im = _mm256_fmadd_pd(_mm256_permute_pd(va, 0x5), _mm256_permute_pd(vb, 0xF), acc_im);
  }
  acc_re = _mm256_add_pd(acc_re, acc_re2);
  acc_im = _mm256_add_pd(acc_im, acc_im2);
  // even lanes: re*re - im*im, odd lanes: im*re + re*im
  cplx sum = hsum(_mm256_addsub_pd(acc_re, acc_im));
  for (; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const double* pa = as_doubles(a.data());
  const double* pb = as_doubles(b.data());
  __m256d acc1 = _mm256_setzero_pd();  // b * dup(a.re)
  __m256d acc2 = _mm256_setzero_pd();  // swap(b) * dup(a.im)
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * k);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * k);
    acc1 = _mm256_fmadd_pd(vb, _mm256_movedup_pd(va), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_permute_pd(vb, 0x5), _mm256_permute_pd(va, 0xF), acc2);
  }
  // even lanes: acc1 + acc2, odd lanes: acc1 - acc2
  const __m256d neg = _mm256_sub_pd(_mm256_setzero_pd(), acc2);
  cplx sum = hsum(_mm256_addsub_pd(acc1, neg));
  for (; k < n; ++k) sum += std::conj(a[k]) * b[k];
  return sum;
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const double* px = as_doubles(x.data());
  double* py = as_doubles(y.data());
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * k);
    const __m256d vy = _mm256_loadu_pd(py + 2 * k);
    const __m256d prod = _mm256_fmaddsub_pd(vx, ar, _mm256_mul_pd(_mm256_permute_pd(vx, 0x5), ai));
    _mm256_storeu_pd(py + 2 * k, _mm256_add_pd(vy, prod));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

void pole_terms(std::span<const double> t, cplx pole, std::span<const cplx> coeffs,
                std::span<cplx> out) {
  assert(t.size() == out.size());
  if (coeffs.empty()) return;
  const std::size_t n = t.size();
  const std::size_t m = coeffs.size();
  const __m256d pr = _mm256_set1_pd(pole.real());
  const __m256d di = _mm256_set1_pd(-pole.imag());
  const __m256d one = _mm256_set1_pd(1.0);
  double* po = as_doubles(out.data());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // structure-of-arrays over four sample points
    const __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(t.data() + i), pr);
    const __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di)));
    const __m256d wr = _mm256_mul_pd(dr, inv);
    const __m256d wi = _mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), di), inv);
    __m256d accr = _mm256_set1_pd(coeffs[m - 1].real());
    __m256d acci = _mm256_set1_pd(coeffs[m - 1].imag());
    for (std::size_t k = m - 1; k-- > 0;) {
      const __m256d nr = _mm256_fmsub_pd(accr, wr, _mm256_mul_pd(acci, wi));
      const __m256d ni = _mm256_fmadd_pd(accr, wi, _mm256_mul_pd(acci, wr));
      accr = _mm256_add_pd(nr, _mm256_set1_pd(coeffs[k].real()));
      acci = _mm256_add_pd(ni, _mm256_set1_pd(coeffs[k].imag()));
    }
    const __m256d rr = _mm256_fmsub_pd(accr, wr, _mm256_mul_pd(acci, wi));
    const __m256d ri = _mm256_fmadd_pd(accr, wi, _mm256_mul_pd(acci, wr));
    const __m256d lo = _mm256_unpacklo_pd(rr, ri);  // r0 i0 r2 i2
    const __m256d hi = _mm256_unpackhi_pd(rr, ri);  // r1 i1 r3 i3
    const __m256d o01 = _mm256_permute2f128_pd(lo, hi, 0x20);
    const __m256d o23 = _mm256_permute2f128_pd(lo, hi, 0x31);
    _mm256_storeu_pd(po + 2 * i, _mm256_add_pd(_mm256_loadu_pd(po + 2 * i), o01));
    _mm256_storeu_pd(po + 2 * i + 4, _mm256_add_pd(_mm256_loadu_pd(po + 2 * i + 4), o23));
  }
  if (i < n) scalar::pole_terms(t.subspan(i), pole, coeffs, out.subspan(i));
}

#else

bool compiled() { return false; }
cplx dotu(std::span<const cplx> a, std::span<const cplx> b) { return scalar::dotu(a, b); }
cplx dotc(std::span<const cplx> a, std::span<const cplx> b) { return scalar::dotc(a, b); }
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) { scalar::axpy(alpha, x, y); }
void pole_terms(std::span<const double> t, cplx pole, std::span<const cplx> coeffs,
                std::span<cplx> out) {
  scalar::pole_terms(t, pole, coeffs, out);
}

#endif

}  // namespace whh::simd::avx2
