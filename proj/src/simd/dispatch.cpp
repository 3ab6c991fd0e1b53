#include <atomic>

#include "whh/simd/kernels.hpp"

namespace whh::simd {

namespace {

Isa probe() {
#if defined(__x86_64__) || defined(__i386__)
  if (avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{probe()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

cplx dotu(std::span<const cplx> a, std::span<const cplx> b) {
  return active_isa() == Isa::avx2 ? avx2::dotu(a, b) : scalar::dotu(a, b);
}

cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
  return active_isa() == Isa::avx2 ? avx2::dotc(a, b) : scalar::dotc(a, b);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  if (active_isa() == Isa::avx2)
    avx2::axpy(alpha, x, y);
  else
    scalar::axpy(alpha, x, y);
}

void pole_terms(std::span<const double> t, cplx pole, std::span<const cplx> coeffs,
                std::span<cplx> out) {
  if (active_isa() == Isa::avx2)
    avx2::pole_terms(t, pole, coeffs, out);
  else
    scalar::pole_terms(t, pole, coeffs, out);
}

}  // namespace whh::simd
