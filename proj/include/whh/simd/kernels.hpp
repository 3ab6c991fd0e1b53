#pragma once

// Complex inner-loop kernels used by the discretized operators.
//
// Every kernel has a portable scalar reference in `whh::simd::scalar` and an
// AVX2/FMA variant in `whh::simd::avx2`. The unqualified entry points dispatch
// once, at first use, to the best variant the running CPU supports.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace whh::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best instruction set supported by this CPU (and compiled in).
Isa detected_isa();

/// Instruction set the dispatching entry points currently use.
Isa active_isa();

/// Overrides dispatch. Selecting an unsupported ISA falls back to scalar.
void set_active_isa(Isa isa);

/// Sum of a[k] * b[k].
cplx dotu(std::span<const cplx> a, std::span<const cplx> b);
/// Sum of conj(a[k]) * b[k].
cplx dotc(std::span<const cplx> a, std::span<const cplx> b);
/// y += alpha * x.
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
/// out[i] += sum_k coeffs[k] / (t[i] - pole)^(k+1) for real sample points t.
void pole_terms(std::span<const double> t, cplx pole, std::span<const cplx> coeffs,
                std::span<cplx> out);

namespace scalar {
cplx dotu(std::span<const cplx> a, std::span<const cplx> b);
cplx dotc(std::span<const cplx> a, std::span<const cplx> b);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void pole_terms(std::span<const double> t, cplx pole, std::span<const cplx> coeffs,
                std::span<cplx> out);
}  // namespace scalar

namespace avx2 {
bool compiled();
cplx dotu(std::span<const cplx> a, std::span<const cplx> b);
cplx dotc(std::span<const cplx> a, std::span<const cplx> b);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void pole_terms(std::span<const double> t, cplx pole, std::span<const cplx> coeffs,
                std::span<cplx> out);
}  // namespace avx2

}  // namespace whh::simd
