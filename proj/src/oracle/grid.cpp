#include "whh/oracle/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "whh/error.hpp"
#include "whh/simd/kernels.hpp"

namespace whh::oracle {

namespace {

std::mutex fftw_mutex;  // planner is not re-entrant

int next_pow2(long n) {
  long m = 64;
  while (m < n) m <<= 1;
  return static_cast<int>(m);
}

// Coefficients r_k, |k| <= Lc, of R(t(z)) with t = (2/h) tan(theta/2).
std::vector<cplx> rational_coeffs(const RationalPart& r, double h, int Lc) {
  double lrho = INFINITY;
  for (const auto& pt : r.terms()) {
    const cplx w = cplx(0.0, 0.5 * h) * pt.pole;
    const cplx z = (1.0 + w) / (1.0 - w);
    lrho = std::min(lrho, std::abs(std::log(std::abs(z))));
  }
  lrho = std::max(lrho, 1e-7);
  const int M = next_pow2(2L * Lc + static_cast<long>(std::ceil(39.0 / lrho)) + 16);
  if (M > (1 << 26)) throw Error(ErrorCode::out_of_scope, "pole too close to the real axis for the grid");

  std::vector<double> t(static_cast<std::size_t>(M));
  for (int l = 0; l < M; ++l) t[l] = (2.0 / h) * std::tan(M_PI * l / M);
  t[M / 2] = 0.0;  // placeholder, value forced below
  std::vector<cplx> samples(static_cast<std::size_t>(M), cplx{});
  for (const auto& pt : r.terms()) simd::pole_terms(t, pt.pole, pt.coeffs, samples);
  samples[M / 2] = 0.0;  // R vanishes at infinity

  std::vector<cplx> out(static_cast<std::size_t>(M));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_mutex);
    plan = fftw_plan_dft_1d(M, reinterpret_cast<fftw_complex*>(samples.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_mutex);
    fftw_destroy_plan(plan);
  }
  std::vector<cplx> c(static_cast<std::size_t>(2 * Lc + 1));
  for (int k = -Lc; k <= Lc; ++k) c[k + Lc] = out[static_cast<std::size_t>((k + M) % M)] / double(M);
  return c;
}

}  // namespace

std::string_view to_string(Scheme s) { return s == Scheme::cayley ? "cayley" : "nystrom"; }

int Grid::N() const { return static_cast<int>(std::lround(T / h)); }
int Grid::pad() const { return static_cast<int>(std::lround(pad_time / h)); }

Grid Grid::refined() const {
  Grid g = *this;
  g.h = 0.5 * h;
  g.T = 1.25 * T;
  // keep T/h integral
  g.T = std::round(g.T / g.h) * g.h;
  return g;
}

void Grid::validate() const {
  if (!(h > 0.0) || !(T > 0.0)) throw Error(ErrorCode::grid_mismatch, "grid needs T > 0 and h > 0");
  const double r = T / h;
  if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r))
    throw Error(ErrorCode::grid_mismatch, "T/h must be an integer");
  if (N() < 2) throw Error(ErrorCode::grid_mismatch, "grid has fewer than two nodes");
}

int default_bandwidth(const Grid& grid) { return 2 * (grid.N() + grid.pad()) + 8; }

long shift_index(double delta, const Grid& grid, std::vector<std::string>* warnings) {
  const double r = delta / grid.h;
  const double m = std::round(r);
  const double off = std::abs(delta - m * grid.h);
  if (off > 1e-9 * std::max(1.0, std::abs(delta))) {
    if (!grid.snap || off >= 0.1 * grid.h)
      throw Error(ErrorCode::shift_not_commensurate,
                  "shift " + std::to_string(delta) + " is not a multiple of h = " + std::to_string(grid.h));
    if (warnings) warnings->push_back("snapped shift " + std::to_string(delta) + " to " + std::to_string(m * grid.h));
  }
  return static_cast<long>(m);
}

DiscreteSymbol::DiscreteSymbol(const GSymbol& a, const Grid& grid, int L, std::vector<std::string>* warnings)
    : L_(L), fwd_(static_cast<std::size_t>(2 * L + 1)), rev_(static_cast<std::size_t>(2 * L + 1)) {
  auto add_at = [&](long m, cplx v) {
    if (m >= -L && m <= L) fwd_[static_cast<std::size_t>(m + L)] += v;
  };
  for (const auto& t : a.ap()) add_at(shift_index(t.freq, grid, warnings), t.coeff);

  if (grid.scheme == Scheme::cayley) {
    for (const auto& t : a.l0()) {
      const long m = shift_index(t.shift, grid, warnings);
      const int Lc = L + static_cast<int>(std::abs(m));
      const auto c = rational_coeffs(t.rational, grid.h, Lc);
      for (int k = -Lc; k <= Lc; ++k) add_at(k + m, c[k + Lc]);
    }
  } else {
    for (const auto& t : a.l0()) shift_index(t.shift, grid, warnings);
    const TimeKernel k = time_kernel(a);
    for (int m = -L; m <= L; ++m) fwd_[m + L] += grid.h * k(m * grid.h);
  }
  for (int k = 0; k <= 2 * L; ++k) rev_[k] = fwd_[2 * L - k];
}

Matrix toeplitz_section(const DiscreteSymbol& a, int rows, int cols) {
  Matrix M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = a[i - j];
  return M;
}

Matrix hankel_section(const DiscreteSymbol& b, int rows, int cols) {
  Matrix M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = b[i + j + 1];
  return M;
}

Vector toeplitz_apply(const DiscreteSymbol& a, const Vector& x, int rows) {
  const int cols = static_cast<int>(x.size()), L = a.L();
  if (L < std::max(rows, cols)) throw Error(ErrorCode::grid_mismatch, "bandwidth too small for section");
  Vector y(rows);
  const std::span<const cplx> xs(x.data(), static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i) y[i] = simd::dotu(a.rev().subspan(static_cast<std::size_t>(L - i), cols), xs);
  return y;
}

Vector hankel_apply(const DiscreteSymbol& b, const Vector& x, int rows) {
  const int cols = static_cast<int>(x.size()), L = b.L();
  if (L < rows + cols) throw Error(ErrorCode::grid_mismatch, "bandwidth too small for section");
  Vector y(rows);
  const std::span<const cplx> xs(x.data(), static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i)
    y[i] = simd::dotu(b.fwd().subspan(static_cast<std::size_t>(L + i + 1), cols), xs);
  return y;
}

DiscretizedOp wh_matrix(const GSymbol& a, const Grid& grid) {
  grid.validate();
  const int N = grid.N();
  return {toeplitz_section(DiscreteSymbol(a, grid, 2 * N + 2), N, N), "W(a)"};
}

DiscretizedOp hankel_matrix(const GSymbol& b, const Grid& grid) {
  grid.validate();
  const int N = grid.N();
  return {hankel_section(DiscreteSymbol(b, grid, 2 * N + 2), N, N), "H(b)"};
}

namespace full {

Vector embed(const Vector& half) {
  const auto N = half.size();
  Vector v = Vector::Zero(2 * N);
  v.tail(N) = half;
  return v;
}

Vector restrict_plus(const Vector& v) { return v.tail(v.size() / 2); }

Vector apply_W0(const DiscreteSymbol& a, const Vector& v) {
  return toeplitz_apply(a, v, static_cast<int>(v.size()));
}

Vector apply_J(const Vector& v) { return v.reverse(); }

Vector apply_P(const Vector& v) {
  Vector w = v;
  w.head(v.size() / 2).setZero();
  return w;
}

Vector apply_Q(const Vector& v) {
  Vector w = v;
  w.tail(v.size() / 2).setZero();
  return w;
}

}  // namespace full

}  // namespace whh::oracle
