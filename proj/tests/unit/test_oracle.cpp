#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "whh/dsl/dsl.hpp"
#include "whh/error.hpp"
#include "whh/oracle/estimate.hpp"

using namespace whh;
using namespace whh::oracle;

namespace {

GSymbol sym(const char* s) { return dsl::parse_symbol(s); }

Grid grid(double T, double h) {
  Grid g;
  g.T = T;
  g.h = h;
  return g;
}

Vector random_interior(std::mt19937& rng, const Grid& g) {
  std::normal_distribution<double> n;
  Vector v = Vector::Zero(g.N());
  for (int i = 0; i < g.N() / 2; ++i) v[i] = cplx(n(rng), n(rng)) * std::exp(-0.1 * g.node(i));
  return v;
}

Vector random_full(std::mt19937& rng, const Grid& g) {
  std::normal_distribution<double> n;
  Vector v(2 * g.N());
  for (int p = 0; p < 2 * g.N(); ++p) {
    const double t = (p - g.N() + 0.5) * g.h;
    v[p] = cplx(n(rng), n(rng)) * (std::abs(t) < g.T / 2 ? 1.0 : 0.0);
  }
  return v;
}

}  // namespace

TEST_CASE("constant symbols") {
  const Grid g = grid(5.0, 0.1);
  const auto W1 = wh_matrix(GSymbol::constant(1.0), g);
  CHECK((W1.matrix - Matrix::Identity(g.N(), g.N())).norm() < 1e-14);
  CHECK(hankel_matrix(GSymbol::constant(1.0), g).matrix.norm() < 1e-14);
}

TEST_CASE("chi coefficients") {
  // chi(t(z)) = -(z - w)/(1 - w z) with w = (2 - h)/(2 + h): a_0 = -w, a_m = (1 - w^2) w^{m-1}
  // sign: chi(0) = -1 at z = 1 gives -(1 - w)/(1 - w) = -1.
  const Grid g = grid(5.0, 0.1);
  const double w = (2 - g.h) / (2 + g.h);
  const DiscreteSymbol d(GSymbol::chi(), g, 60);
  CHECK(std::abs(d[0] - cplx(w)) < 1e-13);
  for (int m = 1; m < 40; ++m) CHECK(std::abs(d[m] - (w * w - 1.0) * std::pow(w, m - 1)) < 1e-13);
  for (int m = -40; m < 0; ++m) CHECK(std::abs(d[m]) < 1e-13);
}

TEST_CASE("scalar kernel dimensions of chi powers") {
  const Grid g = grid(25.0, 0.1);
  const auto ki = kernel_estimate(OpSpec::wh(GSymbol::chi(-1)), g);
  CHECK(ki.dim == 1);
  CHECK(ki.stable);
  const auto kc = kernel_estimate(OpSpec::wh(GSymbol::chi()), g);
  CHECK(kc.dim == 0);
  const auto cc = coker_estimate(OpSpec::wh(GSymbol::chi()), g);
  CHECK(cc.dim == 1);
  CHECK(kernel_estimate(OpSpec::wh(GSymbol::chi(-2)), g).dim == 2);
  CHECK(coker_estimate(OpSpec::wh(GSymbol::chi(-2)), g).dim == 0);
  // singular value gap
  const auto& s = ki.singular_values;
  CHECK(s.back() < 1e-10 * s.front());
  CHECK(s[s.size() - 2] > 1e-2 * s.front());
}

TEST_CASE("kernel vector of W(chi^-1) converges to e^{-t}") {
  double prev = 1.0;
  for (double h : {0.1, 0.05, 0.025}) {
    const Grid g = grid(25.0, h);
    EstimateOptions o;
    o.stability = false;
    const auto k = kernel_estimate(OpSpec::wh(GSymbol::chi(-1)), g, o);
    REQUIRE(k.dim == 1);
    Vector v = k.basis.col(0);
    Vector e = sample(g, [](double t) { return std::exp(-t); });
    e /= e.norm();
    v *= std::conj(v.dot(e)) / std::abs(v.dot(e));
    v = v * (e.dot(v) / std::abs(e.dot(v))).real();
    const cplx phase = e.dot(v) / std::abs(e.dot(v));
    const double err = (v / phase - e).norm();
    CHECK(err < 1e-3);
    if (h < 0.1) CHECK(err / prev <= 0.5);
    prev = err;
  }
}

TEST_CASE("flip identities") {
  std::mt19937 rng(2);
  const Grid g = grid(10.0, 0.1);
  const Vector v = random_full(rng, g);
  CHECK((full::apply_J(full::apply_J(v)) - v).norm() == 0.0);
  CHECK((full::apply_J(full::apply_Q(v)) - full::apply_P(full::apply_J(v))).norm() == 0.0);
  CHECK((full::apply_J(full::apply_P(v)) - full::apply_Q(full::apply_J(v))).norm() == 0.0);
  const GSymbol a = sym("2 + e(1)*(t-2i)/((t+3i)*(t-1i)) + 0.5*e(-0.5)");
  const int L = default_bandwidth(g);
  const DiscreteSymbol da(a, g, L), dat(a.tilde(), g, L);
  const Vector lhs = full::apply_J(full::apply_W0(da, full::apply_J(v)));
  const Vector rhs = full::apply_W0(dat, v);
  // compare away from the window edge
  const int N = g.N();
  CHECK((lhs - rhs).segment(N / 2, N).norm() < 1e-8 * v.norm());
}

TEST_CASE("Hankel relation H(chi) W(chi) = 0 and product identity") {
  std::mt19937 rng(4);
  const Grid g = grid(20.0, 0.1);
  const int L = default_bandwidth(g), N = g.N();
  const Vector x = random_interior(rng, g);
  const DiscreteSymbol c(GSymbol::chi(), g, L);
  const Vector hw = hankel_apply(c, toeplitz_apply(c, x, N), N);
  CHECK(hw.norm() < 1e-6 * x.norm());

  const GSymbol a = sym("1 + (0.5+1i)/(t+2i) + e(1)*(2)/(t-1i)");
  const GSymbol b = sym("chi - 0.3/(t-3i)^2 + 0.2*e(-1)");
  const DiscreteSymbol da(a, g, L), db(b, g, L), dab(a * b, g, L), dbt(b.tilde(), g, L);
  const Vector lhs = toeplitz_apply(dab, x, N);
  const Vector rhs = toeplitz_apply(da, toeplitz_apply(db, x, N), N) + hankel_apply(da, hankel_apply(dbt, x, N), N);
  CHECK((lhs - rhs).head(N / 2).norm() < 1e-5 * x.norm());
}

TEST_CASE("recipes") {
  std::mt19937 rng(8);
  const Grid g = grid(20.0, 0.1);
  const Vector x = random_interior(rng, g);
  CHECK((apply_recipe({}, x, g) - x).norm() == 0.0);
  const OperatorRecipe r = one_sided_inverse_recipe(factorize(GSymbol::chi(-1)), Side::right);
  const Vector y = apply_recipe({{GSymbol::chi(-1)}}, apply_recipe(r, x, g), g);
  CHECK((y - x).head(g.N() / 2).norm() < 1e-6 * x.norm());
  const GSymbol s = sym("chi^-1*(t+2i)*(t-0.5i)/((t-3i)*(t+1.5i))");
  const auto f = factorize(s);
  REQUIRE(f.n == -1);
  const Vector z = apply_recipe({{s}}, apply_recipe(one_sided_inverse_recipe(f, Side::right), x, g), g);
  CHECK((z - x).head(g.N() / 2).norm() < 1e-5 * x.norm());
}

TEST_CASE("nystrom scheme agrees on dimensions") {
  Grid g = grid(25.0, 0.05);
  g.scheme = Scheme::nystrom;
  EstimateOptions o;
  o.stability = false;
  CHECK(kernel_estimate(OpSpec::wh(GSymbol::chi(-1)), g, o).dim == 1);
  CHECK(coker_estimate(OpSpec::wh(GSymbol::chi()), g, o).dim == 1);
}

TEST_CASE("shift commensurability") {
  Grid g = grid(5.0, 0.1);
  CHECK_NOTHROW(DiscreteSymbol(GSymbol::exp(1.0), g, 200));
  std::vector<std::string> warn;
  DiscreteSymbol(GSymbol::exp(1.005), g, 200, &warn);
  CHECK(warn.size() == 1);
  try {
    DiscreteSymbol(GSymbol::exp(1.05), g, 200);
    FAIL("expected ShiftNotCommensurate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::shift_not_commensurate);
  }
  g.T = 5.05;
  CHECK_THROWS_AS(g.validate(), Error);
}
