#include <cmath>

#include "doctest.h"
#include "whh/dsl/dsl.hpp"
#include "whh/error.hpp"
#include "whh/kernel/structure.hpp"

using namespace whh;
using namespace whh::kernel;

namespace {

GSymbol sym(const char* s) { return dsl::parse_symbol(s); }

Grid grid(double T = 25.0, double h = 0.1) {
  Grid g;
  g.T = T;
  g.h = h;
  return g;
}

// ν = n = 0 matching symbol used throughout
const char* kQ = "(t-2i)*(t+i)/((t+2i)*(t-i))";

}  // namespace

TEST_CASE("psi0") {
  const Grid g = grid();
  const auto p = psi0(g);
  CHECK(std::abs(p.values[0] / std::sqrt(g.h) - std::exp(-0.5 * g.h)) < 1e-3);
  const Vector e = oracle::sample(g, [](double t) { return std::exp(-t); });
  CHECK((p.values - e).norm() / e.norm() < 1e-3);
  CHECK(wh_residual(GSymbol::chi(-1), p.values, g) < 1e-10);  // e^{-T} truncation
}

TEST_CASE("chi^-1 kernel relations on the grid") {
  const Grid g = grid();
  const auto psi = psi0(g, Support::full);
  const oracle::DiscreteSymbol ci(GSymbol::chi(-1), g, oracle::default_bandwidth(g));
  const Vector lhs = oracle::full::apply_W0(ci, psi.values);
  const Vector rhs = -oracle::full::apply_J(psi.values);
  CHECK((lhs - rhs).norm() < 1e-10 * psi.values.norm());
  const Vector p0 = psi0(g).values;
  CHECK((JQW0P(GSymbol::chi(-1), p0, g) + p0).norm() < 1e-12 * p0.norm());
}

TEST_CASE("kernel_basis_scalar") {
  const Grid g = grid();
  const auto k = kernel_basis_scalar(GSymbol::chi(-1), g);
  const Vector p0 = psi0(g).values;
  CHECK((k.values - p0 / p0.norm()).norm() < 1e-12);
  const GSymbol gg = sym("chi^-1*(t+i)*(t-2i)/((t-i)*(t+2i))");
  const auto k2 = kernel_basis_scalar(gg, g);
  CHECK(wh_residual(gg, k2.values, g) < 1e-6);
  // agrees with the SVD kernel
  oracle::EstimateOptions o;
  o.stability = false;
  const auto est = oracle::kernel_estimate(oracle::OpSpec::wh(gg), g, o);
  REQUIRE(est.dim == 1);
  CHECK(std::abs(std::abs(est.basis.col(0).dot(k2.values)) - 1.0) < 1e-8);
  try {
    kernel_basis_scalar(GSymbol::chi(), g);
    FAIL("expected WrongIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::wrong_index);
  }
}

TEST_CASE("projection_P") {
  const Grid g = grid();
  const Vector p0 = psi0(g).values;
  const auto pr = projection_P(GSymbol::chi(-1), p0, g);
  CHECK((pr.Pf + p0).norm() < 1e-12 * p0.norm());
  CHECK(pr.plus.norm() < 1e-12 * p0.norm());
  CHECK((pr.minus - p0).norm() < 1e-12 * p0.norm());
  CHECK_THROWS_AS(projection_P(GSymbol::chi(), p0, g), Error);

  for (const char* s : {"chi^-1*(t+i)*(t-2i)/((t-i)*(t+2i))", "-chi^-1*(t-3i)*(t+i)/((t+3i)*(t-i))", "chi^-2"}) {
    const GSymbol m = sym(s);
    oracle::EstimateOptions o;
    o.stability = false;
    const auto est = oracle::kernel_estimate(oracle::OpSpec::wh(m), g, o);
    REQUIRE(est.dim > 0);
    for (int j = 0; j < est.dim; ++j) {
      const Vector f = est.basis.col(j);
      const auto once = projection_P(m, f, g);
      const auto twice = projection_P(m, once.Pf, g);
      CHECK((twice.Pf - f).norm() < 1e-6);
    }
    const auto ranks = projection_ranks(m, est.basis, g);
    CHECK(ranks.involution_defect < 1e-6);
    CHECK(ranks.plus + ranks.minus == est.dim);
    if (est.dim == 1) {
      // image of P^+ is trivial iff xi = 1
      CHECK(ranks.plus == (xi(m) == 1 ? 0 : 1));
    }
  }
}

TEST_CASE("transport maps for (a, a chi)") {
  const Grid g = grid();
  const GSymbol a = sym(kQ);
  const MatchingPair pair = MatchingPair::make(a, a * GSymbol::chi());
  const Vector p0 = psi0(g).values;
  const Vector zero = Vector::Zero(g.N());
  const auto [Phi, Psi] = e1_map(pair, p0, zero, g);
  CHECK((Phi - p0).norm() < 1e-10 * p0.norm());
  CHECK(Psi.norm() < 1e-10 * p0.norm());
  const auto back = e2_map(pair, Phi, Psi, g);
  CHECK((back.first - p0).norm() < 1e-6 * p0.norm());
  CHECK(back.second.norm() < 1e-6 * p0.norm());
  const auto z = e1_map(pair, zero, zero, g);
  CHECK(z.first.norm() == 0.0);
  CHECK(z.second.norm() == 0.0);
}

TEST_CASE("phi_pm and the projection identity on a case-2 instance") {
  const Grid g = grid();
  const GSymbol a = sym("chi^-1*(t-2i)/(t+2i)*(t+3i)/(t-3i)");
  REQUIRE(winding_n(a) == -1);
  const MatchingPair pair = MatchingPair::make(a, a * GSymbol::chi());
  const SubordinatedPair sp = subordinated(pair);
  REQUIRE(sp.n_d.value() == -1);
  const auto s = kernel_basis_scalar(sp.d, g);
  for (int sign : {1, -1}) {
    const PhiResult r = phi_pm(pair, s.values, sign, g);
    CHECK(r.kernel_residual < 1e-5);
    CHECK(r.pm_identity_residual < 1e-5);
  }
  const PhiResult z = phi_pm(pair, Vector::Zero(g.N()), 1, g);
  CHECK(z.phi.norm() == 0.0);
}

TEST_CASE("kappa element") {
  const Grid g = grid();
  const KappaResult r = kappa_element(sym(kQ), g);
  CHECK(r.middle_term < 1e-8);
  CHECK(r.first_term_defect < 1e-6);
  CHECK(r.stable);
  try {
    kappa_element(GSymbol::chi(), g);
    FAIL("expected WrongCase");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::wrong_case);
  }
  // a = 1 is a case-3 instance: H(chi) psi0 = -psi0 is not in im W(chi)
  const KappaResult one = kappa_element(GSymbol::constant(1.0), g);
  CHECK_FALSE(one.in_image);
  CHECK(one.membership > 0.99);
}
