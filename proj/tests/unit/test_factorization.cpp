#include <algorithm>
#include <random>

#include "doctest.h"
#include "whh/dsl/dsl.hpp"
#include "whh/error.hpp"
#include "whh/factor/factorization.hpp"
#include "whh/io/serialize.hpp"

using namespace whh;

namespace {

constexpr cplx I{0.0, 1.0};

GSymbol sym(const char* s) { return dsl::parse_symbol(s); }

bool is_one(const GSymbol& g) { return approx_equal(g, GSymbol::constant(1.0), 1e-13); }

void check_invariants(const GSymbol& g, const WHFactorization& f) {
  CHECK(reconstruction_error(g, f) < 1e-10);
  CHECK(std::abs(f.g_minus(0.0) - 1.0) < 1e-13);
  CHECK(is_minus(f.g_minus));
  CHECK(is_minus(inverse(f.g_minus)));
  CHECK(is_plus(f.g_plus));
  CHECK(is_plus(inverse(f.g_plus)));
  CHECK(f.n == winding_n(g));
}

}  // namespace

TEST_CASE("factorize examples") {
  auto f = factorize(GSymbol::chi());
  CHECK(is_one(f.g_minus));
  CHECK(f.nu == 0.0);
  CHECK(f.n == 1);
  CHECK(is_one(f.g_plus));

  f = factorize(GSymbol::chi(-1));
  CHECK(is_one(f.g_minus));
  CHECK(f.n == -1);
  CHECK(is_one(f.g_plus));

  const GSymbol g = sym("(t-2i)/(t+3i)");
  f = factorize(g);
  CHECK(f.n == 1);
  CHECK(f.nu == 0.0);
  CHECK(approx_equal(f.g_minus, sym("(t-2i)/(2*(t-i))"), 1e-13));
  CHECK(approx_equal(f.g_plus, sym("2*(t+i)/(t+3i)"), 1e-13));
  check_invariants(g, f);

  f = factorize(GSymbol::exp(1.5, cplx(0.0, 2.0)) * GSymbol::chi(-2));
  CHECK(f.nu == 1.5);
  CHECK(f.n == -2);
  CHECK(std::abs(f.g_plus(0.3) - 2.0 * I) < 1e-13);
}

TEST_CASE("factorize errors") {
  CHECK_THROWS_WITH_AS(factorize(sym("3*e(1)+e(-1)")), doctest::Contains("AP"), Error);
  try {
    factorize(sym("3*e(1)+e(-1)"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_factorizable);
  }
  try {
    factorize(sym("1/(t+i)"));
    FAIL("expected NotInvertible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_invertible);
  }
}

TEST_CASE("random rational symbols factorize consistently") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 80; ++trial) {
    const int deg = 1 + trial % 4;
    std::vector<cplx> zeros, poles;
    for (int k = 0; k < deg; ++k) {
      auto off = [&] { return (u(rng) > 0 ? 1.0 : -1.0) * (0.3 + std::abs(u(rng))); };
      zeros.emplace_back(u(rng), off());
      poles.emplace_back(u(rng), off());
    }
    Poly quotient;
    const cplx scale(1.0 + 0.2 * u(rng), 0.3 * u(rng));
    const RationalPart r = partial_fractions(scale, zeros, poles, &quotient);
    RationalFunction fr{quotient, r};
    const double shift = 0.25 * (trial % 5 - 2);
    const GSymbol g = GSymbol::from_rational(fr) * GSymbol::exp(shift);
    const WHFactorization f = factorize(g);
    check_invariants(g, f);
    CHECK(f.nu == shift);
    // same symbol from shuffled pole order
    std::shuffle(zeros.begin(), zeros.end(), rng);
    std::shuffle(poles.begin(), poles.end(), rng);
    Poly q2;
    const RationalPart r2 = partial_fractions(scale, zeros, poles, &q2);
    const GSymbol g2 = GSymbol::from_rational(RationalFunction{q2, r2}) * GSymbol::exp(shift);
    const WHFactorization f2 = factorize(g2);
    CHECK(f2.n == f.n);
    CHECK(approx_equal(f2.g_minus, f.g_minus, 1e-10));
    CHECK(approx_equal(f2.g_plus, f.g_plus, 1e-10));
  }
}

TEST_CASE("matching factorization") {
  auto m = matching_factorization(GSymbol::chi(-1));
  CHECK(is_one(m.g_plus));
  CHECK(m.n == -1);
  CHECK(m.xi == 1);

  // g_-(0) = 1 pins g_- = 1, so g_+ carries the sign
  m = matching_factorization(GSymbol::constant(-1.0));
  CHECK(approx_equal(m.g_plus, GSymbol::constant(-1.0), 1e-14));
  CHECK(m.n == 0);
  CHECK(m.xi == -1);

  for (const char* s : {"(t-2i)*(t-i)/((t+2i)*(t+i))", "chi^2*(t-2i)/(t+2i)",
                        "-(t-2i)*(t+i)/((t+2i)*(t-i))", "(t-3i)*(t+0.5i)/((t+3i)*(t-0.5i))"}) {
    const GSymbol g = sym(s);
    m = matching_factorization(g);
    CHECK(m.xi == xi(g));
    CHECK(m.n == winding_n(g));
  }
  try {
    matching_factorization(sym("(t-2i)/(t+3i)"));
    FAIL("expected NotMatching");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_matching);
  }
}

TEST_CASE("one-sided inverse recipes") {
  auto r = one_sided_inverse_recipe(factorize(GSymbol::chi(-1)), Side::right);
  REQUIRE(r.factors.size() == 1);
  CHECK(approx_equal(r.factors[0], GSymbol::chi(), 1e-14));
  r = one_sided_inverse_recipe(factorize(GSymbol::chi()), Side::left);
  REQUIRE(r.factors.size() == 1);
  CHECK(approx_equal(r.factors[0], GSymbol::chi(-1), 1e-14));
  try {
    one_sided_inverse_recipe(factorize(GSymbol::chi()), Side::right);
    FAIL("expected WrongSide");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::wrong_side);
  }
  CHECK(one_sided_inverse_recipe(factorize(GSymbol::constant(1.0)), Side::left).factors.empty());
  r = one_sided_inverse_recipe(factorize(sym("(t+2i)/(t-3i)")), Side::right);
  CHECK(r.factors.size() == 3);
}

TEST_CASE("symbol json round trip") {
  for (const char* s : {"chi", "0", "2*e(3)", "chi^3 + e(-1)*(t-2i)/((t+3i)*(t-1i))",
                        "e(0.5)/(t+2i)^2 + 1"}) {
    const GSymbol a = sym(s);
    const auto j = io::to_json(a);
    const GSymbol b = io::symbol_from_json(j);
    CHECK_MESSAGE(approx_equal(a, b, 1e-12), s);
    CHECK(io::to_json(b).dump() == j.dump());
  }
  const auto j = io::to_json(GSymbol::chi());
  CHECK(j.dump() ==
        R"({"ap":[{"freq":0.0,"re":1.0,"im":0.0}],"l0":[{"shift":0.0,"num":[[0.0,-2.0]],"den":[[0.0,1.0],[1.0,0.0]]}]})");
}
