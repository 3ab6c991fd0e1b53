#include "whh/io/serialize.hpp"

#include "whh/dsl/dsl.hpp"
#include "whh/error.hpp"

namespace whh::io {

json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::io_error, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const GSymbol& a) {
  json out;
  json ap = json::array();
  for (const auto& t : a.ap()) {
    json e;
    e["freq"] = t.freq;
    e["re"] = t.coeff.real();
    e["im"] = t.coeff.imag();
    ap.push_back(std::move(e));
  }
  json l0 = json::array();
  for (const auto& t : a.l0()) {
    json e;
    e["shift"] = t.shift;
    json num = json::array(), den = json::array();
    for (cplx c : t.rational.numerator()) num.push_back(complex_pair(c));
    for (cplx c : t.rational.denominator()) den.push_back(complex_pair(c));
    e["num"] = std::move(num);
    e["den"] = std::move(den);
    l0.push_back(std::move(e));
  }
  out["ap"] = std::move(ap);
  out["l0"] = std::move(l0);
  return out;
}

GSymbol symbol_from_json(const json& j) {
  try {
    std::vector<APTerm> ap;
    for (const auto& e : j.at("ap"))
      ap.push_back({e.at("freq").get<double>(), {e.at("re").get<double>(), e.at("im").get<double>()}});
    std::vector<L0Term> l0;
    for (const auto& e : j.at("l0")) {
      Poly num, den;
      for (const auto& c : e.at("num")) num.push_back(complex_from(c));
      for (const auto& c : e.at("den")) den.push_back(complex_from(c));
      poly_trim(num);
      poly_trim(den);
      if (den.empty()) throw Error(ErrorCode::io_error, "zero denominator");
      if (num.empty()) continue;
      if (poly_degree(num) >= poly_degree(den))
        throw Error(ErrorCode::improper_rational, "L0 term must be strictly proper");
      Poly quotient;
      RationalPart r = partial_fractions(num.back() / den.back(), poly_roots(num), poly_roots(den), &quotient);
      l0.push_back({e.at("shift").get<double>(), std::move(r)});
    }
    return GSymbol::from_parts(std::move(ap), std::move(l0));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::io_error, std::string("malformed symbol JSON: ") + e.what());
  }
}

json to_json(const WHFactorization& f) {
  json out;
  out["g_minus"] = to_json(f.g_minus);
  out["g_minus_text"] = dsl::format(f.g_minus);
  out["nu"] = f.nu;
  out["n"] = f.n;
  out["g_plus"] = to_json(f.g_plus);
  out["g_plus_text"] = dsl::format(f.g_plus);
  return out;
}

json to_json(const OperatorRecipe& r) {
  json out = json::array();
  for (const auto& s : r.factors) out.push_back(dsl::format(s));
  return out;
}

}  // namespace whh::io
