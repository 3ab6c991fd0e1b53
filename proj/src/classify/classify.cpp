#include "whh/classify/classify.hpp"

#include <array>
#include <cmath>

#include "whh/dsl/dsl.hpp"
#include "whh/error.hpp"

namespace whh {

std::string Dim::str() const {
  switch (kind) {
    case Kind::exact: return std::to_string(value);
    case Kind::at_least: return ">=" + std::to_string(value);
    case Kind::infinite: return "inf";
    case Kind::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::invertible: return "invertible";
    case Status::left_invertible: return "left-invertible";
    case Status::right_invertible: return "right-invertible";
    case Status::fredholm: return "fredholm";
    case Status::coburn_simonenko: return "coburn-simonenko";
    case Status::not_semi_fredholm: return "not-semi-fredholm";
    case Status::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

// Indices of a matching function as far as they are known.
struct Idx {
  std::optional<double> nu;
  std::optional<int> n;
  std::optional<int> xi;

  Idx conj() const {
    Idx r;
    if (nu) r.nu = -*nu;
    if (n) r.n = -*n;
    r.xi = xi;
    return r;
  }
  Idx neg() const {
    Idx r = *this;
    if (xi) r.xi = -*xi;
    return r;
  }
  bool fredholm() const { return nu && *nu == 0.0 && n; }
  /// dim ker W(g) > 0 for certain
  bool has_kernel() const { return nu && (*nu < 0.0 || (*nu == 0.0 && n && *n < 0)); }
  std::string str() const {
    std::string s = "nu=" + (nu ? dsl::format_real(*nu) : std::string("?"));
    s += ", n=" + (n ? std::to_string(*n) : std::string("?"));
    s += ", xi=" + (xi ? std::to_string(*xi) : std::string("?"));
    return s;
  }
};

// dim im P^+(g), dim im P^-(g) on ker W(g)
struct Split {
  Dim plus, minus;
  std::string why;
};

Split split(const Idx& g) {
  if (!g.nu) return {Dim::unknown(), Dim::unknown(), "nu unresolved"};
  if (*g.nu > 0.0) return {Dim::exact(0), Dim::exact(0), "ker W = 0 (nu > 0)"};
  if (*g.nu < 0.0) return {Dim::unknown(), Dim::unknown(), "ker W infinite (nu < 0), split unknown"};
  if (!g.n) return {Dim::unknown(), Dim::unknown(), "winding unresolved"};
  if (*g.n >= 0) return {Dim::exact(0), Dim::exact(0), "ker W = 0 (n >= 0)"};
  if (*g.n == -1 && g.xi) {
    const int p = *g.xi == 1 ? 0 : 1;
    return {Dim::exact(p), Dim::exact(1 - p), "one-dim kernel split by xi (n = -1, xi = " + std::to_string(*g.xi) + ")"};
  }
  return {Dim::unknown(), Dim::unknown(), "dim ker W = " + std::to_string(-*g.n) + ", split unknown"};
}

Dim plus_one(const Dim& d) {
  switch (d.kind) {
    case Dim::Kind::exact: return Dim::exact(d.value + 1);
    case Dim::Kind::at_least: return Dim::at_least(d.value + 1);
    case Dim::Kind::infinite: return d;
    case Dim::Kind::unknown: return Dim::at_least(1);
  }
  return d;
}

struct Pred {
  Dim dim;
  std::optional<std::array<Dim, 2>> cond;  // {if not contained, if contained}
  std::string cert;
};

struct KerRule {
  Pred plus, minus;
  bool ok = false;
  std::string reason;
};

// Kernel dimensions of W(a) +- H(b) from the indices of (c, d).
KerRule kernel_rule(Idx c, Idx d) {
  KerRule r;
  if (!c.nu || *c.nu != 0.0) {
    r.reason = "nu(c) != 0 or unresolved";
    return r;
  }
  if (!c.n || std::abs(*c.n) > 1) {
    r.reason = "|n(c)| > 1 or unresolved";
    return r;
  }
  if (!c.xi) {
    r.reason = "xi(c) undefined";
    return r;
  }
  const bool flip = *c.xi == -1;
  if (flip) {
    c = c.neg();
    d = d.neg();
  }
  const Split s = split(d);
  const std::string dtag = " with d: " + s.why;
  switch (*c.n) {
    case -1:
      r.plus = {plus_one(s.plus), {}, "kernel splitting [n(c)=-1, im P^-(c) = ker W(c)]" + dtag};
      r.minus = {s.minus, {}, "kernel splitting [n(c)=-1, im P^+(c) = 0]" + dtag};
      break;
    case 0:
      r.plus = {s.plus, {}, "kernel splitting [n(c)=0, W(c) invertible]" + dtag};
      r.minus = {s.minus, {}, "kernel splitting [n(c)=0, W(c) invertible]" + dtag};
      break;
    case 1: {
      const std::string red = "reduction W(a)+-H(b) = (W(a chi^-1)+-H(b chi))W(chi), n(c chi^-2)=-1";
      r.plus = {s.plus, {}, red + "; ker W(c chi^-2) meets im W(chi) trivially" + dtag};
      if (s.minus.is_zero())
        r.minus = {Dim::exact(0), {}, red + dtag};
      else if (s.minus.is_exact())
        r.minus = {s.minus, std::array<Dim, 2>{Dim::exact(s.minus.value - 1), s.minus}, red + "; membership in im W(chi) decides" + dtag};
      else
        r.minus = {Dim::unknown(), {}, red + dtag};
      break;
    }
  }
  if (flip) {
    std::swap(r.plus, r.minus);
    r.plus.cert = "xi(c)=-1 reduced via b -> -b; " + r.plus.cert;
    r.minus.cert = "xi(c)=-1 reduced via b -> -b; " + r.minus.cert;
  }
  r.ok = true;
  return r;
}

Status status_of(const Dim& ker, const Dim& coker) {
  if (ker.is_zero() && coker.is_zero()) return Status::invertible;
  if (ker.is_zero() && coker.positive()) return Status::left_invertible;
  if (coker.is_zero() && ker.positive()) return Status::right_invertible;
  if (ker.positive() && coker.positive()) return Status::fredholm;
  if (ker.is_zero() || coker.is_zero()) return Status::coburn_simonenko;
  return Status::unknown;
}

void finish(SideReport& s) {
  s.status = status_of(s.ker, s.coker);
  if (s.ker.is_exact() && s.coker.is_exact()) s.index = s.ker.value - s.coker.value;
  if (s.status == Status::fredholm && !s.index) s.status = Status::unknown;
}

// Exact dims the explicit families must produce: {ker+, coker+, ker-, coker-}; -1 = conditional
std::optional<std::array<int, 4>> case_table(const std::string& tag, const Idx& b) {
  if (tag == "1") return std::array<int, 4>{1, 1, 0, 0};
  if (tag == "2") return std::array<int, 4>{1, 0, 1, 0};
  if (tag == "3") return std::array<int, 4>{0, 0, -1, -1};
  if (tag == "4") return std::array<int, 4>{0, 1, 0, 1};
  if (tag == "5" && b.n && *b.n == 0) return std::array<int, 4>{0, 0, 0, 0};
  return std::nullopt;
}

Idx indices_of(const GSymbol& g) {
  Idx r;
  try {
    r.nu = nu(g);
    if (*r.nu == 0.0) {
      r.n = winding_n(g);
      if (is_matching(g)) r.xi = xi(g);
    }
  } catch (const Error&) {
  }
  return r;
}

std::string detect_case(const MatchingPair& p, const Idx& a_idx) {
  if (!a_idx.nu || *a_idx.nu != 0.0 || !a_idx.n) return "";
  const int n = *a_idx.n;
  cplx one;
  if (approx_equal(p.b, p.a * GSymbol::chi(), 1e-10) && (n == 0 || n == -1)) return n == 0 ? "1" : "2";
  if (approx_equal(p.b, p.a * GSymbol::chi(-1), 1e-10) && (n == 0 || n == 1)) return n == 0 ? "3" : "4";
  if (p.a.is_constant(&one) && std::abs(one - 1.0) < 1e-14 && is_matching(p.b)) return "5";
  if (approx_equal(p.b, p.a, 1e-10) || approx_equal(p.b, -p.a, 1e-10)) return "b=+-a";
  return "";
}

}  // namespace

SideReport scalar_wh_classify(const GSymbol& a) {
  SideReport s;
  bool inv = false;
  try {
    inv = is_invertible(a);
  } catch (const Error& e) {
    s.certificate = std::string("invertibility inconclusive: ") + e.what();
    return s;
  }
  if (!inv) {
    s.status = Status::not_semi_fredholm;
    s.certificate = "a not invertible in G, W(a) is not semi-Fredholm";
    return s;
  }
  const double v = nu(a);
  if (v > 0.0) {
    s.ker = Dim::exact(0);
    s.coker = Dim::infinite();
    s.certificate = "nu(a) > 0: W(a) left invertible";
  } else if (v < 0.0) {
    s.ker = Dim::infinite();
    s.coker = Dim::exact(0);
    s.certificate = "nu(a) < 0: W(a) right invertible";
  } else {
    const int n = winding_n(a);
    s.ker = Dim::exact(n < 0 ? -n : 0);
    s.coker = Dim::exact(n > 0 ? n : 0);
    s.certificate = "nu(a) = 0: Fredholm with index -n(a), n(a) = " + std::to_string(n);
  }
  finish(s);
  return s;
}

ClassificationReport classify(const MatchingPair& pair) {
  if (!matching_condition(pair.a, pair.b)) throw Error(ErrorCode::not_matching, "a * tilde(a) != b * tilde(b)");
  bool inv = false;
  try {
    inv = is_invertible(pair.a);
  } catch (const Error& e) {
    throw Error(ErrorCode::not_invertible, std::string("invertibility of a inconclusive: ") + e.what());
  }
  if (!inv) throw Error(ErrorCode::not_invertible, "a is not invertible in G");

  ClassificationReport rep;
  rep.sub = subordinated(pair);
  const Idx c{rep.sub.nu_c, rep.sub.n_c, rep.sub.xi_c};
  const Idx d{rep.sub.nu_d, rep.sub.n_d, rep.sub.xi_d};
  rep.reduced_sign = c.xi && *c.xi == -1;
  const Idx a_idx = indices_of(pair.a);
  rep.case_tag = detect_case(pair, a_idx);

  const KerRule kr = kernel_rule(c, d);
  // cokernels are kernels of the adjoint pair, whose subordinated pair is (conj d, conj c)
  const KerRule cr = kernel_rule(d.conj(), c.conj());
  if (!kr.ok) {
    rep.in_scope = false;
    rep.reason = "OutOfScope: " + kr.reason + " (" + c.str() + ")";
  }

  auto side = [&](const Pred& k, const Pred& q, bool kok, bool qok) {
    SideReport s;
    if (kok) s.ker = k.dim;
    if (qok) s.coker = q.dim;
    s.certificate = "ker: " + (kok ? k.cert : std::string("no rule")) + " | coker (adjoint pair): " +
                    (qok ? q.cert : std::string("no rule: ") + cr.reason);
    if (kok && k.cond) {
      Conditional cd;
      cd.condition = "kernel of the reduced minus operator lies in im W(chi)";
      cd.ker_if_false = (*k.cond)[0];
      cd.ker_if_true = (*k.cond)[1];
      s.conditional = cd;
    }
    return s;
  };
  rep.plus = side(kr.plus, cr.plus, kr.ok, cr.ok && !cr.plus.cond);
  rep.minus = side(kr.minus, cr.minus, kr.ok, cr.ok && !cr.minus.cond);
  if (cr.ok && cr.plus.cond && !rep.plus.conditional) rep.plus.coker = Dim::unknown();
  if (cr.ok && cr.minus.cond && !rep.minus.conditional) rep.minus.coker = Dim::unknown();

  // nontrivial ker W(d) forces trivial cokernels
  if (kr.ok && d.neg().has_kernel()) {
    const int nc = *c.n;
    const bool flip = rep.reduced_sign;
    SideReport& p = flip ? rep.minus : rep.plus;
    SideReport& m = flip ? rep.plus : rep.minus;
    if (nc == -1) {
      if (!p.coker.is_exact()) p.coker = Dim::exact(0);
      if (!m.coker.is_exact()) m.coker = Dim::exact(0);
      p.certificate += " | ker W(d) != 0 with n(c) = -1 gives coker = 0";
      m.certificate += " | ker W(d) != 0 with n(c) = -1 gives coker = 0";
    } else if (nc == 1) {
      if (!p.coker.is_exact()) p.coker = Dim::exact(0);
      p.certificate += " | ker W(d) != 0 with n(c) = 1 gives coker = 0";
    }
  }

  // index identity
  if (c.fredholm() && d.fredholm()) rep.index_check.rhs = -*c.n - *d.n;
  auto fill_by_index = [&](SideReport& target, const SideReport& other, Dim& tker, Dim& tcoker, const Dim& oker,
                           const Dim& ocoker) {
    (void)target;
    (void)other;
    if (!rep.index_check.rhs || !oker.is_exact() || !ocoker.is_exact()) return false;
    const int rest = *rep.index_check.rhs - (oker.value - ocoker.value);
    if (tker.is_exact() && !tcoker.is_exact()) {
      tcoker = Dim::exact(tker.value - rest);
      return true;
    }
    if (tcoker.is_exact() && !tker.is_exact()) {
      tker = Dim::exact(tcoker.value + rest);
      return true;
    }
    return false;
  };
  for (int pass = 0; pass < 2; ++pass) {
    if (fill_by_index(rep.plus, rep.minus, rep.plus.ker, rep.plus.coker, rep.minus.ker, rep.minus.coker))
      rep.plus.certificate += " | index identity";
    if (fill_by_index(rep.minus, rep.plus, rep.minus.ker, rep.minus.coker, rep.plus.ker, rep.plus.coker))
      rep.minus.certificate += " | index identity";
  }
  // conditional cokernels per branch
  for (auto* s : {&rep.plus, &rep.minus}) {
    if (!s->conditional) continue;
    const SideReport& o = s == &rep.plus ? rep.minus : rep.plus;
    auto& cd = *s->conditional;
    if (rep.index_check.rhs && o.ker.is_exact() && o.coker.is_exact()) {
      const int rest = *rep.index_check.rhs - (o.ker.value - o.coker.value);
      cd.coker_if_true = Dim::exact(cd.ker_if_true.value - rest);
      cd.coker_if_false = Dim::exact(cd.ker_if_false.value - rest);
    }
    s->ker = Dim::unknown();
    s->coker = Dim::unknown();
  }
  for (auto* s : {&rep.plus, &rep.minus}) {
    for (const Dim* dd : {&s->ker, &s->coker})
      if (dd->is_exact() && dd->value < 0)
        throw Error(ErrorCode::structure_violation, "negative predicted dimension");
    finish(*s);
  }
  if (rep.plus.index && rep.minus.index) rep.index_check.lhs = *rep.plus.index + *rep.minus.index;
  if (rep.index_check.lhs && rep.index_check.rhs && !rep.index_check.holds())
    throw Error(ErrorCode::structure_violation, "predicted indices violate the index identity");

  // explicit families
  if (auto tab = case_table(rep.case_tag, indices_of(pair.b))) {
    const std::array<const Dim*, 4> got{&rep.plus.ker, &rep.plus.coker, &rep.minus.ker, &rep.minus.coker};
    for (int k = 0; k < 4; ++k) {
      const int want = (*tab)[k];
      if (want < 0) continue;
      if (!(got[k]->is_exact() && got[k]->value == want))
        throw Error(ErrorCode::structure_violation, "rule engine disagrees with case " + rep.case_tag);
    }
    if (rep.case_tag == "3" && !rep.minus.conditional)
      throw Error(ErrorCode::structure_violation, "case 3 must be conditional");
    const std::string tag = " | case " + rep.case_tag + " of the explicit families";
    rep.plus.certificate += tag;
    rep.minus.certificate += tag;
  }
  if (rep.in_scope && (!rep.plus.ker.is_exact() && !rep.plus.conditional)) rep.reason = "partially determined";
  return rep;
}

void resolve(SideReport& side, bool in_image, double membership, bool stable) {
  if (!side.conditional) return;
  auto& cd = *side.conditional;
  cd.measured = in_image;
  cd.membership = membership;
  cd.stable = stable;
  side.ker = in_image ? cd.ker_if_true : cd.ker_if_false;
  side.coker = in_image ? cd.coker_if_true : cd.coker_if_false;
  finish(side);
}

io::json to_json(const Dim& d) {
  if (d.kind == Dim::Kind::exact) return d.value;
  return d.str();
}

io::json to_json(const SideReport& s) {
  io::json j;
  j["ker"] = to_json(s.ker);
  j["coker"] = to_json(s.coker);
  j["status"] = std::string(to_string(s.status));
  j["index"] = s.index ? io::json(*s.index) : io::json(nullptr);
  j["certificate"] = s.certificate;
  if (s.conditional) {
    const auto& c = *s.conditional;
    io::json cj;
    cj["condition"] = c.condition;
    cj["if_true"] = {{"ker", to_json(c.ker_if_true)}, {"coker", to_json(c.coker_if_true)}};
    cj["if_false"] = {{"ker", to_json(c.ker_if_false)}, {"coker", to_json(c.coker_if_false)}};
    cj["measured"] = c.measured ? io::json(*c.measured) : io::json(nullptr);
    if (c.measured) {
      cj["membership"] = c.membership;
      cj["stable"] = c.stable;
    }
    j["conditional"] = std::move(cj);
  }
  return j;
}

io::json to_json(const ClassificationReport& r) {
  io::json j;
  j["plus"] = to_json(r.plus);
  j["minus"] = to_json(r.minus);
  io::json ic;
  ic["lhs"] = r.index_check.lhs ? io::json(*r.index_check.lhs) : io::json(nullptr);
  ic["rhs"] = r.index_check.rhs ? io::json(*r.index_check.rhs) : io::json(nullptr);
  ic["holds"] = (r.index_check.lhs && r.index_check.rhs) ? io::json(r.index_check.holds()) : io::json(nullptr);
  j["index_check"] = std::move(ic);
  io::json sub;
  auto idx = [](const std::optional<double>& v, const std::optional<int>& n, const std::optional<int>& x) {
    io::json o;
    o["nu"] = v ? io::json(*v) : io::json(nullptr);
    o["n"] = n ? io::json(*n) : io::json(nullptr);
    o["xi"] = x ? io::json(*x) : io::json(nullptr);
    return o;
  };
  sub["c"] = dsl::format(r.sub.c);
  sub["d"] = dsl::format(r.sub.d);
  sub["c_indices"] = idx(r.sub.nu_c, r.sub.n_c, r.sub.xi_c);
  sub["d_indices"] = idx(r.sub.nu_d, r.sub.n_d, r.sub.xi_d);
  j["subordinated"] = std::move(sub);
  j["case"] = r.case_tag;
  j["in_scope"] = r.in_scope;
  j["reason"] = r.reason;
  return j;
}

}  // namespace whh
