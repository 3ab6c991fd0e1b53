#include "whh/classify/verify.hpp"

#include <cmath>

#include "whh/error.hpp"
#include "whh/kernel/structure.hpp"

namespace whh {

using oracle::EstimateOptions;
using oracle::Grid;
using oracle::KernelEstimate;
using oracle::OpSpec;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::unstable: return "unstable";
    case Verdict::no_prediction: return "no-prediction";
  }
  return "no-prediction";
}

namespace {

Verdict judge(const Dim& p, const KernelEstimate& e) {
  switch (p.kind) {
    case Dim::Kind::unknown: return Verdict::no_prediction;
    case Dim::Kind::infinite:
      // truncations of an infinite-dimensional kernel keep growing with T
      return e.refined_dim > e.dim ? Verdict::pass : Verdict::unstable;
    case Dim::Kind::exact:
      if (!e.stable) return Verdict::unstable;
      return e.dim == p.value ? Verdict::pass : Verdict::fail;
    case Dim::Kind::at_least:
      if (e.dim >= p.value && (e.stable || e.refined_dim >= p.value)) return Verdict::pass;
      return e.stable ? Verdict::fail : Verdict::unstable;
  }
  return Verdict::no_prediction;
}

double membership_of(const OpSpec& reduced, const Grid& g, int* dim) {
  EstimateOptions o;
  o.stability = false;
  const KernelEstimate k = oracle::kernel_estimate(reduced, g, o);
  *dim = k.dim;
  double s = 0.0;
  for (int j = 0; j < k.dim; ++j) {
    const double d = kernel::image_defect(k.basis.col(j), g);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

std::optional<MembershipCheck> resolve_conditional(ClassificationReport& rep, const MatchingPair& pair,
                                                   const Grid& grid, double tol) {
  for (int side = 0; side < 2; ++side) {
    SideReport& s = side == 0 ? rep.plus : rep.minus;
    if (!s.conditional) continue;
    const int sign = side == 0 ? 1 : -1;
    // W(a) + sign H(b) = (W(a chi^-1) + sign H(b chi)) W(chi)
    const OpSpec reduced = OpSpec::wh_plus_hankel(pair.a * GSymbol::chi(-1), pair.b * GSymbol::chi(), sign);
    MembershipCheck m;
    m.side = side == 0 ? "plus" : "minus";
    m.membership = membership_of(reduced, grid, &m.reduced_kernel_dim);
    int dim_ref = 0;
    m.membership_refined = membership_of(reduced, grid.refined(), &dim_ref);
    const int expect = s.conditional->ker_if_true.value;
    if (m.reduced_kernel_dim != expect)
      throw Error(ErrorCode::structure_violation, "reduced kernel has dimension " + std::to_string(m.reduced_kernel_dim) +
                                                      ", expected " + std::to_string(expect));
    m.in_image = m.membership < tol;
    m.stable = dim_ref == m.reduced_kernel_dim && (m.membership_refined < tol) == m.in_image;
    resolve(s, m.in_image, m.membership, m.stable);
    s.certificate += m.in_image ? " | membership test: contained" : " | membership test: not contained";
    return m;
  }
  return std::nullopt;
}

VerifyReport verify(ClassificationReport rep, const MatchingPair& pair, const Grid& grid, const VerifyOptions& opt) {
  grid.validate();
  VerifyReport v;
  v.grid = grid;
  if (rep.plus.conditional || rep.minus.conditional) {
    bool pending = (rep.plus.conditional && !rep.plus.conditional->measured) ||
                   (rep.minus.conditional && !rep.minus.conditional->measured);
    if (pending) v.membership = resolve_conditional(rep, pair, grid, opt.membership_tol);
  }
  int idx[2] = {0, 0};
  bool idx_ok = true;
  for (int side = 0; side < 2; ++side) {
    const SideReport& s = side == 0 ? rep.plus : rep.minus;
    const OpSpec op = OpSpec::wh_plus_hankel(pair.a, pair.b, side == 0 ? 1 : -1);
    const std::string name = side == 0 ? "plus" : "minus";
    const KernelEstimate k = oracle::kernel_estimate(op, grid, opt.estimate);
    const KernelEstimate q = oracle::coker_estimate(op, grid, opt.estimate);
    for (const auto& w : k.warnings) v.warnings.push_back(w);
    auto add = [&](const char* what, const Dim& p, const KernelEstimate& e) {
      DimCheck c;
      c.quantity = name + "." + what;
      c.predicted = p;
      c.measured = e.dim;
      c.refined = e.refined_dim;
      c.stable = e.stable;
      c.residual = e.residual;
      c.verdict = judge(p, e);
      if (e.dim > 0 && e.residual > opt.residual_tol * e.sigma_max && c.verdict == Verdict::pass)
        c.verdict = Verdict::unstable;
      v.checks.push_back(c);
    };
    add("ker", s.ker, k);
    add("coker", s.coker, q);
    idx[side] = k.dim - q.dim;
    idx_ok = idx_ok && k.stable && q.stable;
  }
  if (idx_ok) v.measured_index_sum = idx[0] + idx[1];
  if (opt.index_identity && rep.sub.nu_c && rep.sub.nu_d && *rep.sub.nu_c == 0.0 && *rep.sub.nu_d == 0.0) {
    int sum = 0;
    bool ok = true;
    for (const GSymbol* g : {&rep.sub.c, &rep.sub.d}) {
      const OpSpec op = OpSpec::wh(*g);
      const KernelEstimate k = oracle::kernel_estimate(op, grid, opt.estimate);
      const KernelEstimate q = oracle::coker_estimate(op, grid, opt.estimate);
      sum += k.dim - q.dim;
      ok = ok && k.stable && q.stable;
    }
    if (ok) v.measured_scalar_sum = sum;
  }
  bool any_fail = false, any_unstable = false, any_pass = false;
  for (const auto& c : v.checks) {
    any_fail |= c.verdict == Verdict::fail;
    any_unstable |= c.verdict == Verdict::unstable;
    any_pass |= c.verdict == Verdict::pass;
  }
  if (v.membership && !v.membership->stable) any_unstable = true;
  v.overall = any_fail ? Verdict::fail : any_unstable ? Verdict::unstable : any_pass ? Verdict::pass : Verdict::no_prediction;
  v.report = std::move(rep);
  return v;
}

io::json to_json(const VerifyReport& v) {
  io::json j;
  j["overall"] = std::string(to_string(v.overall));
  j["grid"] = {{"T", v.grid.T}, {"h", v.grid.h}, {"scheme", v.grid.scheme == oracle::Scheme::cayley ? "cayley" : "nystrom"}};
  io::json rows = io::json::array();
  for (const auto& c : v.checks) {
    io::json r;
    r["quantity"] = c.quantity;
    r["predicted"] = to_json(c.predicted);
    r["measured"] = c.measured;
    r["refined"] = c.refined;
    r["stable"] = c.stable;
    r["residual"] = c.residual;
    r["verdict"] = std::string(to_string(c.verdict));
    rows.push_back(std::move(r));
  }
  j["checks"] = std::move(rows);
  if (v.membership) {
    const auto& m = *v.membership;
    j["membership"] = {{"side", m.side},          {"in_image", m.in_image},
                       {"defect", m.membership}, {"defect_refined", m.membership_refined},
                       {"reduced_kernel_dim", m.reduced_kernel_dim}, {"stable", m.stable}};
  }
  j["measured_index_sum"] = v.measured_index_sum ? io::json(*v.measured_index_sum) : io::json(nullptr);
  j["measured_scalar_index_sum"] = v.measured_scalar_sum ? io::json(*v.measured_scalar_sum) : io::json(nullptr);
  j["report"] = to_json(v.report);
  j["warnings"] = v.warnings;
  return j;
}

}  // namespace whh
