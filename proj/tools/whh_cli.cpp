// Command-line front end: parse | factorize | classify | verify | kernel-basis | catalog

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "whh/app/catalog.hpp"
#include "whh/dsl/dsl.hpp"
#include "whh/error.hpp"
#include "whh/factor/factorization.hpp"
#include "whh/kernel/structure.hpp"

using namespace whh;
using io::json;

namespace {

struct Globals {
  double T = 25.0;
  double h = 0.1;
  double rank_tol = 1e-8;
  double residual_tol = 1e-5;
  std::string scheme = "cayley";
  bool json = false;
  std::string out;
  int jobs = 0;
  bool no_stability = false;
};

oracle::Grid make_grid(const Globals& g) {
  oracle::Grid grid;
  grid.T = g.T;
  grid.h = g.h;
  grid.scheme = g.scheme == "nystrom" ? oracle::Scheme::nystrom : oracle::Scheme::cayley;
  grid.validate();
  return grid;
}

VerifyOptions make_verify(const Globals& g) {
  VerifyOptions v;
  v.estimate.rank_tol = g.rank_tol;
  v.estimate.stability = !g.no_stability;
  v.residual_tol = g.residual_tol;
  return v;
}

// JSON goes to --out when given, else to stdout if --json
void emit(const Globals& g, const json& j, const std::string& human) {
  if (!g.out.empty()) {
    std::ofstream f(g.out);
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + g.out);
    f << j.dump(2) << "\n";
  }
  if (g.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << human;
}

std::string opt_str(const std::optional<int>& v) { return v ? std::to_string(*v) : "?"; }

int cmd_parse(const Globals& g, const std::string& expr) {
  const GSymbol a = dsl::parse_symbol(expr);
  json j;
  j["canonical"] = dsl::format(a);
  j["symbol"] = io::to_json(a);
  std::ostringstream o;
  o << "canonical: " << dsl::format(a) << "\n";
  std::optional<double> v;
  std::optional<int> n, x;
  try {
    v = nu(a);
    if (*v == 0.0) n = winding_n(a);
  } catch (const Error& e) {
    j["index_error"] = e.what();
  }
  const bool matching = is_matching(a);
  if (matching && v && *v == 0.0) x = xi(a);
  j["nu"] = v ? json(*v) : json(nullptr);
  j["n"] = n ? json(*n) : json(nullptr);
  j["matching"] = matching;
  j["xi"] = x ? json(*x) : json(nullptr);
  j["plus"] = is_plus(a);
  j["minus"] = is_minus(a);
  o << "nu = " << (v ? dsl::format_real(*v) : "?") << ", n = " << opt_str(n) << "\n";
  o << "matching: " << (matching ? "yes" : "no");
  if (x) o << ", xi = " << *x;
  o << "\nG+: " << (is_plus(a) ? "yes" : "no") << ", G-: " << (is_minus(a) ? "yes" : "no") << "\n";
  emit(g, j, o.str());
  return 0;
}

int cmd_factorize(const Globals& g, const std::string& expr) {
  const GSymbol a = dsl::parse_symbol(expr);
  const WHFactorization f = factorize(a);
  const double err = reconstruction_error(a, f);
  json j = io::to_json(f);
  j["reconstruction_error"] = err;
  std::ostringstream o;
  o << "g- = " << dsl::format(f.g_minus) << "\n"
    << "nu = " << dsl::format_real(f.nu) << ", n = " << f.n << "\n"
    << "g+ = " << dsl::format(f.g_plus) << "\n"
    << "reconstruction error = " << err << "\n";
  if (f.nu == 0.0 && is_matching(a)) {
    const auto m = matching_factorization(a);
    j["matching"] = {{"g_plus", dsl::format(m.g_plus)}, {"n", m.n}, {"xi", m.xi}};
    o << "matching: g- = xi tilde(g+)^-1 with xi = " << m.xi << "\n";
  }
  emit(g, j, o.str());
  return 0;
}

std::string side_text(const char* name, const SideReport& s) {
  std::ostringstream o;
  o << name << ": ker " << s.ker.str() << ", coker " << s.coker.str() << ", " << to_string(s.status);
  if (s.index) o << ", index " << *s.index;
  o << "\n";
  if (s.conditional) {
    const auto& c = *s.conditional;
    o << "  conditional on: " << c.condition << "\n"
      << "    if true : " << c.ker_if_true.str() << "/" << c.coker_if_true.str() << "\n"
      << "    if false: " << c.ker_if_false.str() << "/" << c.coker_if_false.str() << "\n";
    if (c.measured) o << "    measured: " << (*c.measured ? "true" : "false") << " (defect " << c.membership << ")\n";
  }
  o << "  certificate: " << s.certificate << "\n";
  return o.str();
}

int cmd_classify(const Globals& g, const std::string& a_expr, const std::string& b_expr) {
  const GSymbol a = dsl::parse_symbol(a_expr);
  if (b_expr.empty()) {
    const SideReport s = scalar_wh_classify(a);
    emit(g, to_json(s), side_text("W(a)", s));
    return 0;
  }
  const MatchingPair p{a, dsl::parse_symbol(b_expr)};
  const ClassificationReport r = classify(p);
  std::ostringstream o;
  o << side_text("W(a)+H(b)", r.plus) << side_text("W(a)-H(b)", r.minus);
  o << "index identity: lhs " << opt_str(r.index_check.lhs) << ", rhs " << opt_str(r.index_check.rhs) << "\n";
  if (!r.case_tag.empty()) o << "family: case " << r.case_tag << "\n";
  if (!r.reason.empty()) o << "note: " << r.reason << "\n";
  emit(g, to_json(r), o.str());
  return 0;
}

int cmd_verify(const Globals& g, const std::string& a_expr, const std::string& b_expr) {
  app::CatalogEntry e;
  e.name = "cli";
  e.a_expr = a_expr;
  e.b_expr = b_expr;
  app::RunOptions ro;
  ro.grid = make_grid(g);
  ro.verify = make_verify(g);
  const app::EntryResult r = app::run_entry(e, ro);
  if (r.error) {
    std::cerr << "error: " << (r.mismatches.empty() ? std::string(to_string(*r.error)) : r.mismatches.front()) << "\n";
    return exit_status(*r.error);
  }
  std::ostringstream o;
  if (r.verify) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %-10s %-9s %-8s %s\n", "quantity", "predicted", "measured", "refined", "verdict");
    o << buf;
    for (const auto& c : r.verify->checks) {
      std::snprintf(buf, sizeof buf, "%-12s %-10s %-9d %-8d %s\n", c.quantity.c_str(), c.predicted.str().c_str(),
                    c.measured, c.refined, std::string(to_string(c.verdict)).c_str());
      o << buf;
    }
    if (r.verify->membership)
      o << "membership (" << r.verify->membership->side << "): "
        << (r.verify->membership->in_image ? "contained" : "not contained") << ", defect "
        << r.verify->membership->membership << "\n";
    o << "index sums (measured): " << opt_str(r.verify->measured_index_sum) << " vs "
      << opt_str(r.verify->measured_scalar_sum) << "\n";
  } else if (r.scalar) {
    o << side_text("W(a)", *r.scalar) << "oracle: ker " << r.scalar_ker->dim << ", coker " << r.scalar_coker->dim << "\n";
  }
  for (const auto& m : r.mismatches) o << "! " << m << "\n";
  o << "overall: " << r.outcome << "\n";
  emit(g, app::to_json(r), o.str());
  return r.ok ? 0 : 1;
}

int cmd_kernel_basis(const Globals& g, const std::string& a_expr, const std::string& b_expr, const std::string& sign) {
  if (sign != "+" && sign != "-") throw CLI::ValidationError("--sign", "must be + or -");
  const oracle::Grid grid = make_grid(g);
  const GSymbol a = dsl::parse_symbol(a_expr);
  const oracle::OpSpec op = b_expr.empty() ? oracle::OpSpec::wh(a)
                                           : oracle::OpSpec::wh_plus_hankel(a, dsl::parse_symbol(b_expr), sign == "+" ? 1 : -1);
  oracle::EstimateOptions eo = make_verify(g).estimate;
  const auto k = oracle::kernel_estimate(op, grid, eo);
  json j;
  j["operator"] = op.description;
  j["grid"] = {{"T", grid.T}, {"h", grid.h}};
  j["dim"] = k.dim;
  j["stable"] = k.stable;
  j["refined_dim"] = k.refined_dim;
  j["residual"] = k.residual;
  j["sigma_max"] = k.sigma_max;
  const std::size_t tail = std::min<std::size_t>(k.singular_values.size(), static_cast<std::size_t>(k.dim) + 3);
  j["smallest_singular_values"] =
      std::vector<double>(k.singular_values.end() - static_cast<std::ptrdiff_t>(tail), k.singular_values.end());
  json basis = json::array();
  for (int c = 0; c < k.dim; ++c) basis.push_back(kernel::to_json(kernel::GridFunction{grid, k.basis.col(c)}));
  j["basis"] = std::move(basis);
  std::ostringstream o;
  o << op.description << ": kernel dimension " << k.dim << (k.stable ? "" : " (unstable)") << ", residual " << k.residual
    << "\n";
  if (g.out.empty()) o << "(use --out FILE or --json for the basis values)\n";
  emit(g, j, o.str());
  return 0;
}

int cmd_catalog(const Globals& g, const std::string& path) {
  app::RunOptions ro;
  ro.grid = make_grid(g);
  ro.verify = make_verify(g);
  ro.jobs = g.jobs;
  const auto entries = app::load_catalog(path);
  const auto results = app::run_catalog(entries, ro);
  json j;
  j["catalog"] = path;
  j["grid"] = {{"T", ro.grid.T}, {"h", ro.grid.h}};
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back(app::to_json(r));
    all = all && r.ok;
  }
  j["entries"] = std::move(arr);
  j["all_ok"] = all;
  emit(g, j, app::summary_table(results) + (all ? "all entries ok\n" : "SOME ENTRIES FAILED\n"));
  return all ? 0 : 1;
}

std::string exit_code_doc() {
  std::ostringstream o;
  o << "Exit status:\n  0  success\n  1  verification failed (verify, catalog)\n"
    << "  100-127  command-line usage errors (argument parser)\n";
  for (int c = 0; c <= static_cast<int>(ErrorCode::io_error); ++c) {
    const auto code = static_cast<ErrorCode>(c);
    o << "  " << exit_status(code) << "  " << to_string(code) << "\n";
  }
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wiener-Hopf plus Hankel operators with matching generating functions"};
  app.set_help_flag("--help", "print help (-h is not an alias; --h is the grid step)");
  app.footer(exit_code_doc());
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values");
  Globals g;
  app.add_option("--T", g.T, "half-line truncation length")->capture_default_str();
  app.add_option("--h", g.h, "grid step (T/h must be an integer)")->capture_default_str();
  app.add_option("--rank-tol", g.rank_tol, "relative singular value cutoff")->capture_default_str();
  app.add_option("--residual-tol", g.residual_tol, "kernel residual bound relative to sigma_max")->capture_default_str();
  app.add_option("--scheme", g.scheme, "discretization")->check(CLI::IsMember({"cayley", "nystrom"}))->capture_default_str();
  app.add_flag("--json", g.json, "machine-readable output on stdout");
  app.add_option("--out", g.out, "write the JSON output to this file");
  app.add_option("--jobs", g.jobs, "worker threads for catalog runs (0 = all cores)");
  app.add_flag("--no-stability", g.no_stability, "skip the refined-grid stability check");

  std::string expr, a_expr, b_expr, sign = "+", path;
  auto* parse = app.add_subcommand("parse", "canonical form and indices of a symbol");
  parse->add_option("expr", expr)->required();
  auto* fact = app.add_subcommand("factorize", "Wiener-Hopf factorization of a rational symbol");
  fact->add_option("expr", expr)->required();
  auto* cls = app.add_subcommand("classify", "predicted kernel/cokernel dims of W(a) +- H(b); W(a) if b is omitted");
  cls->add_option("a", a_expr)->required();
  cls->add_option("b", b_expr);
  auto* ver = app.add_subcommand("verify", "classify and check against the discretization oracle");
  ver->add_option("a", a_expr)->required();
  ver->add_option("b", b_expr);
  auto* kb = app.add_subcommand("kernel-basis", "numerical kernel basis of W(a) +- H(b)");
  kb->add_option("a", a_expr)->required();
  kb->add_option("b", b_expr);
  kb->add_option("--sign", sign, "+ or -")->capture_default_str();
  auto* cat = app.add_subcommand("catalog", "classify and verify every entry of a catalog file");
  cat->add_option("path", path)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (*parse) return cmd_parse(g, expr);
    if (*fact) return cmd_factorize(g, expr);
    if (*cls) return cmd_classify(g, a_expr, b_expr);
    if (*ver) return cmd_verify(g, a_expr, b_expr);
    if (*kb) return cmd_kernel_basis(g, a_expr, b_expr, sign);
    if (*cat) return cmd_catalog(g, path);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_status(e.code());
  }
  return 0;
}
