#include "whh/app/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "whh/dsl/dsl.hpp"
#include "whh/error.hpp"

namespace whh::app {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void bad(int line, const std::string& msg) {
  throw SyntaxError(0, "catalog line " + std::to_string(line) + ": " + msg, "");
}

std::pair<int, int> parse_kc(const std::string& v, int line) {
  const auto slash = v.find('/');
  if (slash == std::string::npos) bad(line, "expected K/C, got '" + v + "'");
  try {
    return {std::stoi(v.substr(0, slash)), std::stoi(v.substr(slash + 1))};
  } catch (const std::exception&) {
    bad(line, "expected K/C, got '" + v + "'");
  }
}

ExpectedDims parse_expected(const std::string& s, int line) {
  ExpectedDims e;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    if (tok == "negative") {
      e.negative = true;
      continue;
    }
    const auto eq = tok.find('=');
    if (eq == std::string::npos) bad(line, "bad expectation token '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "reject") {
      e.reject = val;
    } else if (key == "plus" || key == "minus") {
      const bool cond = val == "cond";
      auto& slot = key == "plus" ? e.plus : e.minus;
      (key == "plus" ? e.plus_cond : e.minus_cond) = cond;
      if (!cond) slot = parse_kc(val, line);
    } else if (key == "scalar") {
      e.scalar = parse_kc(val, line);
    } else {
      bad(line, "unknown expectation key '" + key + "'");
    }
  }
  return e;
}

std::string dims_str(int k, int c) { return std::to_string(k) + "/" + std::to_string(c); }

void compare(const char* what, const std::optional<std::pair<int, int>>& want, const Dim& ker, const Dim& coker,
             std::vector<std::string>& out) {
  if (!want) return;
  if (!(ker == Dim::exact(want->first) && coker == Dim::exact(want->second)))
    out.push_back(std::string(what) + ": expected " + dims_str(want->first, want->second) + ", classifier says " +
                  ker.str() + "/" + coker.str());
}

EntryResult run_scalar(const CatalogEntry& e, const RunOptions& opt) {
  EntryResult r;
  const GSymbol a = dsl::parse_symbol(e.a_expr);
  r.scalar = scalar_wh_classify(a);
  const auto spec = oracle::OpSpec::wh(a);
  r.scalar_ker = oracle::kernel_estimate(spec, opt.grid, opt.verify.estimate);
  r.scalar_coker = oracle::coker_estimate(spec, opt.grid, opt.verify.estimate);
  compare("scalar", e.expected.scalar, r.scalar->ker, r.scalar->coker, r.mismatches);
  bool agree = true, stable = r.scalar_ker->stable && r.scalar_coker->stable;
  auto check = [&](const Dim& p, const oracle::KernelEstimate& m) {
    if (p.is_exact() && p.value != m.dim) agree = false;
    if (p.kind == Dim::Kind::infinite && !(m.refined_dim > m.dim)) stable = false;
  };
  check(r.scalar->ker, *r.scalar_ker);
  check(r.scalar->coker, *r.scalar_coker);
  const bool exact = r.scalar->ker.is_exact() && r.scalar->coker.is_exact();
  if (!stable && exact) r.outcome = "unstable";
  else if (!agree) r.outcome = "fail";
  else r.outcome = "pass";
  if (!agree) r.mismatches.push_back("oracle disagrees with the scalar report");
  r.ok = r.outcome == "pass" && r.mismatches.empty();
  return r;
}

EntryResult run_pair(const CatalogEntry& e, const RunOptions& opt) {
  EntryResult r;
  const MatchingPair p{dsl::parse_symbol(e.a_expr), dsl::parse_symbol(e.b_expr)};
  ClassificationReport rep = classify(p);
  if (e.expected.negative) {
    // judge the deliberately wrong expectation as if it were the report
    auto put = [](SideReport& s, const std::optional<std::pair<int, int>>& w) {
      if (!w) return;
      s.ker = Dim::exact(w->first);
      s.coker = Dim::exact(w->second);
      s.conditional.reset();
    };
    put(rep.plus, e.expected.plus);
    put(rep.minus, e.expected.minus);
    r.verify = verify(std::move(rep), p, opt.grid, opt.verify);
    r.outcome = std::string(to_string(r.verify->overall));
    r.ok = r.verify->overall == Verdict::fail;
    if (!r.ok) r.mismatches.push_back("corrupted expectation was not rejected by the oracle");
    return r;
  }
  r.verify = verify(std::move(rep), p, opt.grid, opt.verify);
  const auto& fin = r.verify->report;
  compare("plus", e.expected.plus, fin.plus.ker, fin.plus.coker, r.mismatches);
  compare("minus", e.expected.minus, fin.minus.ker, fin.minus.coker, r.mismatches);
  if (e.expected.plus_cond && !fin.plus.conditional) r.mismatches.push_back("plus: expected a conditional verdict");
  if (e.expected.minus_cond && !fin.minus.conditional) r.mismatches.push_back("minus: expected a conditional verdict");
  if (r.verify->measured_index_sum && r.verify->measured_scalar_sum &&
      *r.verify->measured_index_sum != *r.verify->measured_scalar_sum)
    r.mismatches.push_back("measured index identity fails");
  r.outcome = std::string(to_string(r.verify->overall));
  r.ok = r.verify->overall != Verdict::fail && r.verify->overall != Verdict::unstable && r.mismatches.empty();
  return r;
}

}  // namespace

std::vector<CatalogEntry> parse_catalog_text(const std::string& text) {
  std::vector<CatalogEntry> out;
  std::set<std::string> names;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    auto f = split(body, '|');
    if (f.size() < 3 || f.size() > 5) bad(line, "expected 'name | a | b | expected | notes'");
    f.resize(5);
    CatalogEntry e;
    e.line = line;
    e.name = f[0];
    e.a_expr = f[1];
    e.b_expr = f[2] == "-" ? "" : f[2];
    e.expected = parse_expected(f[3], line);
    e.notes = f[4];
    if (e.name.empty()) bad(line, "empty name");
    if (e.a_expr.empty() || f[2].empty()) bad(line, "empty expression (use '-' for a scalar entry)");
    if (!names.insert(e.name).second) bad(line, "duplicate name '" + e.name + "'");
    // expressions must parse and lower
    dsl::parse_symbol(e.a_expr);
    if (!e.scalar()) dsl::parse_symbol(e.b_expr);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io_error, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_catalog_text(ss.str());
}

EntryResult run_entry(const CatalogEntry& e, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  EntryResult r;
  try {
    r = e.scalar() ? run_scalar(e, opt) : run_pair(e, opt);
    if (e.expected.reject) {
      r.ok = false;
      r.mismatches.push_back("expected rejection with " + *e.expected.reject);
    }
  } catch (const Error& err) {
    r.error = err.code();
    r.outcome = std::string(to_string(err.code()));
    r.mismatches.push_back(err.what());
    r.ok = e.expected.reject && *e.expected.reject == to_string(err.code());
    if (r.ok) r.mismatches.clear();
  }
  r.name = e.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<EntryResult> run_catalog(const std::vector<CatalogEntry>& entries, const RunOptions& opt) {
  std::vector<EntryResult> out(entries.size());
  int jobs = opt.jobs > 0 ? opt.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, std::max<int>(1, static_cast<int>(entries.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < entries.size();) out[i] = run_entry(entries[i], opt);
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(out.begin(), out.end(), [](const EntryResult& a, const EntryResult& b) { return a.name < b.name; });
  return out;
}

io::json to_json(const EntryResult& r) {
  io::json j;
  j["name"] = r.name;
  j["ok"] = r.ok;
  j["outcome"] = r.outcome;
  j["error"] = r.error ? io::json(std::string(to_string(*r.error))) : io::json(nullptr);
  j["mismatches"] = r.mismatches;
  if (r.verify) j["verify"] = to_json(*r.verify);
  if (r.scalar) {
    j["scalar"] = to_json(*r.scalar);
    j["oracle"] = {{"ker", r.scalar_ker->dim},
                   {"coker", r.scalar_coker->dim},
                   {"ker_refined", r.scalar_ker->refined_dim},
                   {"coker_refined", r.scalar_coker->refined_dim}};
  }
  return j;
}

std::string summary_table(const std::vector<EntryResult>& results) {
  std::ostringstream o;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %-5s %-18s %-14s %-14s %8s\n", "entry", "ok", "outcome", "plus k/c", "minus k/c", "time[s]");
  o << buf;
  for (const auto& r : results) {
    std::string p = "-", m = "-";
    if (r.verify) {
      p = r.verify->report.plus.ker.str() + "/" + r.verify->report.plus.coker.str();
      m = r.verify->report.minus.ker.str() + "/" + r.verify->report.minus.coker.str();
    } else if (r.scalar) {
      p = r.scalar->ker.str() + "/" + r.scalar->coker.str() + " (W)";
    }
    std::snprintf(buf, sizeof buf, "%-22s %-5s %-18s %-14s %-14s %8.2f\n", r.name.c_str(), r.ok ? "yes" : "NO",
                  r.outcome.c_str(), p.c_str(), m.c_str(), r.seconds);
    o << buf;
    for (const auto& mm : r.mismatches) o << "    ! " << mm << "\n";
  }
  return o.str();
}

}  // namespace whh::app
