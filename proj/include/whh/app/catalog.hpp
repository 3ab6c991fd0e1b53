#pragma once

// Catalog files: one entry per line,
//   name | a | b | expected | notes
// b = "-" means the scalar operator W(a). Expected tokens:
//   plus=K/C minus=K/C scalar=K/C   exact kernel/cokernel dimensions
//   minus=cond                      conditional verdict, resolved by the membership test
//   reject=<ErrorCode name>         the pair must be rejected with that error
//   negative                        the expected dims are deliberately wrong; verification must fail

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "whh/classify/verify.hpp"

namespace whh::app {

struct ExpectedDims {
  std::optional<std::pair<int, int>> plus, minus, scalar;
  bool plus_cond = false, minus_cond = false;
  std::optional<std::string> reject;
  bool negative = false;
};

struct CatalogEntry {
  std::string name;
  std::string a_expr, b_expr;  // b_expr empty for scalar entries
  ExpectedDims expected;
  std::string notes;
  int line = 0;

  bool scalar() const { return b_expr.empty(); }
};

/// Throws SyntaxError (with line info in the message) or IOError.
std::vector<CatalogEntry> parse_catalog_text(const std::string& text);
std::vector<CatalogEntry> load_catalog(const std::string& path);

struct RunOptions {
  oracle::Grid grid;
  VerifyOptions verify;
  int jobs = 0;  // 0: hardware concurrency
};

struct EntryResult {
  std::string name;
  bool ok = false;      // outcome is what the entry expects
  std::string outcome;  // verdict or error name
  std::optional<ErrorCode> error;
  std::optional<VerifyReport> verify;                 // pair entries
  std::optional<SideReport> scalar;                   // scalar entries
  std::optional<oracle::KernelEstimate> scalar_ker, scalar_coker;
  std::vector<std::string> mismatches;
  double seconds = 0.0;  // not part of the JSON output
};

EntryResult run_entry(const CatalogEntry& e, const RunOptions& opt);
/// Bounded worker pool; results sorted by name.
std::vector<EntryResult> run_catalog(const std::vector<CatalogEntry>& entries, const RunOptions& opt);

io::json to_json(const EntryResult& r);
std::string summary_table(const std::vector<EntryResult>& results);

}  // namespace whh::app
