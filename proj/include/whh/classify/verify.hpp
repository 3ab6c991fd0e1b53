#pragma once

// Cross-checks a classification report against the discretization oracle.

#include <optional>
#include <string>
#include <vector>

#include "whh/classify/classify.hpp"
#include "whh/oracle/estimate.hpp"

namespace whh {

enum class Verdict { pass, fail, unstable, no_prediction };
std::string_view to_string(Verdict v);

struct DimCheck {
  std::string quantity;  // "plus.ker", ...
  Dim predicted;
  int measured = 0;
  int refined = -1;
  bool stable = true;
  double residual = 0.0;
  Verdict verdict = Verdict::no_prediction;
};

struct MembershipCheck {
  std::string side;
  bool in_image = false;
  double membership = 0.0;          // ||(I - Q0) V||_F over an orthonormal kernel basis V
  double membership_refined = 0.0;
  int reduced_kernel_dim = 0;
  bool stable = true;
};

struct VerifyOptions {
  oracle::EstimateOptions estimate;
  double membership_tol = 1e-4;
  /// kernel vectors with ||S v|| > residual_tol * sigma_max make a check unstable
  double residual_tol = 1e-5;
  bool index_identity = true;
};

struct VerifyReport {
  ClassificationReport report;  // with any conditional resolved
  std::vector<DimCheck> checks;
  std::optional<MembershipCheck> membership;
  std::optional<int> measured_index_sum;   // ind(W+H) + ind(W-H)
  std::optional<int> measured_scalar_sum;  // ind W(c) + ind W(d)
  Verdict overall = Verdict::no_prediction;
  oracle::Grid grid;
  std::vector<std::string> warnings;
};

/// Resolves the conditional branch of `rep` (if any) with the membership test.
std::optional<MembershipCheck> resolve_conditional(ClassificationReport& rep, const MatchingPair& pair,
                                                   const oracle::Grid& grid, double tol = 1e-4);

/// `rep` is taken as given, so a tampered report is judged on its own numbers.
VerifyReport verify(ClassificationReport rep, const MatchingPair& pair, const oracle::Grid& grid,
                    const VerifyOptions& opt = {});

io::json to_json(const VerifyReport& v);

}  // namespace whh
