#pragma once

// Predicted kernel / cokernel dimensions of W(a) + H(b) and W(a) - H(b)
// for matching pairs, with the rule that produced each number.

#include <optional>
#include <string>

#include "whh/classify/pair.hpp"
#include "whh/io/serialize.hpp"

namespace whh {

struct Dim {
  enum class Kind { exact, at_least, infinite, unknown };
  Kind kind = Kind::unknown;
  int value = 0;

  static Dim exact(int v) { return {Kind::exact, v}; }
  static Dim at_least(int v) { return {Kind::at_least, v}; }
  static Dim infinite() { return {Kind::infinite, 0}; }
  static Dim unknown() { return {Kind::unknown, 0}; }

  bool is_exact() const { return kind == Kind::exact; }
  bool is_zero() const { return kind == Kind::exact && value == 0; }
  /// certainly > 0
  bool positive() const {
    return (kind == Kind::exact && value > 0) || (kind == Kind::at_least && value > 0) || kind == Kind::infinite;
  }
  std::string str() const;
  friend bool operator==(const Dim&, const Dim&) = default;
};

enum class Status {
  invertible,
  left_invertible,
  right_invertible,
  fredholm,           // both kernel and cokernel nontrivial
  coburn_simonenko,   // one side trivial, the other not determined
  not_semi_fredholm,
  unknown,
};

std::string_view to_string(Status s);

/// Two-way verdict that hinges on whether ker(W(a') - H(b')) lies in im W(chi).
struct Conditional {
  std::string condition;
  Dim ker_if_true, coker_if_true, ker_if_false, coker_if_false;
  std::optional<bool> measured;  // filled by resolve()
  double membership = 0.0;
  bool stable = true;
};

struct SideReport {
  Dim ker, coker;
  Status status = Status::unknown;
  std::optional<int> index;
  std::string certificate;
  std::optional<Conditional> conditional;
};

struct IndexCheck {
  std::optional<int> lhs;  // ind(W+H) + ind(W-H)
  std::optional<int> rhs;  // ind W(c) + ind W(d)
  bool holds() const { return lhs && rhs && *lhs == *rhs; }
};

struct ClassificationReport {
  SideReport plus, minus;
  IndexCheck index_check;
  SubordinatedPair sub;
  bool in_scope = true;
  std::string reason;    // why something is undetermined
  std::string case_tag;  // "1", ..., "5" for the explicit families, or empty
  bool reduced_sign = false;  // xi(c) = -1 handled through b -> -b
};

/// Exact report for a scalar W(a).
SideReport scalar_wh_classify(const GSymbol& a);

/// Throws NotMatching, NotInvertible (for a), NotRepresentable.
ClassificationReport classify(const MatchingPair& pair);

/// Fixes a conditional verdict once the membership test has been evaluated.
void resolve(SideReport& side, bool in_image, double membership, bool stable);

io::json to_json(const Dim& d);
io::json to_json(const SideReport& s);
io::json to_json(const ClassificationReport& r);

}  // namespace whh
