#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace whh {

using cplx = std::complex<double>;

/// Typed failure reasons. Each maps to a distinct CLI exit status.
enum class ErrorCode {
  syntax_error,
  real_pole,
  improper_rational,
  not_representable,
  not_invertible,
  inconclusive,
  mean_motion_unresolved,
  winding_unresolved,
  not_matching,
  xi_not_unimodular,
  not_factorizable,
  structure_violation,
  wrong_side,
  wrong_index,
  wrong_case,
  not_in_kernel,
  no_right_inverse,
  shift_not_commensurate,
  grid_mismatch,
  out_of_scope,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Process exit status used by the command-line tool for `code`.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the DSL parser; carries the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message, std::string expected);

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

/// Raised when a denominator has a root on the real axis.
class RealPoleError : public Error {
 public:
  RealPoleError(cplx root, const std::string& message);

  cplx root() const noexcept { return root_; }

 private:
  cplx root_;
};

}  // namespace whh
