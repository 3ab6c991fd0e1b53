#include "whh/error.hpp"

namespace whh {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::syntax_error: return "SyntaxError";
    case ErrorCode::real_pole: return "RealPoleError";
    case ErrorCode::improper_rational: return "ImproperRational";
    case ErrorCode::not_representable: return "NotRepresentable";
    case ErrorCode::not_invertible: return "NotInvertible";
    case ErrorCode::inconclusive: return "Inconclusive";
    case ErrorCode::mean_motion_unresolved: return "MeanMotionUnresolved";
    case ErrorCode::winding_unresolved: return "WindingUnresolved";
    case ErrorCode::not_matching: return "NotMatching";
    case ErrorCode::xi_not_unimodular: return "XiNotUnimodular";
    case ErrorCode::not_factorizable: return "NotFactorizable";
    case ErrorCode::structure_violation: return "StructureViolation";
    case ErrorCode::wrong_side: return "WrongSide";
    case ErrorCode::wrong_index: return "WrongIndex";
    case ErrorCode::wrong_case: return "WrongCase";
    case ErrorCode::not_in_kernel: return "NotInKernel";
    case ErrorCode::no_right_inverse: return "NoRightInverse";
    case ErrorCode::shift_not_commensurate: return "ShiftNotCommensurate";
    case ErrorCode::grid_mismatch: return "GridMismatch";
    case ErrorCode::out_of_scope: return "OutOfScope";
    case ErrorCode::io_error: return "IOError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  // 0 is success, 1 is a failed verification, 2 is a usage error.
  return 10 + static_cast<int>(code);
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

SyntaxError::SyntaxError(std::size_t position, const std::string& message, std::string expected)
    : Error(ErrorCode::syntax_error,
            "at position " + std::to_string(position) + ": " + message +
                (expected.empty() ? std::string() : " (expected " + expected + ")")),
      position_(position),
      expected_(std::move(expected)) {}

RealPoleError::RealPoleError(cplx root, const std::string& message)
    : Error(ErrorCode::real_pole, message), root_(root) {}

}  // namespace whh
