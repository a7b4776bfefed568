#ifndef NLFT_ERRORS_HPP
#define NLFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlft {

enum class ErrorKind {
  InvalidArgument,
  StepCountTooSmall,
  NoRootInDisc,
  BracketFailure,
  IdentityViolation,
  OnCutError,
  AnchorDegenerate,
  ContourTouchesGap,
  NegativeXiSquared,
  NewtonDivergence,
  SigmaLeftDisc,
  BranchThresholdConflict,
  TailEnergyOverflow,
  InsufficientSamples,
  ConfigError,
  WindowAudit,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::StepCountTooSmall: return "StepCountTooSmall";
    case ErrorKind::NoRootInDisc: return "NoRootInDisc";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::IdentityViolation: return "IdentityViolation";
    case ErrorKind::OnCutError: return "OnCutError";
    case ErrorKind::AnchorDegenerate: return "AnchorDegenerate";
    case ErrorKind::ContourTouchesGap: return "ContourTouchesGap";
    case ErrorKind::NegativeXiSquared: return "NegativeXiSquared";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::SigmaLeftDisc: return "SigmaLeftDisc";
    case ErrorKind::BranchThresholdConflict: return "BranchThresholdConflict";
    case ErrorKind::TailEnergyOverflow: return "TailEnergyOverflow";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::WindowAudit: return "WindowAudit";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers can
/// distinguish numerical policy failures from bad input.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nlft

#endif  // NLFT_ERRORS_HPP
