#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sswalk {

enum class ErrorKind {
  UnitarityViolation,
  DegenerateShift,
  UnnormalizedChi,
  WindowMismatch,
  SpaceMismatch,
  ResourceLimit,
  EigensolverFailure,
  ProbeDomainError,
  CaseUnavailable,
  ZeroVector,
  ResidualTooLarge,
  AnchorClash,
  DimensionError,
  UnnormalizedInitial,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::UnitarityViolation: return "UnitarityViolation";
  case ErrorKind::DegenerateShift: return "DegenerateShift";
  case ErrorKind::UnnormalizedChi: return "UnnormalizedChi";
  case ErrorKind::WindowMismatch: return "WindowMismatch";
  case ErrorKind::SpaceMismatch: return "SpaceMismatch";
  case ErrorKind::ResourceLimit: return "ResourceLimit";
  case ErrorKind::EigensolverFailure: return "EigensolverFailure";
  case ErrorKind::ProbeDomainError: return "ProbeDomainError";
  case ErrorKind::CaseUnavailable: return "CaseUnavailable";
  case ErrorKind::ZeroVector: return "ZeroVector";
  case ErrorKind::ResidualTooLarge: return "ResidualTooLarge";
  case ErrorKind::AnchorClash: return "AnchorClash";
  case ErrorKind::DimensionError: return "DimensionError";
  case ErrorKind::UnnormalizedInitial: return "UnnormalizedInitial";
  case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class WalkError : public std::runtime_error {
public:
  WalkError(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace sswalk
