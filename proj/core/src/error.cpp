#include "varext/error.hpp"

namespace varext {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyOrSingleton: return "EmptyOrSingleton";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OutOfUnitInterval: return "OutOfUnitInterval";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::MissingCriticalValue: return "MissingCriticalValue";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::NonpositiveScale: return "NonpositiveScale";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DegenerateDensity: return "DegenerateDensity";
    case ErrorKind::GridTooNarrow: return "GridTooNarrow";
    case ErrorKind::TiedSpacings: return "TiedSpacings";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroVariance:
    case ErrorKind::NonpositiveScale:
    case ErrorKind::TooFewPoints:
    case ErrorKind::DegenerateDensity:
    case ErrorKind::GridTooNarrow:
    case ErrorKind::TiedSpacings:
    case ErrorKind::WindowTooLarge:
    case ErrorKind::NoConvergence:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      index_(index) {}

}  // namespace varext
