#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace varext {

enum class ErrorKind {
  // input validation
  EmptyOrSingleton,
  NonFiniteValue,
  IndexOutOfRange,
  InvalidArgument,
  OutOfUnitInterval,
  DomainError,
  LengthMismatch,
  MissingCriticalValue,
  UnsupportedFamily,
  ParseError,
  ConfigError,
  // numerical / statistical failures
  ZeroVariance,
  NonpositiveScale,
  TooFewPoints,
  DegenerateDensity,
  GridTooNarrow,
  TiedSpacings,
  WindowTooLarge,
  NoConvergence,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures of the numerics on otherwise well-formed input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

}  // namespace varext
