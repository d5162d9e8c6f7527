#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace neuroami {

enum class ErrorKind {
  EmptyCorpus,
  EmptyRow,
  BadEncoding,
  BadNumber,
  BadReference,
  BadClassLevel,
  LengthMismatch,
  EmptyMemory,
  BadClass,
  BadConfig,
  DegenerateDivisive,
  TooShort,
  NoTestSteps,
  BadTrace,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::EmptyRow: return "EmptyRow";
    case ErrorKind::BadEncoding: return "BadEncoding";
    case ErrorKind::BadNumber: return "BadNumber";
    case ErrorKind::BadReference: return "BadReference";
    case ErrorKind::BadClassLevel: return "BadClassLevel";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyMemory: return "EmptyMemory";
    case ErrorKind::BadClass: return "BadClass";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::DegenerateDivisive: return "DegenerateDivisive";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::NoTestSteps: return "NoTestSteps";
    case ErrorKind::BadTrace: return "BadTrace";
  }
  return "Unknown";
}

/// Error raised by every neuroami operation.
///
/// `location()` carries the row index, line number, byte offset or step index
/// the failure refers to, when there is one. Its meaning depends on the kind.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> location = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        location_(location) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> location() const noexcept { return location_; }

private:
  ErrorKind kind_;
  std::optional<std::size_t> location_;
};

}  // namespace neuroami
