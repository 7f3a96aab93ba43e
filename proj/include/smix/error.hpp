#pragma once

#include <stdexcept>
#include <string>

namespace smix {

enum class ErrorKind {
  InvalidArgument,
  InvalidDistribution,
  NotHermitian,
  NotPositive,
  TraceNotOne,
  BlockStructureViolated,
  NotConverged,
  RankMismatch,
  NotOrthonormal,
  InvalidDynamics,
  NotInvariant,
  NotKMS,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// invariant failed so the CLI can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::BlockStructureViolated: return "BlockStructureViolated";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::InvalidDynamics: return "InvalidDynamics";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotKMS: return "NotKMS";
  }
  return "Unknown";
}

}  // namespace smix
