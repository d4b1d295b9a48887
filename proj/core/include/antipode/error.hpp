#pragma once

#include <stdexcept>
#include <string>

namespace antipode {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  NotSpanning,
  ZeroVector,
  OffSphere,
  WitnessRejected,
  NotContained,
  IterationLimit,
  Parse,
};

/// Library-wide exception. `kind` lets callers (the CLI in particular) map
/// failures onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace antipode
