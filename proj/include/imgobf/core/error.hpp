#pragma once

#include <stdexcept>
#include <string>

namespace imgobf {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  Degenerate,
  Io,
  Format,
  Checksum,
  Coverage,
  BackendUnavailable,
  CacheMiss,
  ExternalCommand,
};

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::InvalidArgument, message);
}

}  // namespace imgobf
