#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tickcep {

enum class Errc {
  FieldCountMismatch,
  MalformedField,
  RetentionDisabled,
  UnknownSymbol,
  BadConfig,
  CapacityExhausted,
  UnknownBenchmark,
  Unauthorized,
  OutOfOrderCall,
  UnknownSeqId,
  DuplicateResult,
  SessionTimeout,
  SessionNotEnded,
  EmptySamples,
  Unreadable,
  ConnectionFailed,
  ProtocolViolation,
};

std::string_view to_string(Errc code) noexcept;

/// All recoverable failures in the library are reported as `Error` with a
/// machine-readable code; the message is for humans only.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tickcep
