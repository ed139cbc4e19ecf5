#include "tickcep/error.hpp"

namespace tickcep {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::FieldCountMismatch: return "FieldCountMismatch";
    case Errc::MalformedField: return "MalformedField";
    case Errc::RetentionDisabled: return "RetentionDisabled";
    case Errc::UnknownSymbol: return "UnknownSymbol";
    case Errc::BadConfig: return "BadConfig";
    case Errc::CapacityExhausted: return "CapacityExhausted";
    case Errc::UnknownBenchmark: return "UnknownBenchmark";
    case Errc::Unauthorized: return "Unauthorized";
    case Errc::OutOfOrderCall: return "OutOfOrderCall";
    case Errc::UnknownSeqId: return "UnknownSeqId";
    case Errc::DuplicateResult: return "DuplicateResult";
    case Errc::SessionTimeout: return "SessionTimeout";
    case Errc::SessionNotEnded: return "SessionNotEnded";
    case Errc::EmptySamples: return "EmptySamples";
    case Errc::Unreadable: return "Unreadable";
    case Errc::ConnectionFailed: return "ConnectionFailed";
    case Errc::ProtocolViolation: return "ProtocolViolation";
  }
  return "Unknown";
}

}  // namespace tickcep
