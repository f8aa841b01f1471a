#include "rrqa/errors.hpp"

namespace rrqa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kMalformedRecord: return "malformed-record";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDegenerateContext: return "degenerate-context";
    case ErrorCode::kIntegrity: return "integrity";
    case ErrorCode::kVersionMismatch: return "version-mismatch";
    case ErrorCode::kChecksumMismatch: return "checksum-mismatch";
    case ErrorCode::kUnknownKey: return "unknown-key";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kNoAnswer: return "no-answer";
    case ErrorCode::kAdapter: return "adapter";
    case ErrorCode::kMissingArtifact: return "missing-artifact";
    case ErrorCode::kUnknownSystem: return "unknown-system";
  }
  return "unknown";
}

}  // namespace rrqa
