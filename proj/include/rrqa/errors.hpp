#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rrqa {

enum class ErrorCode {
  kIo,
  kMalformedRecord,
  kDuplicateId,
  kInvalidArgument,
  kDegenerateContext,
  kIntegrity,
  kVersionMismatch,
  kChecksumMismatch,
  kUnknownKey,
  kEmptyInput,
  kNoAnswer,
  kAdapter,
  kMissingArtifact,
  kUnknownSystem,
};

std::string_view to_string(ErrorCode code);

/// Every library failure is reported through this type; `code()` lets callers
/// branch on the failure class without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rrqa
