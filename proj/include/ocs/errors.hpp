// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ocs {

/// The service-level error vocabulary. Every failure surfaced on the
/// north-bound interface carries exactly one of these codes.
enum class ErrorCode {
  AlreadyExist,
  ConnectionFailed,
  NotFound,
  InvalidRange,
  BlockingOccured,
  PathOperFailed,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::AlreadyExist: return "AlreadyExist";
    case ErrorCode::ConnectionFailed: return "ConnectionFailed";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::BlockingOccured: return "BlockingOccured";
    case ErrorCode::PathOperFailed: return "PathOperFailed";
  }
  return "PathOperFailed";
}

/// Parses a wire error code; throws std::invalid_argument on unknown names.
ErrorCode error_code_from_string(const std::string& s);

class NbiError : public std::runtime_error {
 public:
  NbiError(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ocs
