// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cpir {

// Numeric values are part of the C API (see cpir.h) and must stay stable.
enum class ErrorCode : int {
  kOk = 0,
  kDivisionByZero = 1,
  kDimError = 2,
  kSingularError = 3,
  kFieldTooSmall = 4,
  kBadIndexSet = 5,
  kUnsupportedRegime = 6,
  kBadCall = 7,
  kInternalInvariant = 8,
  kBadQuery = 9,
  kUndecodable = 10,
  kTooLarge = 11,
  kEncodeError = 12,
  kDecodeError = 13,
  kConnectError = 14,
  kIoError = 15,
  kBadArgument = 16,
  kProtocolError = 17,
};

const char* error_code_name(ErrorCode code) noexcept;

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

}  // namespace cpir
