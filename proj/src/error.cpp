// SPDX-License-Identifier: Apache-2.0

#include "cpir/error.hpp"

namespace cpir {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kDimError: return "DimError";
    case ErrorCode::kSingularError: return "SingularError";
    case ErrorCode::kFieldTooSmall: return "FieldTooSmall";
    case ErrorCode::kBadIndexSet: return "BadIndexSet";
    case ErrorCode::kUnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::kBadCall: return "BadCall";
    case ErrorCode::kInternalInvariant: return "InternalInvariant";
    case ErrorCode::kBadQuery: return "BadQuery";
    case ErrorCode::kUndecodable: return "Undecodable";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kEncodeError: return "EncodeError";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kConnectError: return "ConnectError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBadArgument: return "BadArgument";
    case ErrorCode::kProtocolError: return "ProtocolError";
  }
  return "Unknown";
}

}  // namespace cpir
