// SPDX-License-Identifier: Apache-2.0
#include "genop/core/error.hpp"

namespace genop {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidShape: return "INVALID_SHAPE";
    case ErrorCode::kDtypeMismatch: return "DTYPE_MISMATCH";
    case ErrorCode::kModelNotFound: return "MODEL_NOT_FOUND";
    case ErrorCode::kProtocolVersionMismatch: return "PROTOCOL_VERSION_MISMATCH";
    case ErrorCode::kMessageTooLarge: return "MESSAGE_TOO_LARGE";
    case ErrorCode::kTransportFailure: return "TRANSPORT_FAILURE";
    case ErrorCode::kBackendFailure: return "BACKEND_FAILURE";
    case ErrorCode::kTimeout: return "TIMEOUT";
    case ErrorCode::kMalformedFrame: return "MALFORMED_FRAME";
  }
  return "UNKNOWN";
}

bool error_code_from_u16(std::uint16_t raw, ErrorCode* out) {
  if (raw < 1 || raw > 9) return false;
  *out = static_cast<ErrorCode>(raw);
  return true;
}

}  // namespace genop
