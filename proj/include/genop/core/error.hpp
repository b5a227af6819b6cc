// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace genop {

// Wire values are stable: Error frames carry these as u16.
enum class ErrorCode : std::uint16_t {
  kInvalidShape = 1,
  kDtypeMismatch = 2,
  kModelNotFound = 3,
  kProtocolVersionMismatch = 4,
  kMessageTooLarge = 5,
  kTransportFailure = 6,
  kBackendFailure = 7,
  kTimeout = 8,
  kMalformedFrame = 9,
};

std::string_view error_code_name(ErrorCode code);

// Returns false for values outside the enumeration.
bool error_code_from_u16(std::uint16_t raw, ErrorCode* out);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace genop
