// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace oracle {

struct WireFuzzStats {
  std::uint64_t cases = 0;
  std::uint64_t valid_roundtrips = 0;
  std::uint64_t roundtrip_failures = 0;  // valid input that did not survive
  std::uint64_t rejected = 0;            // mutated input rejected with a genop::Error
  std::uint64_t accepted_mutants = 0;    // mutated input that still decoded
  std::uint64_t foreign_exceptions = 0;  // anything other than genop::Error
  std::size_t largest_allocation = 0;
  std::string first_failure;
};

// Structured fuzz of the frame, request, response, error and plan-list
// decoders. Valid values are encoded by an independent little-endian packer
// and must round-trip exactly; mutants (bit flips, truncation, extension,
// inflated lengths and dims) must be rejected with genop::Error or decode
// to something that re-encodes to the same bytes.
WireFuzzStats run_wire_fuzz(std::uint64_t seed, std::uint64_t cases, std::size_t max_message_bytes);

}  // namespace oracle
