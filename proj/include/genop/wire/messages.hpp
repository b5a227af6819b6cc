// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genop/core/bytes.hpp"
#include "genop/wire/frame.hpp"

namespace genop::wire {

// msg_type 1 body: plan_hash[32] | u16 input_count | tensor*
struct GenOpRequest {
  Digest plan_hash{};
  std::vector<Tensor> inputs;
};

struct ServerTiming {
  std::uint64_t inference_micros = 0;
  std::uint64_t deserialize_micros = 0;
  std::uint64_t serialize_micros = 0;

  friend bool operator==(const ServerTiming&, const ServerTiming&) = default;
};

// msg_type 2 body: u16 output_count | tensor* | u64 inference | u64 deserialize
// | u64 serialize
struct GenOpResponse {
  std::vector<Tensor> outputs;
  ServerTiming timing;
};

// msg_type 3 body: u16 error code | UTF-8 message (rest of body)
struct ErrorBody {
  ErrorCode code = ErrorCode::kBackendFailure;
  std::string message;
};

Bytes encode_request(const GenOpRequest& r);
GenOpRequest decode_request(ByteView body);
Bytes encode_response(const GenOpResponse& r);
GenOpResponse decode_response(ByteView body);
Bytes encode_error(const ErrorBody& e);
ErrorBody decode_error(ByteView body);

// msg_type 7 body: u32 count | digest*
Bytes encode_plan_list(const std::vector<Digest>& hashes);
std::vector<Digest> decode_plan_list(ByteView body);

// Turns an Error frame into the matching exception; returns normally for
// any other frame type.
void raise_if_error(const Frame& f);

}  // namespace genop::wire
