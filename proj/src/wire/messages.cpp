// SPDX-License-Identifier: Apache-2.0
#include "genop/wire/messages.hpp"

namespace genop::wire {
namespace {

void put_tensors(ByteWriter& w, const std::vector<Tensor>& ts) {
  if (ts.size() > UINT16_MAX) throw Error(ErrorCode::kMessageTooLarge, "too many tensors");
  w.u16(static_cast<std::uint16_t>(ts.size()));
  for (const auto& t : ts) encode_tensor(w, t);
}

std::vector<Tensor> get_tensors(ByteReader& r) {
  std::uint16_t n = r.u16();
  std::vector<Tensor> out;
  for (std::uint16_t i = 0; i < n; ++i) out.push_back(decode_tensor(r));
  return out;
}

}  // namespace

Bytes encode_request(const GenOpRequest& r) {
  ByteWriter w;
  w.raw(ByteView(r.plan_hash));
  put_tensors(w, r.inputs);
  return w.take();
}

GenOpRequest decode_request(ByteView body) {
  ByteReader r(body);
  GenOpRequest req;
  ByteView hash = r.raw(32);
  std::copy(hash.begin(), hash.end(), req.plan_hash.begin());
  req.inputs = get_tensors(r);
  r.expect_end("request");
  return req;
}

Bytes encode_response(const GenOpResponse& resp) {
  ByteWriter w;
  put_tensors(w, resp.outputs);
  w.u64(resp.timing.inference_micros);
  w.u64(resp.timing.deserialize_micros);
  w.u64(resp.timing.serialize_micros);
  return w.take();
}

GenOpResponse decode_response(ByteView body) {
  ByteReader r(body);
  GenOpResponse resp;
  resp.outputs = get_tensors(r);
  resp.timing.inference_micros = r.u64();
  resp.timing.deserialize_micros = r.u64();
  resp.timing.serialize_micros = r.u64();
  r.expect_end("response");
  return resp;
}

Bytes encode_error(const ErrorBody& e) {
  ByteWriter w;
  w.u16(static_cast<std::uint16_t>(e.code));
  w.raw(std::as_bytes(std::span(e.message.data(), e.message.size())));
  return w.take();
}

ErrorBody decode_error(ByteView body) {
  ByteReader r(body);
  ErrorBody e;
  std::uint16_t raw = r.u16();
  if (!error_code_from_u16(raw, &e.code)) {
    throw Error(ErrorCode::kMalformedFrame, "unknown error code " + std::to_string(raw));
  }
  ByteView msg = r.raw(r.remaining());
  e.message.assign(msg.begin(), msg.end());
  return e;
}

Bytes encode_plan_list(const std::vector<Digest>& hashes) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(hashes.size()));
  for (const auto& h : hashes) w.raw(ByteView(h));
  return w.take();
}

std::vector<Digest> decode_plan_list(ByteView body) {
  ByteReader r(body);
  std::uint32_t n = r.u32();
  if (static_cast<std::uint64_t>(n) * 32 != r.remaining()) {
    throw Error(ErrorCode::kMalformedFrame, "plan list length mismatch");
  }
  std::vector<Digest> out(n);
  for (auto& d : out) {
    ByteView b = r.raw(32);
    std::copy(b.begin(), b.end(), d.begin());
  }
  return out;
}

void raise_if_error(const Frame& f) {
  if (f.type != MsgType::kError) return;
  ErrorBody e = decode_error(f.body);
  throw Error(e.code, "remote: " + e.message);
}

}  // namespace genop::wire
