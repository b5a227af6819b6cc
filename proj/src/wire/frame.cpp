// SPDX-License-Identifier: Apache-2.0
#include "genop/wire/frame.hpp"

#include <algorithm>

namespace genop::wire {
namespace {
constexpr std::uint8_t kMagic[4] = {'G', 'O', 'W', 'P'};
}

std::string_view msg_type_name(MsgType t) {
  switch (t) {
    case MsgType::kInferRequest: return "InferRequest";
    case MsgType::kInferResponse: return "InferResponse";
    case MsgType::kError: return "Error";
    case MsgType::kPing: return "Ping";
    case MsgType::kPong: return "Pong";
    case MsgType::kListPlansRequest: return "ListPlansRequest";
    case MsgType::kListPlansResponse: return "ListPlansResponse";
  }
  return "?";
}

Bytes encode_frame(const Frame& f) {
  if (f.body.size() > UINT32_MAX) {
    throw Error(ErrorCode::kMessageTooLarge, "body does not fit a u32 length");
  }
  ByteWriter w;
  w.buffer().reserve(kFrameHeaderBytes + f.body.size());
  w.raw(ByteView(kMagic));
  w.u16(kWireVersion);
  w.u8(static_cast<std::uint8_t>(f.type));
  w.u64(f.request_id);
  w.u32(static_cast<std::uint32_t>(f.body.size()));
  w.raw(ByteView(f.body));
  return w.take();
}

FrameHeader decode_frame_header(ByteView header, std::size_t max_message_bytes) {
  if (header.size() < kFrameHeaderBytes) {
    throw Error(ErrorCode::kMalformedFrame, "truncated frame header");
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), header.begin())) {
    throw Error(ErrorCode::kMalformedFrame, "bad frame magic");
  }
  ByteReader r(header.first(kFrameHeaderBytes));
  r.raw(4);
  std::uint16_t version = r.u16();
  if (version != kWireVersion) {
    throw Error(ErrorCode::kProtocolVersionMismatch,
                "peer speaks version " + std::to_string(version) + ", expected " +
                    std::to_string(kWireVersion));
  }
  std::uint8_t type = r.u8();
  if (type < 1 || type > 7) {
    throw Error(ErrorCode::kMalformedFrame, "unknown msg_type " + std::to_string(type));
  }
  FrameHeader h;
  h.type = static_cast<MsgType>(type);
  h.request_id = r.u64();
  h.body_len = r.u32();
  if (h.body_len > max_message_bytes) {
    throw Error(ErrorCode::kMessageTooLarge, "body_len " + std::to_string(h.body_len) +
                                                 " exceeds limit " +
                                                 std::to_string(max_message_bytes));
  }
  return h;
}

Frame decode_frame(ByteView bytes, std::size_t max_message_bytes) {
  FrameHeader h = decode_frame_header(bytes, max_message_bytes);
  ByteReader r(bytes.subspan(kFrameHeaderBytes));
  ByteView body = r.raw(h.body_len);
  r.expect_end("frame body");
  return Frame{h.type, h.request_id, Bytes(body.begin(), body.end())};
}

void FrameDecoder::feed(ByteView chunk) { buffer_.insert(buffer_.end(), chunk.begin(), chunk.end()); }

std::optional<Frame> FrameDecoder::next() {
  if (!header_) {
    if (buffer_.size() < kFrameHeaderBytes) return std::nullopt;
    header_ = decode_frame_header(buffer_, max_message_bytes_);
  }
  const std::size_t total = kFrameHeaderBytes + header_->body_len;
  if (buffer_.size() < total) return std::nullopt;
  Frame f{header_->type, header_->request_id,
          Bytes(buffer_.begin() + kFrameHeaderBytes, buffer_.begin() + total)};
  buffer_.erase(buffer_.begin(), buffer_.begin() + total);
  header_.reset();
  return f;
}

}  // namespace genop::wire
