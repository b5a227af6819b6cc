// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "genop/core/bytes.hpp"

namespace genop::wire {

inline constexpr std::uint16_t kWireVersion = 1;
inline constexpr std::size_t kFrameHeaderBytes = 19;  // 4 + 2 + 1 + 8 + 4
inline constexpr std::size_t kDefaultMaxMessageBytes = 64u << 20;

enum class MsgType : std::uint8_t {
  kInferRequest = 1,
  kInferResponse = 2,
  kError = 3,
  kPing = 4,
  kPong = 5,
  kListPlansRequest = 6,
  kListPlansResponse = 7,
};

std::string_view msg_type_name(MsgType t);

struct Frame {
  MsgType type = MsgType::kPing;
  std::uint64_t request_id = 0;
  Bytes body;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct FrameHeader {
  MsgType type = MsgType::kPing;
  std::uint64_t request_id = 0;
  std::uint32_t body_len = 0;
};

// "GOWP" | u16 version | u8 msg_type | u64 request_id | u32 body_len | body
Bytes encode_frame(const Frame& f);

// Validates magic, version, msg_type and body_len <= max_message_bytes.
// Needs exactly kFrameHeaderBytes.
FrameHeader decode_frame_header(ByteView header,
                                std::size_t max_message_bytes = kDefaultMaxMessageBytes);

// Decodes one complete frame; trailing bytes are MALFORMED_FRAME.
Frame decode_frame(ByteView bytes, std::size_t max_message_bytes = kDefaultMaxMessageBytes);

// Incremental decoder for a byte stream delivered in arbitrary chunks. The
// header is validated before any body storage is reserved.
class FrameDecoder {
 public:
  explicit FrameDecoder(std::size_t max_message_bytes = kDefaultMaxMessageBytes)
      : max_message_bytes_(max_message_bytes) {}

  void feed(ByteView chunk);
  // Next complete frame, if any. Throws on a bad header; the decoder is
  // unusable afterwards.
  std::optional<Frame> next();
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::size_t max_message_bytes_;
  Bytes buffer_;
  std::optional<FrameHeader> header_;
};

}  // namespace genop::wire
