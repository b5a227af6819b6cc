// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "genop/core/tensor.hpp"

namespace genop {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Little-endian append-only encoder.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v); }
  void u32(std::uint32_t v) { put_le(v); }
  void u64(std::uint64_t v) { put_le(v); }
  void i32(std::int32_t v) { put_le(static_cast<std::uint32_t>(v)); }
  void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void raw(std::span<const std::byte> b) {
    auto p = reinterpret_cast<const std::uint8_t*>(b.data());
    out_.insert(out_.end(), p, p + b.size());
  }

  std::size_t size() const { return out_.size(); }
  Bytes& buffer() { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  template <typename T>
  void put_le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

// Bounds-checked little-endian decoder. Every read past the end throws
// MALFORMED_FRAME; nothing is read beyond the view it was given.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::uint8_t u8() { return get_le<std::uint8_t>(); }
  std::uint16_t u16() { return get_le<std::uint16_t>(); }
  std::uint32_t u32() { return get_le<std::uint32_t>(); }
  std::uint64_t u64() { return get_le<std::uint64_t>(); }
  std::int32_t i32() { return static_cast<std::int32_t>(get_le<std::uint32_t>()); }
  ByteView raw(std::size_t n);

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }
  bool at_end() const { return pos_ == data_.size(); }
  // Throws MALFORMED_FRAME when bytes are left over.
  void expect_end(const char* what) const;

 private:
  template <typename T>
  T get_le() {
    auto b = raw(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(b[i]) << (8 * i));
    return v;
  }
  ByteView data_;
  std::size_t pos_ = 0;
};

// Tensor encoding shared by the wire protocol, plan files and golden files:
// dtype code u8, ndim u8, dims u64 each, raw payload bytes.
void encode_tensor(ByteWriter& w, const Tensor& t);
Tensor decode_tensor(ByteReader& r);
void encode_spec(ByteWriter& w, const TensorSpec& s);
TensorSpec decode_spec(ByteReader& r);

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);

// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(ByteView data);
  void update(std::span<const std::byte> data);
  Digest finish();

 private:
  void* ctx_;
};
std::string to_hex(ByteView data);
inline std::string to_hex(const Digest& d) { return to_hex(ByteView(d)); }
// Throws MALFORMED_FRAME unless text is exactly 64 hex digits.
Digest digest_from_hex(std::string_view text);

// I/O failures throw BACKEND_FAILURE.
Bytes read_file(const std::string& path);
void write_file(const std::string& path, ByteView data);

}  // namespace genop
