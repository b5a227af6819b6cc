// SPDX-License-Identifier: Apache-2.0
#include "genop/core/bytes.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

namespace genop {

ByteView ByteReader::raw(std::size_t n) {
  if (n > remaining()) {
    throw Error(ErrorCode::kMalformedFrame, "truncated: need " + std::to_string(n) +
                                                " bytes at offset " + std::to_string(pos_) +
                                                ", have " + std::to_string(remaining()));
  }
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::expect_end(const char* what) const {
  if (!at_end()) {
    throw Error(ErrorCode::kMalformedFrame,
                std::to_string(remaining()) + " trailing bytes after " + what);
  }
}

void encode_spec(ByteWriter& w, const TensorSpec& s) {
  w.u8(static_cast<std::uint8_t>(s.dtype));
  w.u8(static_cast<std::uint8_t>(s.shape.size()));
  for (std::int64_t d : s.shape) w.u64(static_cast<std::uint64_t>(d));
}

TensorSpec decode_spec(ByteReader& r) {
  TensorSpec s;
  std::uint8_t code = r.u8();
  if (!dtype_from_code(code, &s.dtype)) {
    throw Error(ErrorCode::kMalformedFrame, "unknown dtype code " + std::to_string(code));
  }
  std::uint8_t ndim = r.u8();
  if (ndim == 0 || ndim > kMaxRank) {
    throw Error(ErrorCode::kMalformedFrame, "bad rank " + std::to_string(ndim));
  }
  s.shape.reserve(ndim);
  for (std::uint8_t i = 0; i < ndim; ++i) {
    std::uint64_t d = r.u64();
    if (d == 0 || d > static_cast<std::uint64_t>(INT64_MAX)) {
      throw Error(ErrorCode::kMalformedFrame, "bad dimension " + std::to_string(d));
    }
    s.shape.push_back(static_cast<std::int64_t>(d));
  }
  return s;
}

void encode_tensor(ByteWriter& w, const Tensor& t) {
  encode_spec(w, t.spec());
  w.raw(t.bytes());
}

Tensor decode_tensor(ByteReader& r) {
  TensorSpec s = decode_spec(r);
  std::int64_t n = 0;
  try {
    n = tensor_num_bytes(s.dtype, s.shape);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedFrame, e.detail());
  }
  // Checked against the remaining input before anything is allocated.
  ByteView payload = r.raw(static_cast<std::size_t>(n));
  return Tensor::create(s.dtype, std::move(s.shape), std::as_bytes(payload));
}

Digest sha256(ByteView data) {
  Digest d;
  SHA256(data.data(), data.size(), d.data());
  return d;
}

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr);
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256::update(ByteView data) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
}

void Sha256::update(std::span<const std::byte> data) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
}

Digest Sha256::finish() {
  Digest d{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), d.data(), &len);
  EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr);
  return d;
}

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    s += kDigits[b >> 4];
    s += kDigits[b & 0xf];
  }
  return s;
}

Digest digest_from_hex(std::string_view text) {
  if (text.size() != 64) {
    throw Error(ErrorCode::kMalformedFrame, "digest must be 64 hex digits");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Digest d{};
  for (std::size_t i = 0; i < 32; ++i) {
    int hi = nibble(text[2 * i]);
    int lo = nibble(text[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::kMalformedFrame, "non-hex digit in digest");
    d[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return d;
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kBackendFailure, "cannot open " + path + ": " + std::strerror(errno));
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kBackendFailure, "cannot write " + path + ": " + std::strerror(errno));
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kBackendFailure, "write failed: " + path);
}

}  // namespace genop
