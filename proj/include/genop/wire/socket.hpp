// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "genop/core/bytes.hpp"
#include "genop/wire/frame.hpp"

namespace genop::wire {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  std::string to_string() const { return host + ":" + std::to_string(port); }
};

// "host:port"; throws TRANSPORT_FAILURE on a malformed address.
Endpoint parse_endpoint(const std::string& text);

// Owning file descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { reset(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset();
  // shutdown(2) both directions without closing; wakes blocked readers.
  void shutdown_both();

 private:
  int fd_ = -1;
};

using Deadline = std::chrono::steady_clock::time_point;

Socket connect_tcp(const Endpoint& ep, std::chrono::milliseconds timeout);
// Binds and listens; port 0 picks an ephemeral port.
Socket listen_tcp(const Endpoint& ep, int backlog = 64);
std::uint16_t local_port(const Socket& s);

// Throws TRANSPORT_FAILURE on error/EOF, TIMEOUT past the deadline.
void write_all(const Socket& s, ByteView data, Deadline deadline);
// Reads exactly out.size() bytes. Returns false on clean EOF before the first
// byte when allow_eof is set.
bool read_exact(const Socket& s, std::span<std::uint8_t> out, Deadline deadline,
                bool allow_eof = false);

// Reads one frame: header first, validated against max_message_bytes, then
// the body. Returns the full encoded frame, or nullopt on clean EOF at a
// frame boundary.
std::optional<Bytes> read_frame(const Socket& s, std::size_t max_message_bytes,
                                Deadline deadline);

}  // namespace genop::wire
