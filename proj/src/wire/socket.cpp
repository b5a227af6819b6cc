// SPDX-License-Identifier: Apache-2.0
#include "genop/wire/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace genop::wire {

using Clock = std::chrono::steady_clock;

namespace {

[[noreturn]] void fail_errno(const std::string& what) {
  throw Error(ErrorCode::kTransportFailure, what + ": " + std::strerror(errno));
}

int remaining_ms(Deadline deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  if (left.count() <= 0) return 0;
  return left.count() > INT32_MAX ? INT32_MAX : static_cast<int>(left.count());
}

void wait_ready(int fd, short events, Deadline deadline) {
  for (;;) {
    pollfd p{fd, events, 0};
    int rc = ::poll(&p, 1, remaining_ms(deadline));
    if (rc > 0) return;
    if (rc == 0) throw Error(ErrorCode::kTimeout, "deadline exceeded");
    if (errno != EINTR) fail_errno("poll");
  }
}

sockaddr_in resolve(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  std::string host = ep.host.empty() || ep.host == "localhost" ? "127.0.0.1" : ep.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw Error(ErrorCode::kTransportFailure, "cannot resolve host '" + ep.host + "'");
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return addr;
}

}  // namespace

Endpoint parse_endpoint(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw Error(ErrorCode::kTransportFailure, "endpoint '" + text + "' is not host:port");
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  const char* first = text.data() + colon + 1;
  const char* last = text.data() + text.size();
  unsigned port = 0;
  auto [ptr, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || ptr != last || port > 65535 || first == last) {
    throw Error(ErrorCode::kTransportFailure, "bad port in endpoint '" + text + "'");
  }
  ep.port = static_cast<std::uint16_t>(port);
  return ep;
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    reset();
    fd_ = other.release();
  }
  return *this;
}

void Socket::reset() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Socket::shutdown_both() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Socket connect_tcp(const Endpoint& ep, std::chrono::milliseconds timeout) {
  sockaddr_in addr = resolve(ep);
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid()) fail_errno("socket");
  int flags = ::fcntl(s.fd(), F_GETFL);
  ::fcntl(s.fd(), F_SETFL, flags | O_NONBLOCK);
  int rc = ::connect(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  if (rc != 0) {
    if (errno != EINPROGRESS) fail_errno("connect " + ep.to_string());
    wait_ready(s.fd(), POLLOUT, Clock::now() + timeout);
    int err = 0;
    socklen_t len = sizeof err;
    ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) {
      errno = err;
      fail_errno("connect " + ep.to_string());
    }
  }
  int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return s;
}

Socket listen_tcp(const Endpoint& ep, int backlog) {
  sockaddr_in addr = resolve(ep);
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid()) fail_errno("socket");
  int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    fail_errno("bind " + ep.to_string());
  }
  if (::listen(s.fd(), backlog) != 0) fail_errno("listen");
  return s;
}

std::uint16_t local_port(const Socket& s) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) fail_errno("getsockname");
  return ntohs(addr.sin_port);
}

void write_all(const Socket& s, ByteView data, Deadline deadline) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::send(s.fd(), data.data() + off, data.size() - off, MSG_NOSIGNAL | MSG_DONTWAIT);
    if (n > 0) {
      off += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      wait_ready(s.fd(), POLLOUT, deadline);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    fail_errno("send");
  }
}

bool read_exact(const Socket& s, std::span<std::uint8_t> out, Deadline deadline, bool allow_eof) {
  std::size_t off = 0;
  while (off < out.size()) {
    ssize_t n = ::recv(s.fd(), out.data() + off, out.size() - off, MSG_DONTWAIT);
    if (n > 0) {
      off += static_cast<std::size_t>(n);
      continue;
    }
    if (n == 0) {
      if (off == 0 && allow_eof) return false;
      throw Error(ErrorCode::kTransportFailure, "connection closed by peer");
    }
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      wait_ready(s.fd(), POLLIN, deadline);
      continue;
    }
    if (errno == EINTR) continue;
    fail_errno("recv");
  }
  return true;
}

std::optional<Bytes> read_frame(const Socket& s, std::size_t max_message_bytes, Deadline deadline) {
  Bytes frame(kFrameHeaderBytes);
  if (!read_exact(s, frame, deadline, /*allow_eof=*/true)) return std::nullopt;
  FrameHeader h = decode_frame_header(frame, max_message_bytes);
  frame.resize(kFrameHeaderBytes + h.body_len);
  read_exact(s, std::span(frame).subspan(kFrameHeaderBytes), deadline);
  return frame;
}

}  // namespace genop::wire
