// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "genop/wire/frame.hpp"
#include "genop/wire/socket.hpp"

namespace genop::wire {

// One conversation: each roundtrip() sends exactly one encoded request frame
// and returns exactly one encoded response frame. Not thread-safe.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Bytes roundtrip(ByteView request_frame) = 0;
  virtual void close() = 0;
};

inline constexpr std::chrono::milliseconds kDefaultTimeout{30000};

class TcpTransport : public Transport {
 public:
  // Throws TRANSPORT_FAILURE if nothing is listening.
  TcpTransport(const Endpoint& ep, std::chrono::milliseconds timeout = kDefaultTimeout,
               std::size_t max_message_bytes = kDefaultMaxMessageBytes);

  Bytes roundtrip(ByteView request_frame) override;
  void close() override { socket_.reset(); }

 private:
  Socket socket_;
  std::chrono::milliseconds timeout_;
  std::size_t max_message_bytes_;
};

// Encoded request frame in, encoded response frame out.
using FrameHandler = std::function<Bytes(ByteView)>;

// In-process stand-in for a VSOCK channel: frames are handed to a handler
// registered under a name, with no copying through the kernel.
class InprocTransport : public Transport {
 public:
  explicit InprocTransport(FrameHandler handler) : handler_(std::move(handler)) {}
  // Looks `name` up in the registry; TRANSPORT_FAILURE if unbound.
  explicit InprocTransport(const std::string& name);

  Bytes roundtrip(ByteView request_frame) override;
  void close() override { handler_ = nullptr; }

 private:
  FrameHandler handler_;
};

class InprocRegistry {
 public:
  static InprocRegistry& instance();

  void bind(const std::string& name, FrameHandler handler);
  void unbind(const std::string& name);
  FrameHandler lookup(const std::string& name) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, FrameHandler> handlers_;
};

// Records frame counts in each direction; forwards everything.
class CountingTransport : public Transport {
 public:
  explicit CountingTransport(std::unique_ptr<Transport> inner) : inner_(std::move(inner)) {}

  Bytes roundtrip(ByteView request_frame) override;
  void close() override { inner_->close(); }

  std::uint64_t requests_sent() const { return requests_.load(); }
  std::uint64_t responses_received() const { return responses_.load(); }

 private:
  std::unique_ptr<Transport> inner_;
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> responses_{0};
};

struct ShapedLink {
  std::uint64_t one_way_latency_micros = 0;
  std::uint64_t bandwidth_bytes_per_sec = 0;  // 0 = unlimited

  friend bool operator==(const ShapedLink&, const ShapedLink&) = default;
};

// latency + ceil(n * 10^6 / bandwidth), in microseconds.
std::uint64_t shaped_delay_micros(const ShapedLink& link, std::uint64_t message_bytes);

// Delays each direction by shaped_delay_micros of the frame size. Content is
// never modified.
class ShapedTransport : public Transport {
 public:
  using Sleeper = std::function<void(std::chrono::microseconds)>;

  ShapedTransport(std::unique_ptr<Transport> inner, ShapedLink link, Sleeper sleeper = {});

  Bytes roundtrip(ByteView request_frame) override;
  void close() override { inner_->close(); }

  const ShapedLink& link() const { return link_; }
  // Total simulated delay applied so far.
  std::uint64_t delayed_micros() const { return delayed_micros_; }

 private:
  std::unique_ptr<Transport> inner_;
  ShapedLink link_;
  Sleeper sleeper_;
  std::uint64_t delayed_micros_ = 0;
};

}  // namespace genop::wire
