// SPDX-License-Identifier: Apache-2.0
#include "genop/wire/transport.hpp"

#include <thread>

namespace genop::wire {

using Clock = std::chrono::steady_clock;

TcpTransport::TcpTransport(const Endpoint& ep, std::chrono::milliseconds timeout,
                           std::size_t max_message_bytes)
    : socket_(connect_tcp(ep, timeout)), timeout_(timeout), max_message_bytes_(max_message_bytes) {}

Bytes TcpTransport::roundtrip(ByteView request_frame) {
  if (!socket_.valid()) throw Error(ErrorCode::kTransportFailure, "transport closed");
  const Deadline deadline = Clock::now() + timeout_;
  write_all(socket_, request_frame, deadline);
  auto frame = read_frame(socket_, max_message_bytes_, deadline);
  if (!frame) throw Error(ErrorCode::kTransportFailure, "connection closed by peer");
  return std::move(*frame);
}

InprocTransport::InprocTransport(const std::string& name)
    : handler_(InprocRegistry::instance().lookup(name)) {}

Bytes InprocTransport::roundtrip(ByteView request_frame) {
  if (!handler_) throw Error(ErrorCode::kTransportFailure, "transport closed");
  return handler_(request_frame);
}

InprocRegistry& InprocRegistry::instance() {
  static InprocRegistry registry;
  return registry;
}

void InprocRegistry::bind(const std::string& name, FrameHandler handler) {
  std::lock_guard lock(mu_);
  handlers_[name] = std::move(handler);
}

void InprocRegistry::unbind(const std::string& name) {
  std::lock_guard lock(mu_);
  handlers_.erase(name);
}

FrameHandler InprocRegistry::lookup(const std::string& name) const {
  std::lock_guard lock(mu_);
  auto it = handlers_.find(name);
  if (it == handlers_.end()) {
    throw Error(ErrorCode::kTransportFailure, "no in-process agent bound as '" + name + "'");
  }
  return it->second;
}

Bytes CountingTransport::roundtrip(ByteView request_frame) {
  ++requests_;
  Bytes out = inner_->roundtrip(request_frame);
  ++responses_;
  return out;
}

std::uint64_t shaped_delay_micros(const ShapedLink& link, std::uint64_t message_bytes) {
  if (link.bandwidth_bytes_per_sec == 0) return link.one_way_latency_micros;
  const unsigned __int128 scaled = static_cast<unsigned __int128>(message_bytes) * 1'000'000u;
  const unsigned __int128 bw = link.bandwidth_bytes_per_sec;
  const auto transfer = static_cast<std::uint64_t>((scaled + bw - 1) / bw);
  return link.one_way_latency_micros + transfer;
}

ShapedTransport::ShapedTransport(std::unique_ptr<Transport> inner, ShapedLink link, Sleeper sleeper)
    : inner_(std::move(inner)), link_(link), sleeper_(std::move(sleeper)) {
  if (!sleeper_) {
    sleeper_ = [](std::chrono::microseconds d) { std::this_thread::sleep_for(d); };
  }
}

Bytes ShapedTransport::roundtrip(ByteView request_frame) {
  const auto up = shaped_delay_micros(link_, request_frame.size());
  sleeper_(std::chrono::microseconds(up));
  Bytes response = inner_->roundtrip(request_frame);
  const auto down = shaped_delay_micros(link_, response.size());
  sleeper_(std::chrono::microseconds(down));
  delayed_micros_ += up + down;
  return response;
}

}  // namespace genop::wire
