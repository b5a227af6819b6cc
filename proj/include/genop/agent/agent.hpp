// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <list>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "genop/agent/plan_store.hpp"
#include "genop/interp/execute.hpp"
#include "genop/wire/messages.hpp"
#include "genop/wire/socket.hpp"
#include "genop/wire/transport.hpp"

namespace genop::agent {

struct AgentConfig {
  wire::Endpoint listen{"127.0.0.1", 0};
  std::string plan_store;
  // "edge-cpu" defaults to speed 1, "edge-gpu" to kEdgeGpuSpeed; an explicit
  // speed_factor overrides either.
  std::string backend = "edge-cpu";
  double speed_factor = 1.0;
  interp::KernelMode kernel_mode = interp::KernelMode::kParallel;
  std::size_t max_message_bytes = wire::kDefaultMaxMessageBytes;
  int max_concurrent_connections = 16;
  std::chrono::milliseconds request_timeout{30000};

  // Throws BACKEND_FAILURE on non-positive limits or speed.
  void validate() const;
};

inline constexpr double kEdgeGpuSpeed = 8.0;
double default_speed_for_backend(const std::string& backend);

// Frame-level request processing shared by the TCP server and in-process
// transports. Safe to call from many connections at once.
class Agent {
 public:
  Agent(AgentConfig cfg, std::shared_ptr<PlanStore> store, std::ostream* log = nullptr);

  // Encoded request frame in, encoded response frame out. Never throws:
  // every failure becomes an Error frame.
  Bytes handle_frame(ByteView frame);

  // Looks up the plan (rescanning once on a miss), validates the inputs and
  // executes. inference_micros is filled; the codec timings are measured by
  // handle_frame.
  wire::GenOpResponse handle_infer(const wire::GenOpRequest& req);

  std::vector<Digest> list_plans() const { return store_->list(); }

  const AgentConfig& config() const { return cfg_; }
  PlanStore& store() { return *store_; }
  wire::FrameHandler as_handler();

 private:
  struct LogRecord;
  void log(const LogRecord& r);

  AgentConfig cfg_;
  std::shared_ptr<PlanStore> store_;
  std::ostream* log_;
  std::mutex log_mu_;
};

// Builds an Error frame for the given request id.
Bytes error_frame(std::uint64_t request_id, ErrorCode code, const std::string& message);

// TCP front end: one thread per connection, requests on a connection are
// handled strictly in order.
class AgentServer {
 public:
  AgentServer(std::shared_ptr<Agent> agent);
  ~AgentServer();

  // Binds and starts accepting. Throws TRANSPORT_FAILURE if the address is
  // not bindable.
  void start();
  std::uint16_t port() const { return port_; }
  wire::Endpoint endpoint() const;

  // Stops accepting, lets in-flight requests finish (bounded by the request
  // timeout), closes every connection and joins all threads. Idempotent.
  void stop();
  // Blocks until stop() is called from another thread.
  void wait();

  int active_connections() const { return active_.load(); }
  std::uint64_t rejected_connections() const { return rejected_.load(); }

 private:
  struct Conn {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
    int fd;
  };
  void accept_loop();
  void serve(wire::Socket sock, std::shared_ptr<std::atomic<bool>> done);
  void reap(bool all);

  std::shared_ptr<Agent> agent_;
  wire::Socket listener_;
  std::uint16_t port_ = 0;
  std::thread acceptor_;
  std::atomic<bool> stopping_{false};
  std::atomic<int> active_{0};
  std::atomic<std::uint64_t> rejected_{0};
  std::mutex conns_mu_;
  std::list<Conn> conns_;
  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
  bool stopped_ = false;
};

}  // namespace genop::agent
