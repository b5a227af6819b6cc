// SPDX-License-Identifier: Apache-2.0
#include "genop/agent/agent.hpp"

#include <poll.h>
#include <sys/socket.h>

#include <cmath>
#include <iostream>

namespace genop::agent {

using Clock = std::chrono::steady_clock;

namespace {

std::int64_t micros_since(Clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t).count();
}

}  // namespace

void AgentConfig::validate() const {
  if (!(speed_factor > 0.0) || !std::isfinite(speed_factor)) {
    throw Error(ErrorCode::kBackendFailure, "speed_factor must be > 0");
  }
  if (max_message_bytes == 0 || max_concurrent_connections <= 0 || request_timeout.count() <= 0) {
    throw Error(ErrorCode::kBackendFailure, "agent limits must be > 0");
  }
  if (backend != "edge-cpu" && backend != "edge-gpu") {
    throw Error(ErrorCode::kBackendFailure, "unknown backend '" + backend + "'");
  }
}

double default_speed_for_backend(const std::string& backend) {
  return backend == "edge-gpu" ? kEdgeGpuSpeed : 1.0;
}

Bytes error_frame(std::uint64_t request_id, ErrorCode code, const std::string& message) {
  return wire::encode_frame(
      {wire::MsgType::kError, request_id, wire::encode_error({code, message})});
}

// Fields, tab separated, in this order:
//   request_id msg_type plan_hash request_bytes response_bytes
//   deserialize_us inference_us serialize_us outcome
struct Agent::LogRecord {
  std::uint64_t request_id = 0;
  std::string msg_type = "-";
  std::string plan_hash = "-";
  std::size_t request_bytes = 0;
  std::size_t response_bytes = 0;
  std::uint64_t deserialize_us = 0;
  std::uint64_t inference_us = 0;
  std::uint64_t serialize_us = 0;
  std::string outcome = "ok";
};

Agent::Agent(AgentConfig cfg, std::shared_ptr<PlanStore> store, std::ostream* log)
    : cfg_(std::move(cfg)), store_(std::move(store)), log_(log) {
  cfg_.validate();
}

void Agent::log(const LogRecord& r) {
  if (!log_) return;
  std::lock_guard lock(log_mu_);
  *log_ << r.request_id << '\t' << r.msg_type << '\t' << r.plan_hash << '\t' << r.request_bytes
        << '\t' << r.response_bytes << '\t' << r.deserialize_us << '\t' << r.inference_us << '\t'
        << r.serialize_us << '\t' << r.outcome << '\n';
  log_->flush();
}

wire::GenOpResponse Agent::handle_infer(const wire::GenOpRequest& req) {
  auto plan = store_->require(req.plan_hash);
  interp::check_inputs(plan->input_specs, req.inputs);
  interp::ExecOptions opts;
  opts.speed_factor = cfg_.speed_factor;
  opts.mode = cfg_.kernel_mode;
  auto report = interp::execute_plan(*plan, req.inputs, opts);
  wire::GenOpResponse resp;
  resp.outputs = std::move(report.outputs);
  resp.timing.inference_micros = static_cast<std::uint64_t>(report.total_micros);
  return resp;
}

Bytes Agent::handle_frame(ByteView frame_bytes) {
  LogRecord rec;
  rec.request_bytes = frame_bytes.size();
  Bytes out;
  try {
    wire::Frame frame = wire::decode_frame(frame_bytes, cfg_.max_message_bytes);
    rec.request_id = frame.request_id;
    rec.msg_type = std::string(wire::msg_type_name(frame.type));
    try {
      switch (frame.type) {
        case wire::MsgType::kPing:
          out = wire::encode_frame({wire::MsgType::kPong, frame.request_id, {}});
          break;
        case wire::MsgType::kListPlansRequest:
          store_->rescan();
          out = wire::encode_frame({wire::MsgType::kListPlansResponse, frame.request_id,
                                    wire::encode_plan_list(list_plans())});
          break;
        case wire::MsgType::kInferRequest: {
          auto t0 = Clock::now();
          wire::GenOpRequest req = wire::decode_request(frame.body);
          const auto deser = micros_since(t0);
          rec.plan_hash = to_hex(req.plan_hash);
          wire::GenOpResponse resp = handle_infer(req);
          resp.timing.deserialize_micros = static_cast<std::uint64_t>(deser);
          auto t1 = Clock::now();
          Bytes body = wire::encode_response(resp);
          const auto ser = static_cast<std::uint64_t>(micros_since(t1));
          // serialize_micros is the body's last u64; patch it in place.
          for (int i = 0; i < 8; ++i) {
            body[body.size() - 8 + i] = static_cast<std::uint8_t>(ser >> (8 * i));
          }
          if (body.size() > cfg_.max_message_bytes) {
            throw Error(ErrorCode::kMessageTooLarge,
                        "response of " + std::to_string(body.size()) + " bytes exceeds limit");
          }
          rec.deserialize_us = resp.timing.deserialize_micros;
          rec.inference_us = resp.timing.inference_micros;
          rec.serialize_us = ser;
          out = wire::encode_frame({wire::MsgType::kInferResponse, frame.request_id, std::move(body)});
          break;
        }
        default:
          throw Error(ErrorCode::kMalformedFrame, "agent does not accept " +
                                                      std::string(wire::msg_type_name(frame.type)));
      }
    } catch (const Error& e) {
      rec.outcome = std::string(error_code_name(e.code()));
      out = error_frame(frame.request_id, e.code(), e.detail());
    }
  } catch (const Error& e) {
    rec.outcome = std::string(error_code_name(e.code()));
    out = error_frame(0, e.code(), e.detail());
  } catch (const std::exception& e) {
    rec.outcome = "BACKEND_FAILURE";
    out = error_frame(rec.request_id, ErrorCode::kBackendFailure, e.what());
  }
  rec.response_bytes = out.size();
  log(rec);
  return out;
}

wire::FrameHandler Agent::as_handler() {
  return [this](ByteView frame) { return handle_frame(frame); };
}

AgentServer::AgentServer(std::shared_ptr<Agent> agent) : agent_(std::move(agent)) {}

AgentServer::~AgentServer() { stop(); }

wire::Endpoint AgentServer::endpoint() const {
  wire::Endpoint ep = agent_->config().listen;
  if (ep.host.empty() || ep.host == "0.0.0.0") ep.host = "127.0.0.1";
  ep.port = port_;
  return ep;
}

void AgentServer::start() {
  listener_ = wire::listen_tcp(agent_->config().listen);
  port_ = wire::local_port(listener_);
  acceptor_ = std::thread([this] { accept_loop(); });
}

void AgentServer::accept_loop() {
  while (!stopping_.load()) {
    pollfd p{listener_.fd(), POLLIN, 0};
    int rc = ::poll(&p, 1, 50);
    reap(false);
    if (rc <= 0) continue;
    int fd = ::accept4(listener_.fd(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    wire::Socket sock(fd);
    if (active_.load() >= agent_->config().max_concurrent_connections) {
      ++rejected_;
      try {
        wire::write_all(sock,
                        error_frame(0, ErrorCode::kTransportFailure, "connection limit reached"),
                        Clock::now() + std::chrono::milliseconds(100));
      } catch (const Error&) {
      }
      continue;
    }
    ++active_;
    auto done = std::make_shared<std::atomic<bool>>(false);
    std::lock_guard lock(conns_mu_);
    int raw = sock.fd();
    conns_.push_back(Conn{std::thread(&AgentServer::serve, this, std::move(sock), done), done, raw});
  }
}

void AgentServer::serve(wire::Socket sock, std::shared_ptr<std::atomic<bool>> done) {
  const auto& cfg = agent_->config();
  try {
    while (!stopping_.load()) {
      pollfd p{sock.fd(), POLLIN, 0};
      int rc = ::poll(&p, 1, 50);
      if (rc == 0) continue;
      if (rc < 0) break;
      std::optional<Bytes> frame;
      try {
        frame = wire::read_frame(sock, cfg.max_message_bytes, Clock::now() + cfg.request_timeout);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kTransportFailure) break;
        // Bad header: the stream position is lost, so answer and hang up.
        wire::write_all(sock, error_frame(0, e.code(), e.detail()),
                        Clock::now() + cfg.request_timeout);
        break;
      }
      if (!frame) break;
      Bytes reply = agent_->handle_frame(*frame);
      wire::write_all(sock, reply, Clock::now() + cfg.request_timeout);
    }
  } catch (const std::exception& e) {
    std::cerr << "agent: connection dropped: " << e.what() << "\n";
  }
  sock.reset();
  --active_;
  done->store(true);
}

void AgentServer::reap(bool all) {
  std::list<Conn> finished;
  {
    std::lock_guard lock(conns_mu_);
    for (auto it = conns_.begin(); it != conns_.end();) {
      if (all || it->done->load()) {
        finished.splice(finished.end(), conns_, it++);
      } else {
        ++it;
      }
    }
  }
  for (auto& c : finished) c.thread.join();
}

void AgentServer::stop() {
  {
    std::lock_guard lock(stop_mu_);
    if (stopped_) return;
    stopped_ = true;
  }
  stopping_.store(true);
  if (acceptor_.joinable()) acceptor_.join();
  listener_.reset();
  // Connection threads notice stopping_ between requests; a request in
  // flight completes first.
  reap(true);
  stop_cv_.notify_all();
}

void AgentServer::wait() {
  std::unique_lock lock(stop_mu_);
  stop_cv_.wait(lock, [this] { return stopped_; });
}

}  // namespace genop::agent
