// SPDX-License-Identifier: Apache-2.0
#include "genop/runtime/session.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iostream>

#include "genop/interp/execute.hpp"

namespace genop::runtime {

using Clock = std::chrono::steady_clock;

namespace {

std::atomic<std::uint64_t> g_next_session_id{1};

std::int64_t micros_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration_cast<std::chrono::microseconds>(b - a).count();
}

std::unique_ptr<wire::Transport> make_transport(const RuntimeConfig& cfg,
                                                const RemotePlacement& remote) {
  std::unique_ptr<wire::Transport> t;
  if (remote.transport == TransportKind::kTcp) {
    t = std::make_unique<wire::TcpTransport>(wire::parse_endpoint(remote.endpoint), cfg.timeout,
                                             cfg.max_message_bytes);
  } else {
    t = std::make_unique<wire::InprocTransport>(remote.endpoint);
  }
  if (remote.shaping) {
    t = std::make_unique<wire::ShapedTransport>(std::move(t), *remote.shaping);
  }
  return t;
}

}  // namespace

struct Session::State {
  std::uint64_t id = 0;
  RuntimeConfig cfg;
  Digest plan_hash{};
  std::shared_ptr<const planc::ModelPlan> plan;  // Local
  std::unique_ptr<wire::Transport> transport;    // Remote
  std::uint64_t next_request_id = 1;
  bool open = false;

  wire::Frame call(wire::MsgType type, Bytes body, wire::MsgType expect) {
    const std::uint64_t rid = next_request_id++;
    Bytes reply = transport->roundtrip(wire::encode_frame({type, rid, std::move(body)}));
    wire::Frame f = wire::decode_frame(reply, cfg.max_message_bytes);
    wire::raise_if_error(f);
    if (f.type != expect || f.request_id != rid) {
      throw Error(ErrorCode::kMalformedFrame, "unexpected " +
                                                  std::string(wire::msg_type_name(f.type)) +
                                                  " for request " + std::to_string(rid));
    }
    return f;
  }
};

Session::Session(std::unique_ptr<State> state) : state_(std::move(state)) {}
Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;
Session::~Session() { close(); }

Session Session::open(const RuntimeConfig& cfg, const Digest& plan_hash, SessionOptions options) {
  auto s = std::make_unique<State>();
  s->id = g_next_session_id++;
  s->cfg = cfg;
  s->plan_hash = plan_hash;

  if (!is_remote(cfg.placement)) {
    auto store = options.store ? options.store : std::make_shared<agent::PlanStore>(cfg.plan_store);
    s->plan = store->require(plan_hash);
  } else {
    const auto& remote = std::get<RemotePlacement>(cfg.placement);
    s->transport = make_transport(cfg, remote);
    if (options.wrap_transport) s->transport = options.wrap_transport(std::move(s->transport));
    s->call(wire::MsgType::kPing, {}, wire::MsgType::kPong);
    wire::Frame list = s->call(wire::MsgType::kListPlansRequest, {}, wire::MsgType::kListPlansResponse);
    auto hashes = wire::decode_plan_list(list.body);
    if (std::find(hashes.begin(), hashes.end(), plan_hash) == hashes.end()) {
      throw Error(ErrorCode::kModelNotFound,
                  "agent at " + remote.endpoint + " does not hold plan " + to_hex(plan_hash));
    }
  }
  s->open = true;
  return Session(std::move(s));
}

InferResult Session::infer(std::span<const Tensor> inputs) {
  if (!state_ || !state_->open) throw Error(ErrorCode::kTransportFailure, "session is closed");
  State& s = *state_;
  InferResult result;

  if (s.plan) {
    const auto& local = std::get<LocalPlacement>(s.cfg.placement);
    interp::ExecOptions opts;
    opts.speed_factor = local.speed_factor;
    opts.mode = local.kernel_mode;
    auto report = interp::execute_plan(*s.plan, inputs, opts);
    result.outputs = std::move(report.outputs);
    result.breakdown.inference_us = report.total_micros;
    return result;
  }

  const auto t0 = Clock::now();
  wire::GenOpRequest req;
  req.plan_hash = s.plan_hash;
  req.inputs.assign(inputs.begin(), inputs.end());
  const std::uint64_t rid = s.next_request_id++;
  Bytes frame = wire::encode_frame({wire::MsgType::kInferRequest, rid, wire::encode_request(req)});
  const auto t1 = Clock::now();
  Bytes reply = s.transport->roundtrip(frame);
  const auto t2 = Clock::now();
  wire::Frame f = wire::decode_frame(reply, s.cfg.max_message_bytes);
  wire::raise_if_error(f);
  if (f.type != wire::MsgType::kInferResponse || f.request_id != rid) {
    throw Error(ErrorCode::kMalformedFrame, "unexpected reply to infer request " + std::to_string(rid));
  }
  wire::GenOpResponse resp = wire::decode_response(f.body);
  const auto t3 = Clock::now();

  const auto& timing = resp.timing;
  const auto server_total = static_cast<std::int64_t>(
      timing.inference_micros + timing.deserialize_micros + timing.serialize_micros);
  auto& b = result.breakdown;
  b.inference_us = static_cast<std::int64_t>(timing.inference_micros);
  b.serialize_us = micros_between(t0, t1) + static_cast<std::int64_t>(timing.serialize_micros);
  b.deserialize_us = micros_between(t2, t3) + static_cast<std::int64_t>(timing.deserialize_micros);
  b.network_us = std::max<std::int64_t>(0, micros_between(t1, t2) - server_total);
  result.outputs = std::move(resp.outputs);
  return result;
}

void Session::close() {
  if (!state_ || !state_->open) return;
  state_->open = false;
  try {
    if (state_->transport) state_->transport->close();
  } catch (const std::exception& e) {
    std::cerr << "session " << state_->id << ": close failed: " << e.what() << "\n";
  }
  state_->transport.reset();
  state_->plan.reset();
}

std::uint64_t Session::id() const { return state_->id; }
const Placement& Session::placement() const { return state_->cfg.placement; }
const Digest& Session::plan_hash() const { return state_->plan_hash; }
bool Session::is_open() const { return state_ && state_->open; }

}  // namespace genop::runtime
