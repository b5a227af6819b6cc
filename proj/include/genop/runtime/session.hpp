// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "genop/agent/plan_store.hpp"
#include "genop/runtime/config.hpp"
#include "genop/telemetry/latency.hpp"
#include "genop/wire/messages.hpp"

namespace genop::runtime {

struct InferResult {
  std::vector<Tensor> outputs;
  // Only the serialize/network/inference/deserialize fields are set here;
  // the pipeline owns the rest.
  telemetry::LatencyBreakdown breakdown;
};

struct SessionOptions {
  // Hook to wrap the remote transport (counting, extra shaping). Applied
  // after configured shaping.
  std::function<std::unique_ptr<wire::Transport>(std::unique_ptr<wire::Transport>)> wrap_transport;
  // Reuse an already loaded store for Local placement instead of scanning
  // cfg.plan_store.
  std::shared_ptr<agent::PlanStore> store;
};

// The single inference entry point. Where infer() runs is decided entirely
// by the placement in RuntimeConfig; callers never branch on it.
//
// A Session is sequential: one infer() at a time. Distinct sessions are
// independent.
class Session {
 public:
  // Local: loads and verifies the plan from the plan store.
  // Remote: connects, exchanges Ping/Pong and confirms the agent lists the
  // plan. Throws MODEL_NOT_FOUND, TRANSPORT_FAILURE,
  // PROTOCOL_VERSION_MISMATCH.
  static Session open(const RuntimeConfig& cfg, const Digest& plan_hash,
                      SessionOptions options = {});

  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  ~Session();

  // Outputs are bitwise identical for every placement. Throws
  // TRANSPORT_FAILURE after close().
  InferResult infer(std::span<const Tensor> inputs);

  // Idempotent.
  void close();

  std::uint64_t id() const;
  const Placement& placement() const;
  const Digest& plan_hash() const;
  bool is_open() const;

 private:
  struct State;
  explicit Session(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;
};

}  // namespace genop::runtime
