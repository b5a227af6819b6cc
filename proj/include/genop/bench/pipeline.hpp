// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "genop/agent/agent.hpp"
#include "genop/bench/scenario.hpp"
#include "genop/runtime/session.hpp"
#include "genop/telemetry/latency.hpp"
#include "genop/telemetry/power.hpp"
#include "genop/telemetry/summary.hpp"

namespace genop::bench {

struct FrameRecord {
  std::uint64_t index = 0;
  // Microseconds since the start of the run.
  std::int64_t t_acquire_us = 0;
  std::int64_t t_publish_us = 0;
  telemetry::LatencyBreakdown breakdown;
  bool ok = true;
  std::string error;   // "<CODE>: detail" for failed frames
  std::string result;  // published record
};

struct BenchReport {
  std::string scenario_echo;
  std::string placement;
  std::vector<FrameRecord> frames;
  // Over successful frames only.
  telemetry::Summary summary;
  std::size_t frame_errors = 0;
  bool aborted = false;
  bool accounting_ok = true;
  bool sequential_ok = true;
  // SHA-256 (hex) over the encoded output tensors of every frame in order.
  std::string equivalence_digest;
  // One published record per line.
  std::string results_log;

  bool passed() const {
    return accounting_ok && sequential_ok && !aborted && summary.frames > 0;
  }
};

struct PipelineHooks {
  // Plan store used to resolve the model and read its input spec; loaded
  // from the scenario's plan_store when empty.
  std::shared_ptr<agent::PlanStore> store;
  runtime::SessionOptions session;
};

// Strictly sequential acquire -> preprocess -> infer -> postprocess ->
// publish loop. A scenario carrying replay constants is rejected
// (MALFORMED_FRAME); use run_replay for those.
BenchReport run_pipeline(const Scenario& s, PipelineHooks hooks = {});

// An Agent served over the in-process transport under `name` for the
// lifetime of the object. When a tracker is given, the edge side is marked
// busy while a request is being handled.
class EdgeHost {
 public:
  EdgeHost(std::string name, std::shared_ptr<agent::PlanStore> store, double speed_factor,
           std::shared_ptr<telemetry::ActivityTracker> tracker = nullptr);
  ~EdgeHost();
  EdgeHost(const EdgeHost&) = delete;
  EdgeHost& operator=(const EdgeHost&) = delete;

  const std::string& name() const { return name_; }
  // Remote inproc placement pointing at this host.
  runtime::RuntimeConfig config(std::optional<wire::ShapedLink> shaping = std::nullopt) const;

 private:
  std::string name_;
  std::shared_ptr<agent::Agent> agent_;
};

// Transport decorator that marks the robot idle while it waits for the
// reply, so robot-side busy time covers only its own work.
std::unique_ptr<wire::Transport> track_idle_while_waiting(
    std::unique_ptr<wire::Transport> inner, std::shared_ptr<telemetry::ActivityTracker> robot);

}  // namespace genop::bench
