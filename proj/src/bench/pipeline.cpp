// SPDX-License-Identifier: Apache-2.0
#include "genop/bench/pipeline.hpp"

#include <chrono>
#include <deque>
#include <thread>

#include "genop/bench/imaging.hpp"
#include "genop/core/bytes.hpp"
#include "genop/core/error.hpp"

namespace genop::bench {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration_cast<std::chrono::microseconds>(b - a).count();
}

struct InputGeometry {
  int channels = 0;
  int height = 0;
  int width = 0;
};

InputGeometry input_geometry(const planc::ModelPlan& plan, const Scenario& s) {
  if (plan.input_specs.size() != 1) {
    throw Error(ErrorCode::kInvalidShape, "bench models take exactly one input");
  }
  const TensorSpec& spec = plan.input_specs[0];
  if (spec.dtype != DType::kF32 || spec.shape.size() != 4 || spec.shape[0] != 1) {
    throw Error(ErrorCode::kInvalidShape, "bench model input must be f32[1,C,H,W], got " + spec.to_string());
  }
  const int want_c = s.task == TaskKind::kVideo ? 3 * s.clip_frames : 3;
  if (spec.shape[1] != want_c) {
    throw Error(ErrorCode::kInvalidShape, "model expects " + std::to_string(spec.shape[1]) +
                                              " input channels, task provides " + std::to_string(want_c));
  }
  return {want_c, static_cast<int>(spec.shape[2]), static_cast<int>(spec.shape[3])};
}

class IdleWhileWaiting : public wire::Transport {
 public:
  IdleWhileWaiting(std::unique_ptr<wire::Transport> inner, std::shared_ptr<telemetry::ActivityTracker> robot)
      : inner_(std::move(inner)), robot_(std::move(robot)) {}

  Bytes roundtrip(ByteView request_frame) override {
    robot_->set_busy(false);
    try {
      Bytes reply = inner_->roundtrip(request_frame);
      robot_->set_busy(true);
      return reply;
    } catch (...) {
      robot_->set_busy(true);
      throw;
    }
  }
  void close() override { inner_->close(); }

 private:
  std::unique_ptr<wire::Transport> inner_;
  std::shared_ptr<telemetry::ActivityTracker> robot_;
};

}  // namespace

std::unique_ptr<wire::Transport> track_idle_while_waiting(
    std::unique_ptr<wire::Transport> inner, std::shared_ptr<telemetry::ActivityTracker> robot) {
  return std::make_unique<IdleWhileWaiting>(std::move(inner), std::move(robot));
}

EdgeHost::EdgeHost(std::string name, std::shared_ptr<agent::PlanStore> store, double speed_factor,
                   std::shared_ptr<telemetry::ActivityTracker> tracker)
    : name_(std::move(name)) {
  agent::AgentConfig cfg;
  cfg.speed_factor = speed_factor;
  cfg.validate();
  agent_ = std::make_shared<agent::Agent>(cfg, std::move(store));
  wire::FrameHandler handler = agent_->as_handler();
  if (tracker) {
    handler = [handler, tracker](ByteView frame) {
      tracker->set_busy(true);
      Bytes out = handler(frame);
      tracker->set_busy(false);
      return out;
    };
  }
  wire::InprocRegistry::instance().bind(name_, std::move(handler));
}

EdgeHost::~EdgeHost() { wire::InprocRegistry::instance().unbind(name_); }

runtime::RuntimeConfig EdgeHost::config(std::optional<wire::ShapedLink> shaping) const {
  runtime::RuntimeConfig cfg;
  runtime::RemotePlacement r;
  r.endpoint = name_;
  r.transport = runtime::TransportKind::kInproc;
  r.shaping = shaping;
  cfg.placement = r;
  cfg.plan_store.clear();
  return cfg;
}

BenchReport run_pipeline(const Scenario& s, PipelineHooks hooks) {
  s.validate();
  if (s.replay) {
    throw Error(ErrorCode::kMalformedFrame, "replay constants are only valid in replay mode");
  }
  if (!hooks.store) hooks.store = std::make_shared<agent::PlanStore>(s.runtime.plan_store);
  if (!hooks.session.store && !runtime::is_remote(s.runtime.placement)) hooks.session.store = hooks.store;

  const Digest plan_hash = agent::resolve_model(*hooks.store, s.model);
  const auto plan = hooks.store->require(plan_hash);
  const InputGeometry geo = input_geometry(*plan, s);
  const Shape input_shape{1, geo.channels, geo.height, geo.width};
  const std::size_t plane_values = static_cast<std::size_t>(3) * geo.height * geo.width;
  const std::size_t clip = s.task == TaskKind::kVideo ? static_cast<std::size_t>(s.clip_frames) : 1;

  BenchReport report;
  report.scenario_echo = s.echo();
  report.placement = runtime::describe(s.runtime.placement);

  auto source = make_frame_source(s.source);
  runtime::Session session = runtime::Session::open(s.runtime, plan_hash, hooks.session);

  telemetry::Collector collector;
  Sha256 digest;
  std::deque<std::vector<float>> window;
  std::string log;

  const auto run_start = Clock::now();
  const auto deadline = run_start + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(s.effective_duration_s()));
  std::int64_t last_publish = -1;
  std::uint64_t attempted = 0;

  auto more = [&] {
    if (s.frame_count) return attempted < *s.frame_count;
    return Clock::now() < deadline;
  };

  while (more()) {
    FrameRecord rec;
    rec.index = attempted++;
    auto& b = rec.breakdown;
    const auto t0 = Clock::now();
    rec.t_acquire_us = micros(run_start, t0);
    try {
      // acquire: one new camera frame per iteration; a video clip is a
      // sliding window, primed on the first iteration.
      std::vector<RawFrame> fresh;
      const std::size_t need = window.empty() ? clip : 1;
      for (std::size_t i = 0; i < need; ++i) fresh.push_back(source->next());
      if (s.acquire_cost_us > 0) std::this_thread::sleep_for(std::chrono::microseconds(s.acquire_cost_us));
      const auto t1 = Clock::now();

      for (const RawFrame& f : fresh) {
        window.push_back(preprocess_frame(f, geo.height, geo.width, s.mean, s.std));
        if (window.size() > clip) window.pop_front();
      }
      std::vector<float> input_values;
      input_values.reserve(plane_values * clip);
      for (const auto& planes : window) input_values.insert(input_values.end(), planes.begin(), planes.end());
      const Tensor input = Tensor::from_values<float>(input_shape, input_values);
      const auto t2 = Clock::now();

      runtime::InferResult result = session.infer(std::span<const Tensor>(&input, 1));
      const auto t3 = Clock::now();

      rec.result = postprocess(s.task, result.outputs);
      const auto t4 = Clock::now();

      log += "frame=" + std::to_string(rec.index) + " " + rec.result + "\n";
      const auto t5 = Clock::now();

      b.acquire_us = micros(t0, t1);
      b.preprocess_us = micros(t1, t2);
      b.serialize_us = result.breakdown.serialize_us;
      b.network_us = result.breakdown.network_us;
      b.inference_us = result.breakdown.inference_us;
      b.deserialize_us = result.breakdown.deserialize_us;
      b.postprocess_us = micros(t3, t4);
      b.publish_us = micros(t4, t5);
      b.end_to_end_us = micros(t0, t5);
      rec.t_publish_us = micros(run_start, t5);

      ByteWriter w;
      for (const Tensor& t : result.outputs) encode_tensor(w, t);
      digest.update(ByteView(w.buffer()));
      collector.record_frame(b);
      if (!telemetry::accounting_holds(b)) report.accounting_ok = false;
    } catch (const Error& e) {
      rec.ok = false;
      rec.error = std::string(error_code_name(e.code())) + ": " + e.detail();
      rec.t_publish_us = micros(run_start, Clock::now());
      b.end_to_end_us = rec.t_publish_us - rec.t_acquire_us;
      log += "frame=" + std::to_string(rec.index) + " error=" + std::string(error_code_name(e.code())) + "\n";
      const std::uint8_t marker[3] = {0xFF, static_cast<std::uint8_t>(static_cast<std::uint16_t>(e.code()) & 0xFF),
                                      static_cast<std::uint8_t>(rec.index & 0xFF)};
      digest.update(ByteView(marker, 3));
      ++report.frame_errors;
    }
    if (rec.t_acquire_us < last_publish) report.sequential_ok = false;
    last_publish = rec.t_publish_us;
    report.frames.push_back(std::move(rec));

    if (report.frame_errors > 0 && attempted >= 10 &&
        static_cast<double>(report.frame_errors) > s.abort_threshold * static_cast<double>(attempted)) {
      report.aborted = true;
      break;
    }
  }
  session.close();

  if (!report.aborted && attempted > 0 &&
      static_cast<double>(report.frame_errors) > s.abort_threshold * static_cast<double>(attempted)) {
    report.aborted = true;
  }
  if (!collector.frames().empty()) report.summary = collector.summarize();
  const Digest d = digest.finish();
  report.equivalence_digest = to_hex(d);
  report.results_log = std::move(log);
  return report;
}

}  // namespace genop::bench
