// SPDX-License-Identifier: Apache-2.0
#include "genop/bench/scenario.hpp"

#include <cstdio>
#include <sstream>

#include "genop/core/error.hpp"

namespace genop::bench {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::kMalformedFrame, "scenario: " + msg); }

std::array<float, 3> triple(const KeyValues& kv, const std::string& key, std::array<float, 3> fallback) {
  if (!kv.has(key)) return fallback;
  const auto v = kv.get_doubles(key);
  if (v.size() != 3) bad(key + " needs three values");
  return {static_cast<float>(v[0]), static_cast<float>(v[1]), static_cast<float>(v[2])};
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string task_name(TaskKind t) {
  switch (t) {
    case TaskKind::kClassify: return "classify";
    case TaskKind::kSegment: return "segment";
    case TaskKind::kVideo: return "video";
  }
  return "?";
}

TaskKind parse_task(const std::string& s) {
  if (s == "classify") return TaskKind::kClassify;
  if (s == "segment") return TaskKind::kSegment;
  if (s == "video") return TaskKind::kVideo;
  bad("unknown task '" + s + "'");
}

void Scenario::validate() const {
  if (model.empty()) bad("model is required");
  if (frame_count && duration_s) bad("set frames or duration_s, not both");
  if (frame_count && *frame_count == 0) bad("frames must be > 0");
  if (duration_s && !(*duration_s > 0)) bad("duration_s must be > 0");
  if (source.width < 1 || source.height < 1) bad("width and height must be >= 1");
  if (clip_frames < 1) bad("clip_frames must be >= 1");
  if (!(abort_threshold >= 0 && abort_threshold <= 1)) bad("abort_threshold must be in [0,1]");
  if (acquire_cost_us < 0) bad("acquire_cost_us must be >= 0");
  if (!(local_speed > 0) || !(edge_speed > 0)) bad("speed factors must be > 0");
  for (float s : std) {
    if (!(s > 0)) bad("std values must be > 0");
  }
  if (replay) {
    const auto& r = *replay;
    if (r.inference_us < 0 || r.network_oneway_us < 0 || r.preprocess_us < 0 || r.postprocess_us < 0) {
      bad("replay constants must be >= 0");
    }
    if (r.inference_us + 2 * r.network_oneway_us + r.preprocess_us + r.postprocess_us <= 0) {
      bad("replay constants must sum to a positive frame time");
    }
  }
}

std::string Scenario::echo() const {
  std::ostringstream s;
  s << "name = " << name << "\n"
    << "model = " << model << "\n"
    << "task = " << task_name(task) << "\n"
    << "source = " << (source.directory.empty() ? "synthetic" : source.directory) << "\n"
    << "seed = " << source.seed << "\n"
    << "width = " << source.width << "\n"
    << "height = " << source.height << "\n";
  if (frame_count) s << "frames = " << *frame_count << "\n";
  else s << "duration_s = " << fmt_double(effective_duration_s()) << "\n";
  s << "mean = " << fmt_double(mean[0]) << "," << fmt_double(mean[1]) << "," << fmt_double(mean[2]) << "\n"
    << "std = " << fmt_double(std[0]) << "," << fmt_double(std[1]) << "," << fmt_double(std[2]) << "\n";
  if (task == TaskKind::kVideo) s << "clip_frames = " << clip_frames << "\n";
  s << "abort_threshold = " << fmt_double(abort_threshold) << "\n"
    << "acquire_cost_us = " << acquire_cost_us << "\n"
    << "placement = " << runtime::describe(runtime.placement) << "\n";
  if (edge_link) {
    s << "edge.latency_us = " << edge_link->one_way_latency_micros << "\n"
      << "edge.bandwidth_Bps = " << edge_link->bandwidth_bytes_per_sec << "\n";
  }
  if (replay) {
    s << "replay.inference_us = " << replay->inference_us << "\n"
      << "replay.network_oneway_us = " << replay->network_oneway_us << "\n"
      << "replay.preprocess_us = " << replay->preprocess_us << "\n"
      << "replay.postprocess_us = " << replay->postprocess_us << "\n";
  }
  return s.str();
}

Scenario scenario_from_kv(const KeyValues& kv) {
  Scenario s;
  s.name = kv.get("name", s.name);
  s.model = kv.get("model", "");
  s.task = parse_task(kv.get("task", "classify"));
  const std::string src = kv.get("source", "synthetic");
  if (src != "synthetic") s.source.directory = src;
  s.source.seed = kv.get_uint("seed", s.source.seed);
  s.source.width = static_cast<int>(kv.get_int("width", s.source.width));
  s.source.height = static_cast<int>(kv.get_int("height", s.source.height));
  if (kv.has("frames")) s.frame_count = kv.get_uint("frames", 0);
  if (kv.has("duration_s")) s.duration_s = kv.get_double("duration_s", 0);
  s.mean = triple(kv, "mean", s.mean);
  s.std = triple(kv, "std", s.std);
  s.clip_frames = static_cast<int>(kv.get_int("clip_frames", s.clip_frames));
  s.abort_threshold = kv.get_double("abort_threshold", s.abort_threshold);
  s.acquire_cost_us = kv.get_int("acquire_cost_us", s.acquire_cost_us);
  s.local_speed = kv.get_double("local_speed", s.local_speed);
  s.edge_speed = kv.get_double("edge_speed", s.edge_speed);
  if (kv.has("edge.latency_us") || kv.has("edge.bandwidth_Bps")) {
    s.edge_link = wire::ShapedLink{kv.get_uint("edge.latency_us", 0), kv.get_uint("edge.bandwidth_Bps", 0)};
  }
  s.runtime = runtime::config_from_kv(kv);
  const bool any_replay = kv.has("replay.inference_us") || kv.has("replay.network_oneway_us") ||
                          kv.has("replay.preprocess_us") || kv.has("replay.postprocess_us");
  if (any_replay) {
    ReplayConstants r;
    r.inference_us = kv.get_int("replay.inference_us", 0);
    r.network_oneway_us = kv.get_int("replay.network_oneway_us", 0);
    r.preprocess_us = kv.get_int("replay.preprocess_us", 0);
    r.postprocess_us = kv.get_int("replay.postprocess_us", 0);
    s.replay = r;
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  KeyValues kv = KeyValues::load(path);
  kv.apply_env(runtime::kEnvPrefix, runtime::config_keys());
  return scenario_from_kv(kv);
}

}  // namespace genop::bench
