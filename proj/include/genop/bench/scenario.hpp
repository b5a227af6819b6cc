// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "genop/core/kv.hpp"
#include "genop/runtime/config.hpp"

namespace genop::bench {

enum class TaskKind { kClassify, kSegment, kVideo };

std::string task_name(TaskKind t);
TaskKind parse_task(const std::string& s);

struct FrameSourceSpec {
  // Empty directory means the seeded synthetic generator.
  std::string directory;
  std::uint64_t seed = 1;
  int width = 1280;
  int height = 720;
};

// Fixed stage durations for replay mode.
struct ReplayConstants {
  std::int64_t inference_us = 0;
  std::int64_t network_oneway_us = 0;
  std::int64_t preprocess_us = 0;
  std::int64_t postprocess_us = 0;
};

// Scenario file (key = value, '#' comments):
//   name              free text
//   model             plan hash (hex) or plan file stem
//   task              classify | segment | video
//   source            synthetic | <directory of .rgb files>
//   seed, width, height
//   frames | duration_s   at most one; neither means duration_s = 60
//   mean, std         three comma separated values each
//   clip_frames       frames stacked per video input (default 16)
//   abort_threshold   frame error fraction that aborts the run (0.1)
//   acquire_cost_us   emulated capture/decode cost per frame (0)
//   local_speed, edge_speed   speed factors used by the studies
//   edge.latency_us, edge.bandwidth_Bps   link to the edge the power study
//                     hosts itself when the placement is local
//   replay.inference_us, replay.network_oneway_us,
//   replay.preprocess_us, replay.postprocess_us   replay mode only
// plus every runtime configuration key (placement, endpoint, ...).
struct Scenario {
  std::string name = "scenario";
  std::string model;
  TaskKind task = TaskKind::kClassify;
  FrameSourceSpec source;
  std::optional<std::uint64_t> frame_count;
  std::optional<double> duration_s;
  std::array<float, 3> mean{0.485f, 0.456f, 0.406f};
  std::array<float, 3> std{0.229f, 0.224f, 0.225f};
  int clip_frames = 16;
  double abort_threshold = 0.10;
  std::int64_t acquire_cost_us = 0;
  double local_speed = 1.0;
  double edge_speed = 1.0;
  std::optional<wire::ShapedLink> edge_link;
  runtime::RuntimeConfig runtime;
  std::optional<ReplayConstants> replay;

  // Throws MALFORMED_FRAME when both frames and duration are set, or when
  // values are out of range.
  void validate() const;
  double effective_duration_s() const { return duration_s.value_or(60.0); }
  // Canonical key = value rendering, used as the report's scenario echo.
  std::string echo() const;
};

Scenario scenario_from_kv(const KeyValues& kv);
// File, then GENOP_* environment overrides for runtime keys.
Scenario load_scenario(const std::string& path);

}  // namespace genop::bench
