// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "genop/bench/pipeline.hpp"
#include "genop/telemetry/rational.hpp"
#include "genop/wire/transport.hpp"

namespace genop::bench {

// Replay mode: frames advance on a virtual clock using the scenario's
// replay constants; nothing is executed. Each frame takes
// preprocess + serialize(0) + 2 * network_oneway + inference + postprocess.
// Frame count is the scenario's, or as many whole frames as fit in the
// duration (at least one).
BenchReport run_replay(const Scenario& s);

// Crossover grid file: a scenario plus
//   grid.edge_speeds     comma separated speed factors
//   grid.bandwidths_Bps  comma separated link bandwidths, 0 = unlimited
//   grid.latency_us      one-way link latency (default 0)
// local_speed from the scenario is the robot's speed factor; frames
// (default 20) is used per cell.
struct CrossoverGrid {
  Scenario base;
  std::vector<double> edge_speeds;
  std::vector<std::uint64_t> bandwidths_Bps;
  std::uint64_t latency_us = 0;
};

CrossoverGrid crossover_grid_from_kv(const KeyValues& kv);
CrossoverGrid load_crossover_grid(const std::string& path);

struct CrossoverCell {
  double edge_speed = 1;
  wire::ShapedLink link;
  telemetry::Rational local_fps;
  telemetry::Rational remote_fps;
  double local_inference_us = 0;   // mean, measured
  double remote_inference_us = 0;  // mean, agent-reported
  std::uint64_t round_trip_us = 0;  // shaped delay of request + response
  bool predicted_remote = false;    // remote_inference + round_trip < local_inference
  bool measured_remote = false;     // remote_fps > local_fps
  bool accounting_ok = true;
  bool agree() const { return predicted_remote == measured_remote; }
};

struct CrossoverTable {
  std::string local_placement;
  std::vector<CrossoverCell> cells;  // edge speed major, bandwidth minor
  bool accounting_ok = true;
  std::size_t agreements() const;
};

// Local placement runs once (it does not depend on the link or the edge);
// every cell then runs Remote against an in-process agent at that edge
// speed behind a shaped link.
CrossoverTable run_crossover_study(const CrossoverGrid& grid,
                                   std::shared_ptr<agent::PlanStore> store = nullptr);

// Frame sizes on the wire for one request/response of `plan`.
std::uint64_t request_frame_bytes(const planc::ModelPlan& plan);
std::uint64_t response_frame_bytes(const planc::ModelPlan& plan);

bool fps_greater(const telemetry::Rational& a, const telemetry::Rational& b);

std::string crossover_csv(const CrossoverTable& t);
std::string crossover_text(const CrossoverTable& t);

// Energy counter configuration for one side of the power study:
//   activity[:busy_w=9.5,idle_w=0.6]  synthetic, driven by busy/idle state
//   ramp:<watts>                      constant power on a virtual clock
//   file:<path> or a bare path        "<t_us> <energy_uj>" counter file
struct ProviderSpec {
  enum class Kind { kActivity, kRamp, kFile };
  Kind kind = Kind::kActivity;
  std::int64_t busy_mw = 9500;
  std::int64_t idle_mw = 600;
  std::int64_t ramp_mw = 0;
  std::string path;
};

ProviderSpec parse_provider_spec(const std::string& text);
std::string describe(const ProviderSpec& p);

struct PowerRow {
  std::string placement;
  std::optional<telemetry::Rational> robot_w;
  std::optional<telemetry::Rational> edge_w;
  std::size_t robot_failures = 0;
  std::size_t edge_failures = 0;
  std::size_t frames = 0;
  telemetry::Rational fps;
  bool run_passed = false;
};

struct PowerTable {
  PowerRow local;
  PowerRow remote;
  // (local - remote) / local * 100 on the robot side.
  std::optional<double> robot_reduction_pct;
  bool remote_robot_lower() const;
};

// Runs the scenario Local (at local_speed) and Remote while sampling both
// providers at rate_hz. Remote uses the scenario's remote placement when it
// has one, otherwise an in-process agent at edge_speed.
PowerTable run_power_study(const Scenario& s, const ProviderSpec& robot, const ProviderSpec& edge,
                           double rate_hz = 10.0, std::shared_ptr<agent::PlanStore> store = nullptr);

std::string power_csv(const PowerTable& t);
std::string power_text(const PowerTable& t);

}  // namespace genop::bench
