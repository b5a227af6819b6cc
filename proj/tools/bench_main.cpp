// SPDX-License-Identifier: Apache-2.0
// bench: benchmark harness. Exit status 0 when every invariant check passed,
// 1 when a check failed, 2 on errors.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "genop/bench/report.hpp"
#include "genop/bench/studies.hpp"
#include "genop/core/error.hpp"

using namespace genop;
using namespace genop::bench;

namespace {

struct Common {
  std::string config;
  std::string plans;
  std::string out = "bench-out";
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
  std::optional<std::uint64_t> frames;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Runtime configuration file (replaces the scenario's placement keys)");
  cmd->add_option("--plans", c.plans, "Plan store directory");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--seed", c.seed, "Frame generator seed");
  cmd->add_option("--duration-s", c.duration_s, "Run length in seconds");
  cmd->add_option("--frames", c.frames, "Run length in frames");
}

void apply_common(const Common& c, Scenario& s) {
  if (!c.config.empty()) s.runtime = runtime::load_config(c.config);
  if (!c.plans.empty()) s.runtime.plan_store = c.plans;
  if (c.seed) s.source.seed = *c.seed;
  if (c.duration_s) {
    s.duration_s = *c.duration_s;
    s.frame_count.reset();
  }
  if (c.frames) {
    s.frame_count = *c.frames;
    s.duration_s.reset();
  }
  s.validate();
}

int finish(const BenchReport& r, const std::string& out) {
  const bool ok = emit_report(r, out);
  std::cout << summary_text(r) << "reports written to " << out << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genop benchmark harness"};
  app.require_subcommand(1);

  Common run_c, replay_c, cross_c, power_c;

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run a scenario through the pipeline");
  run->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  add_common(run, run_c);

  ReplayConstants rc;
  auto* replay = app.add_subcommand("replay", "Replay fixed stage durations on a virtual clock");
  replay->add_option("--inference-us", rc.inference_us, "Inference time per frame")->required();
  replay->add_option("--network-us", rc.network_oneway_us, "One-way network time per message");
  replay->add_option("--preprocess-us", rc.preprocess_us, "Preprocess time per frame");
  replay->add_option("--postprocess-us", rc.postprocess_us, "Postprocess time per frame");
  add_common(replay, replay_c);

  std::string grid_path;
  auto* cross = app.add_subcommand("crossover", "Local vs Remote over a grid of edge speeds and links");
  cross->add_option("--grid", grid_path, "Grid file")->required()->check(CLI::ExistingFile);
  add_common(cross, cross_c);

  std::string robot_spec = "activity", edge_spec = "activity", power_scenario;
  double rate_hz = 10.0;
  auto* power = app.add_subcommand("power", "Robot/edge average power for Local and Remote");
  power->add_option("--scenario", power_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  power->add_option("--robot-provider", robot_spec,
                    "activity[:busy_w=W,idle_w=W] | ramp:<W> | file:<path> | <path>");
  power->add_option("--edge-provider", edge_spec, "Same forms as --robot-provider");
  power->add_option("--rate-hz", rate_hz, "Sampling rate");
  add_common(power, power_c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      Scenario s = load_scenario(scenario_path);
      apply_common(run_c, s);
      return finish(run_pipeline(s), run_c.out);
    }
    if (*replay) {
      Scenario s;
      s.name = "replay";
      s.model = "replay";
      s.replay = rc;
      apply_common(replay_c, s);
      return finish(run_replay(s), replay_c.out);
    }
    if (*cross) {
      CrossoverGrid g = load_crossover_grid(grid_path);
      apply_common(cross_c, g.base);
      const CrossoverTable t = run_crossover_study(g);
      write_text(cross_c.out, "crossover.csv", crossover_csv(t));
      write_text(cross_c.out, "crossover.txt", crossover_text(t));
      std::cout << crossover_text(t);
      return t.accounting_ok ? 0 : 1;
    }
    if (*power) {
      Scenario s = load_scenario(power_scenario);
      apply_common(power_c, s);
      const PowerTable t =
          run_power_study(s, parse_provider_spec(robot_spec), parse_provider_spec(edge_spec), rate_hz);
      write_text(power_c.out, "power.csv", power_csv(t));
      write_text(power_c.out, "power.txt", power_text(t));
      std::cout << power_text(t);
      return t.local.run_passed && t.remote.run_passed ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
