// SPDX-License-Identifier: Apache-2.0
#include "genop/bench/studies.hpp"

#include <atomic>
#include <cstdio>
#include <sstream>

#include "genop/core/error.hpp"
#include "genop/wire/frame.hpp"
#include "genop/wire/messages.hpp"

namespace genop::bench {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double mean_inference(const BenchReport& r) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& f : r.frames) {
    if (!f.ok) continue;
    sum += static_cast<double>(f.breakdown.inference_us);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

Tensor zeros(const TensorSpec& spec) {
  std::vector<std::byte> data(tensor_num_bytes(spec.dtype, spec.shape));
  return Tensor::create(spec.dtype, spec.shape, std::move(data));
}

std::string unique_host_name(const char* prefix) {
  static std::atomic<std::uint64_t> counter{0};
  return std::string(prefix) + "-" + std::to_string(counter.fetch_add(1));
}

std::shared_ptr<telemetry::EnergyProvider> make_provider(const ProviderSpec& p,
                                                         std::shared_ptr<telemetry::ActivityTracker> tracker) {
  switch (p.kind) {
    case ProviderSpec::Kind::kActivity:
      return std::make_shared<telemetry::ActivityEnergyProvider>(std::move(tracker), p.busy_mw, p.idle_mw);
    case ProviderSpec::Kind::kRamp:
      return std::make_shared<telemetry::RampEnergyProvider>(p.ramp_mw);
    case ProviderSpec::Kind::kFile:
      return std::make_shared<telemetry::FileEnergyProvider>(p.path);
  }
  return nullptr;
}

std::string watts(const std::optional<telemetry::Rational>& w) {
  return w ? fmt("%.3f", w->to_double()) : std::string("n/a");
}

}  // namespace

BenchReport run_replay(const Scenario& s) {
  s.validate();
  if (!s.replay) throw Error(ErrorCode::kMalformedFrame, "replay mode needs replay constants");
  const ReplayConstants& c = *s.replay;

  telemetry::LatencyBreakdown b;
  b.preprocess_us = c.preprocess_us;
  b.network_us = 2 * c.network_oneway_us;
  b.inference_us = c.inference_us;
  b.postprocess_us = c.postprocess_us;
  b.end_to_end_us = b.component_sum();

  std::uint64_t frames = 0;
  if (s.frame_count) {
    frames = *s.frame_count;
  } else {
    const double budget_us = s.effective_duration_s() * 1e6;
    frames = static_cast<std::uint64_t>(budget_us / static_cast<double>(b.end_to_end_us));
    if (frames == 0) frames = 1;
  }

  BenchReport report;
  report.scenario_echo = s.echo();
  report.placement = "replay";
  telemetry::Collector collector;
  std::string log;
  for (std::uint64_t i = 0; i < frames; ++i) {
    FrameRecord rec;
    rec.index = i;
    rec.t_acquire_us = static_cast<std::int64_t>(i) * b.end_to_end_us;
    rec.t_publish_us = rec.t_acquire_us + b.end_to_end_us;
    rec.breakdown = b;
    rec.result = "replay";
    log += "frame=" + std::to_string(i) + " replay\n";
    collector.record_frame(b);
    if (!telemetry::accounting_holds(b)) report.accounting_ok = false;
    report.frames.push_back(std::move(rec));
  }
  report.summary = collector.summarize();
  report.equivalence_digest = to_hex(sha256(ByteView()));
  report.results_log = std::move(log);
  return report;
}

CrossoverGrid crossover_grid_from_kv(const KeyValues& kv_in) {
  KeyValues kv = kv_in;
  if (!kv.has("frames") && !kv.has("duration_s")) kv.set("frames", "20");
  CrossoverGrid g;
  g.base = scenario_from_kv(kv);
  g.edge_speeds = kv.get_doubles("grid.edge_speeds");
  g.bandwidths_Bps = kv.get_uints("grid.bandwidths_Bps");
  g.latency_us = kv.get_uint("grid.latency_us", 0);
  if (g.edge_speeds.empty() || g.bandwidths_Bps.empty()) {
    throw Error(ErrorCode::kMalformedFrame, "grid needs grid.edge_speeds and grid.bandwidths_Bps");
  }
  for (double v : g.edge_speeds) {
    if (!(v > 0)) throw Error(ErrorCode::kMalformedFrame, "grid edge speeds must be > 0");
  }
  return g;
}

CrossoverGrid load_crossover_grid(const std::string& path) {
  return crossover_grid_from_kv(KeyValues::load(path));
}

std::size_t CrossoverTable::agreements() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.agree() ? 1 : 0;
  return n;
}

std::uint64_t request_frame_bytes(const planc::ModelPlan& plan) {
  wire::GenOpRequest req;
  req.plan_hash = plan.plan_hash;
  for (const auto& spec : plan.input_specs) req.inputs.push_back(zeros(spec));
  return wire::kFrameHeaderBytes + wire::encode_request(req).size();
}

std::uint64_t response_frame_bytes(const planc::ModelPlan& plan) {
  wire::GenOpResponse resp;
  for (const auto& spec : plan.output_specs) resp.outputs.push_back(zeros(spec));
  return wire::kFrameHeaderBytes + wire::encode_response(resp).size();
}

bool fps_greater(const telemetry::Rational& a, const telemetry::Rational& b) {
  return static_cast<__int128>(a.num()) * b.den() > static_cast<__int128>(b.num()) * a.den();
}

CrossoverTable run_crossover_study(const CrossoverGrid& grid, std::shared_ptr<agent::PlanStore> store) {
  if (!store) store = std::make_shared<agent::PlanStore>(grid.base.runtime.plan_store);
  const auto plan = store->require(agent::resolve_model(*store, grid.base.model));
  const std::uint64_t req_bytes = request_frame_bytes(*plan);
  const std::uint64_t resp_bytes = response_frame_bytes(*plan);

  CrossoverTable table;
  Scenario local = grid.base;
  local.runtime.placement = runtime::LocalPlacement{grid.base.local_speed, interp::KernelMode::kParallel};
  table.local_placement = runtime::describe(local.runtime.placement);
  PipelineHooks hooks;
  hooks.store = store;
  const BenchReport local_report = run_pipeline(local, hooks);
  if (!local_report.passed()) table.accounting_ok = false;
  const double local_inf = mean_inference(local_report);

  for (double edge_speed : grid.edge_speeds) {
    EdgeHost host(unique_host_name("crossover-edge"), store, edge_speed);
    for (std::uint64_t bw : grid.bandwidths_Bps) {
      CrossoverCell cell;
      cell.edge_speed = edge_speed;
      cell.link = wire::ShapedLink{grid.latency_us, bw};
      Scenario remote = grid.base;
      remote.runtime = host.config(cell.link);
      const BenchReport r = run_pipeline(remote, hooks);

      cell.local_fps = local_report.summary.fps;
      cell.remote_fps = r.summary.fps;
      cell.local_inference_us = local_inf;
      cell.remote_inference_us = mean_inference(r);
      cell.round_trip_us = wire::shaped_delay_micros(cell.link, req_bytes) +
                           wire::shaped_delay_micros(cell.link, resp_bytes);
      cell.predicted_remote =
          cell.remote_inference_us + static_cast<double>(cell.round_trip_us) < cell.local_inference_us;
      cell.measured_remote = fps_greater(cell.remote_fps, cell.local_fps);
      cell.accounting_ok = r.passed();
      if (!cell.accounting_ok) table.accounting_ok = false;
      table.cells.push_back(cell);
    }
  }
  return table;
}

std::string crossover_csv(const CrossoverTable& t) {
  std::ostringstream s;
  s << "edge_speed,bandwidth_Bps,latency_us,local_fps,remote_fps,local_inference_us,"
       "remote_inference_us,round_trip_us,predicted,measured,agree\n";
  for (const auto& c : t.cells) {
    s << fmt("%g", c.edge_speed) << "," << c.link.bandwidth_bytes_per_sec << ","
      << c.link.one_way_latency_micros << "," << telemetry::format_fps(c.local_fps) << ","
      << telemetry::format_fps(c.remote_fps) << "," << fmt("%.1f", c.local_inference_us) << ","
      << fmt("%.1f", c.remote_inference_us) << "," << c.round_trip_us << ","
      << (c.predicted_remote ? "remote" : "local") << "," << (c.measured_remote ? "remote" : "local") << ","
      << (c.agree() ? "yes" : "no") << "\n";
  }
  return s.str();
}

std::string crossover_text(const CrossoverTable& t) {
  std::ostringstream s;
  s << "local placement: " << t.local_placement << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%10s %14s %12s %12s %12s %12s %10s %10s %6s\n", "edge_speed",
                "bandwidth_Bps", "local_fps", "remote_fps", "remote_inf", "round_trip", "predicted",
                "measured", "agree");
  s << line;
  for (const auto& c : t.cells) {
    std::snprintf(line, sizeof line, "%10g %14llu %12.3f %12.3f %12.1f %12llu %10s %10s %6s\n", c.edge_speed,
                  static_cast<unsigned long long>(c.link.bandwidth_bytes_per_sec), c.local_fps.to_double(),
                  c.remote_fps.to_double(), c.remote_inference_us,
                  static_cast<unsigned long long>(c.round_trip_us), c.predicted_remote ? "remote" : "local",
                  c.measured_remote ? "remote" : "local", c.agree() ? "yes" : "no");
    s << line;
  }
  s << "agreement: " << t.agreements() << "/" << t.cells.size() << "\n";
  return s.str();
}

ProviderSpec parse_provider_spec(const std::string& text) {
  ProviderSpec p;
  auto bad = [&](const std::string& why) -> ProviderSpec {
    throw Error(ErrorCode::kMalformedFrame, "provider '" + text + "': " + why);
  };
  if (text == "activity") return p;
  if (text.rfind("activity:", 0) == 0) {
    std::string rest = text.substr(9);
    for (char& ch : rest) {
      if (ch == ',') ch = '\n';
    }
    const KeyValues kv = KeyValues::parse(rest);
    for (const auto& [key, value] : kv.entries()) {
      if (key != "busy_w" && key != "idle_w") return bad("unknown key '" + key + "'");
    }
    p.busy_mw = telemetry::watts_to_milliwatts(kv.get_double("busy_w", 9.5));
    p.idle_mw = telemetry::watts_to_milliwatts(kv.get_double("idle_w", 0.6));
    if (p.busy_mw < 0 || p.idle_mw < 0) return bad("power must be >= 0");
    if (p.busy_mw < p.idle_mw) return bad("busy_w must be >= idle_w");
    return p;
  }
  if (text.rfind("ramp:", 0) == 0) {
    p.kind = ProviderSpec::Kind::kRamp;
    try {
      std::size_t used = 0;
      const double w = std::stod(text.substr(5), &used);
      if (used != text.size() - 5 || !(w >= 0)) return bad("watts must be >= 0");
      p.ramp_mw = telemetry::watts_to_milliwatts(w);
    } catch (const std::logic_error&) {
      return bad("watts must be a number");
    }
    return p;
  }
  p.kind = ProviderSpec::Kind::kFile;
  p.path = text.rfind("file:", 0) == 0 ? text.substr(5) : text;
  if (p.path.empty()) return bad("empty path");
  return p;
}

std::string describe(const ProviderSpec& p) {
  switch (p.kind) {
    case ProviderSpec::Kind::kActivity:
      return "activity(busy_mw=" + std::to_string(p.busy_mw) + ",idle_mw=" + std::to_string(p.idle_mw) + ")";
    case ProviderSpec::Kind::kRamp: return "ramp(mw=" + std::to_string(p.ramp_mw) + ")";
    case ProviderSpec::Kind::kFile: return "file(" + p.path + ")";
  }
  return "?";
}

bool PowerTable::remote_robot_lower() const {
  if (!local.robot_w || !remote.robot_w) return false;
  const auto& a = *remote.robot_w;
  const auto& b = *local.robot_w;
  return static_cast<__int128>(a.num()) * b.den() < static_cast<__int128>(b.num()) * a.den();
}

PowerTable run_power_study(const Scenario& s, const ProviderSpec& robot, const ProviderSpec& edge,
                           double rate_hz, std::shared_ptr<agent::PlanStore> store) {
  if (!(rate_hz > 0)) throw Error(ErrorCode::kMalformedFrame, "sampling rate must be > 0");
  if (!store) store = std::make_shared<agent::PlanStore>(s.runtime.plan_store);

  auto run = [&](bool remote) {
    auto robot_tracker = std::make_shared<telemetry::ActivityTracker>();
    auto edge_tracker = std::make_shared<telemetry::ActivityTracker>();
    Scenario sc = s;
    std::unique_ptr<EdgeHost> host;
    if (!remote) {
      sc.runtime.placement = runtime::LocalPlacement{s.local_speed, interp::KernelMode::kParallel};
    } else if (!runtime::is_remote(s.runtime.placement)) {
      host = std::make_unique<EdgeHost>(unique_host_name("power-edge"), store, s.edge_speed, edge_tracker);
      sc.runtime = host->config(s.edge_link);
    }
    PipelineHooks hooks;
    hooks.store = store;
    hooks.session.wrap_transport = [robot_tracker](std::unique_ptr<wire::Transport> inner) {
      return track_idle_while_waiting(std::move(inner), robot_tracker);
    };

    telemetry::PowerSampler robot_sampler(make_provider(robot, robot_tracker), rate_hz);
    telemetry::PowerSampler edge_sampler(make_provider(edge, edge_tracker), rate_hz);
    robot_tracker->set_busy(true);
    robot_sampler.start();
    edge_sampler.start();
    BenchReport report;
    try {
      report = run_pipeline(sc, hooks);
    } catch (...) {
      robot_sampler.stop();
      edge_sampler.stop();
      throw;
    }
    robot_sampler.stop();
    edge_sampler.stop();
    robot_tracker->set_busy(false);

    PowerRow row;
    row.placement = report.placement;
    row.robot_w = robot_sampler.average();
    row.edge_w = edge_sampler.average();
    row.robot_failures = robot_sampler.failures();
    row.edge_failures = edge_sampler.failures();
    row.frames = report.summary.frames;
    row.fps = report.summary.fps;
    row.run_passed = report.passed();
    return row;
  };

  PowerTable t;
  t.local = run(false);
  t.remote = run(true);
  if (t.local.robot_w && t.remote.robot_w && t.local.robot_w->num() != 0) {
    const double l = t.local.robot_w->to_double();
    t.robot_reduction_pct = (l - t.remote.robot_w->to_double()) / l * 100.0;
  }
  return t;
}

std::string power_csv(const PowerTable& t) {
  std::ostringstream s;
  s << "placement,robot_w,edge_w,robot_failures,edge_failures,frames,fps\n";
  for (const PowerRow* r : {&t.local, &t.remote}) {
    s << r->placement << "," << watts(r->robot_w) << "," << watts(r->edge_w) << "," << r->robot_failures << ","
      << r->edge_failures << "," << r->frames << "," << telemetry::format_fps(r->fps) << "\n";
  }
  return s.str();
}

std::string power_text(const PowerTable& t) {
  std::ostringstream s;
  char line[256];
  std::snprintf(line, sizeof line, "%-48s %10s %10s %8s %10s\n", "placement", "robot_W", "edge_W", "frames", "fps");
  s << line;
  for (const PowerRow* r : {&t.local, &t.remote}) {
    std::snprintf(line, sizeof line, "%-48s %10s %10s %8zu %10.3f\n", r->placement.c_str(), watts(r->robot_w).c_str(),
                  watts(r->edge_w).c_str(), r->frames, r->fps.to_double());
    s << line;
  }
  s << "robot reduction: "
    << (t.robot_reduction_pct ? fmt("%.1f%%", *t.robot_reduction_pct) : std::string("n/a")) << "\n"
    << "remote robot power below local: " << (t.remote_robot_lower() ? "yes" : "no") << "\n";
  return s.str();
}

}  // namespace genop::bench
