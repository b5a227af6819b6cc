// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "genop/agent/agent.hpp"
#include "genop/bench/imaging.hpp"
#include "genop/bench/pipeline.hpp"
#include "genop/bench/report.hpp"
#include "genop/bench/studies.hpp"
#include "genop/core/error.hpp"
#include "genop/interp/kernels.hpp"
#include "genop/planc/passes.hpp"
#include "oracle.hpp"

using namespace genop;
using namespace genop::bench;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a genop::Error");
  return ErrorCode::kBackendFailure;
}

std::shared_ptr<agent::PlanStore> corpus_store() {
  static auto store = [] {
    auto s = std::make_shared<agent::PlanStore>("");
    for (const auto& n : oracle::corpus_names()) {
      s->add(planc::compile(oracle::corpus_graph(n), planc::all_passes()), n);
    }
    return s;
  }();
  return store;
}

Scenario scenario(const std::string& text) { return scenario_from_kv(KeyValues::parse(text)); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

// Recomputes FPS from frames.csv alone: n * 10^6 / sum(end_to_end) over
// rows with ok = 1, printed with six decimals.
std::string fps_from_frames_csv(const std::string& text) {
  auto rows = csv_rows(text);
  const auto& header = rows.at(0);
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  const std::size_t ok = col("ok"), e2e = col("end_to_end_us");
  long long n = 0, sum = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][ok] != "1") continue;
    ++n;
    sum += std::stoll(rows[i][e2e]);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(n * 1'000'000) / static_cast<double>(sum));
  return buf;
}

}  // namespace

TEST_CASE("scenario parsing and validation") {
  Scenario s = scenario("name = a\nmodel = tiny-classifier\ntask = segment\nframes = 12\nwidth = 64\nheight = 48\n"
                        "mean = 0.5,0.5,0.5\nstd = 0.25,0.25,0.25\n");
  CHECK(s.task == TaskKind::kSegment);
  CHECK(s.frame_count == 12u);
  CHECK(s.source.width == 64);
  CHECK(s.mean[1] == 0.5f);
  CHECK(s.std[2] == 0.25f);
  CHECK_FALSE(runtime::is_remote(s.runtime.placement));
  Scenario d = scenario("model = m\n");
  CHECK(d.effective_duration_s() == 60.0);
  CHECK(d.source.width == 1280);
  CHECK(d.source.height == 720);
  CHECK(d.abort_threshold == doctest::Approx(0.1));
  CHECK(d.echo().find("duration_s = 60") != std::string::npos);
  CHECK(s.echo() == scenario(s.echo().substr(0, s.echo().find("placement"))).echo());

  for (const char* bad : {"model = m\nframes = 5\nduration_s = 3\n", "model = m\ntask = dance\n",
                          "model = m\nstd = 1,0,1\n", "model = m\nmean = 1,2\n", "model = m\nwidth = 0\n",
                          "model = m\nabort_threshold = 2\n", "frames = 3\n"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { scenario(bad); }) == ErrorCode::kMalformedFrame);
  }
  CHECK(parse_task("video") == TaskKind::kVideo);
  CHECK(task_name(TaskKind::kClassify) == "classify");
}

TEST_CASE("synthetic frames are deterministic") {
  SyntheticFrameSource a(7, 40, 30), b(7, 40, 30), c(8, 40, 30);
  for (int i = 0; i < 5; ++i) {
    RawFrame fa = a.next(), fb = b.next(), fc = c.next();
    CHECK(fa.rgb == fb.rgb);
    CHECK(fa.rgb != fc.rgb);
    CHECK(fa.rgb.size() == 40u * 30u * 3u);
  }
  SyntheticFrameSource d(7, 40, 30);
  CHECK(d.next().rgb != d.next().rgb);
}

TEST_CASE("directory frame source") {
  std::string dir = oracle::temp_dir("frames");
  CHECK(code_of([&] { DirectoryFrameSource s(dir, 4, 2); }) == ErrorCode::kBackendFailure);
  CHECK(code_of([&] { DirectoryFrameSource s(dir + "/missing", 4, 2); }) == ErrorCode::kBackendFailure);
  write_file(dir + "/b.rgb", Bytes(24, 2));
  write_file(dir + "/a.rgb", Bytes(24, 1));
  write_file(dir + "/ignored.txt", Bytes(3, 9));
  DirectoryFrameSource s(dir, 4, 2);
  CHECK(s.file_count() == 2);
  CHECK(s.next().rgb == std::vector<std::uint8_t>(24, 1));
  CHECK(s.next().rgb == std::vector<std::uint8_t>(24, 2));
  CHECK(s.next().rgb == std::vector<std::uint8_t>(24, 1));
  write_file(dir + "/c.rgb", Bytes(5, 0));
  DirectoryFrameSource bad(dir, 4, 2);
  bad.next();
  bad.next();
  CHECK(code_of([&] { bad.next(); }) == ErrorCode::kInvalidShape);
  std::filesystem::remove_all(dir);
}

TEST_CASE("preprocessing follows bilinear resize and normalization") {
  const std::array<float, 3> mean{0.485f, 0.456f, 0.406f}, stdv{0.229f, 0.224f, 0.225f};
  SyntheticFrameSource src(3, 37, 23);
  RawFrame f = src.next();
  const int oh = 16, ow = 11;
  auto out = preprocess_frame(f, oh, ow, mean, stdv);
  REQUIRE(out.size() == 3u * oh * ow);
  // Double-precision oracle.
  double worst = 0;
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        const double sy = y * double(f.height - 1) / (oh - 1), sx = x * double(f.width - 1) / (ow - 1);
        const int y0 = int(sy), x0 = int(sx);
        const int y1 = std::min(y0 + 1, f.height - 1), x1 = std::min(x0 + 1, f.width - 1);
        const double wy = sy - y0, wx = sx - x0;
        auto px = [&](int yy, int xx) { return double(f.rgb[(yy * f.width + xx) * 3 + c]); };
        const double v = (1 - wy) * (1 - wx) * px(y0, x0) + (1 - wy) * wx * px(y0, x1) + wy * (1 - wx) * px(y1, x0) +
                         wy * wx * px(y1, x1);
        const double want = (v / 255.0 - mean[c]) / stdv[c];
        worst = std::max(worst, std::abs(want - out[(c * oh + y) * ow + x]));
      }
    }
  }
  CHECK(worst < 1e-4);

  // Same-size resize is a pure normalization; corners map exactly.
  auto same = preprocess_frame(f, f.height, f.width, {0, 0, 0}, {1, 1, 1});
  for (int i = 0; i < f.width * f.height; ++i) CHECK(same[i] == float(f.rgb[i * 3]) / 255.0f);
  CHECK(out[0] == preprocess_frame(f, 2, 2, mean, stdv)[0]);

  RawFrame flat{8, 8, std::vector<std::uint8_t>(8 * 8 * 3, 51)};
  for (float v : preprocess_frame(flat, 5, 3, {0.2f, 0.2f, 0.2f}, {1, 1, 1})) CHECK(std::abs(v) < 1e-7f);
  CHECK(code_of([&] { preprocess_frame(flat, 0, 3, mean, stdv); }) == ErrorCode::kInvalidShape);
  RawFrame broken{8, 8, std::vector<std::uint8_t>(5)};
  CHECK(code_of([&] { preprocess_frame(broken, 4, 4, mean, stdv); }) == ErrorCode::kInvalidShape);
}

TEST_CASE("postprocessing") {
  Tensor probs = Tensor::from_values<float>({1, 4}, {0.1f, 0.4f, 0.4f, 0.1f});
  CHECK(postprocess(TaskKind::kClassify, {probs}) == "class=1");
  CHECK(postprocess(TaskKind::kVideo, {probs}) == "class=1");

  // [1, 3, 1, 2]: pixel 0 -> channel 2, pixel 1 -> tie between 0 and 1.
  Tensor logits = Tensor::from_values<float>({1, 3, 1, 2}, {0, 5, 1, 5, 2, -1});
  CHECK(segmentation_mask(logits) == std::vector<std::uint8_t>{2, 0});
  const auto mask = segmentation_mask(logits);
  const std::string want = "mask=" + to_hex(sha256(mask)).substr(0, 16);
  CHECK(postprocess(TaskKind::kSegment, {logits}) == want);

  // Brute-force mask oracle on seeded logits.
  Tensor big = oracle::seeded_tensor({DType::kF32, {1, 5, 6, 7}}, 4);
  auto m = segmentation_mask(big);
  auto v = big.values<float>();
  for (int p = 0; p < 42; ++p) {
    int best = 0;
    for (int c = 1; c < 5; ++c) {
      if (v[c * 42 + p] > v[best * 42 + p]) best = c;
    }
    CHECK(m[p] == best);
  }
  CHECK(code_of([&] { segmentation_mask(probs); }) == ErrorCode::kInvalidShape);
}

TEST_CASE("local smoke run") {
  PipelineHooks h;
  h.store = corpus_store();
  BenchReport r = run_pipeline(scenario("model = tiny-classifier\nframes = 100\nwidth = 64\nheight = 48\n"), h);
  CHECK(r.passed());
  CHECK(r.frames.size() == 100);
  CHECK(r.summary.frames == 100);
  CHECK(r.summary.fps.num() > 0);
  CHECK(r.frame_errors == 0);
  CHECK(r.accounting_ok);
  CHECK(r.sequential_ok);
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    const auto& f = r.frames[i];
    CHECK(telemetry::accounting_holds(f.breakdown));
    CHECK(f.breakdown.network_us == 0);
    CHECK(f.t_publish_us >= f.t_acquire_us);
    if (i > 0) CHECK(f.t_acquire_us >= r.frames[i - 1].t_publish_us);
    CHECK(f.result.rfind("class=", 0) == 0);
  }
  CHECK(std::count(r.results_log.begin(), r.results_log.end(), '\n') == 100);
}

TEST_CASE("placements give identical outputs and digests") {
  for (const auto& [model, task, frames] :
       std::vector<std::tuple<std::string, std::string, int>>{{"tiny-classifier", "classify", 12},
                                                              {"tiny-segmenter", "segment", 6},
                                                              {"tiny-video", "video", 20}}) {
    CAPTURE(model);
    const std::string base = "model = " + model + "\ntask = " + task + "\nframes = " + std::to_string(frames) +
                             "\nwidth = 96\nheight = 64\nseed = 5\n";
    PipelineHooks h;
    h.store = corpus_store();
    BenchReport local = run_pipeline(scenario(base), h);
    EdgeHost host("test-bench-edge", corpus_store(), 2.0);
    Scenario remote = scenario(base);
    remote.runtime = host.config(wire::ShapedLink{200, 50'000'000});
    BenchReport rem = run_pipeline(remote, h);
    CHECK(local.passed());
    CHECK(rem.passed());
    CHECK(local.equivalence_digest == rem.equivalence_digest);
    CHECK(local.results_log == rem.results_log);
    for (const auto& f : rem.frames) CHECK(f.breakdown.network_us >= 400);

    // A different seed changes the digest.
    PipelineHooks h2;
    h2.store = corpus_store();
    BenchReport other = run_pipeline(scenario(base + "seed = 6\n"), h2);
    CHECK(other.equivalence_digest != local.equivalence_digest);
  }
}

TEST_CASE("pipeline rejects mismatched models and replay scenarios") {
  PipelineHooks h;
  h.store = corpus_store();
  CHECK(code_of([&] { run_pipeline(scenario("model = nope\nframes = 1\n"), h); }) == ErrorCode::kModelNotFound);
  CHECK(code_of([&] { run_pipeline(scenario("model = tiny-video\ntask = classify\nframes = 1\n"), h); }) ==
        ErrorCode::kInvalidShape);
  CHECK(code_of([&] {
    run_pipeline(scenario("model = tiny-classifier\nframes = 1\nreplay.inference_us = 5\n"), h);
  }) == ErrorCode::kMalformedFrame);
}

TEST_CASE("frame errors are recorded and abort past the threshold") {
  std::atomic<int> calls{0};
  auto handler = agent::Agent(agent::AgentConfig{}, corpus_store()).as_handler();
  // The agent object must outlive the handler; keep one alive here.
  auto ag = std::make_shared<agent::Agent>(agent::AgentConfig{}, corpus_store());
  handler = ag->as_handler();
  wire::InprocRegistry::instance().bind("test-bench-flaky", [&](ByteView req) {
    wire::Frame f = wire::decode_frame(req);
    if (f.type == wire::MsgType::kInferRequest && (++calls % 4) == 0) {
      return agent::error_frame(f.request_id, ErrorCode::kBackendFailure, "flaky");
    }
    return handler(req);
  });
  Scenario s = scenario("model = tiny-classifier\nframes = 40\nwidth = 32\nheight = 32\nabort_threshold = 0.5\n");
  s.runtime.placement = runtime::RemotePlacement{"test-bench-flaky", runtime::TransportKind::kInproc, std::nullopt};
  PipelineHooks h;
  h.store = corpus_store();
  BenchReport r = run_pipeline(s, h);
  CHECK(r.frame_errors == 10);
  CHECK_FALSE(r.aborted);
  CHECK(r.summary.frames == 30);
  CHECK(r.passed());
  std::size_t bad = 0;
  for (const auto& f : r.frames) {
    if (!f.ok) {
      ++bad;
      CHECK(f.error.rfind("BACKEND_FAILURE", 0) == 0);
    }
  }
  CHECK(bad == 10);

  calls = 0;
  s.abort_threshold = 0.1;
  BenchReport a = run_pipeline(s, h);
  CHECK(a.aborted);
  CHECK_FALSE(a.passed());
  CHECK(a.frames.size() < 40);
  wire::InprocRegistry::instance().unbind("test-bench-flaky");
}

TEST_CASE("report files are deterministic and consistent") {
  PipelineHooks h;
  h.store = corpus_store();
  BenchReport r = run_pipeline(scenario("model = tiny-segmenter\ntask = segment\nframes = 8\nwidth = 48\nheight = 40\n"), h);
  std::string d1 = oracle::temp_dir("report1"), d2 = oracle::temp_dir("report2");
  CHECK(emit_report(r, d1));
  CHECK(emit_report(r, d2));
  for (const char* f : {"frames.csv", "summary.csv", "summary.txt", "results.log"}) {
    CAPTURE(f);
    CHECK(std::filesystem::exists(d1 + "/" + f));
    CHECK(slurp(d1 + "/" + f) == slurp(d2 + "/" + f));
  }
  const std::string frames = slurp(d1 + "/frames.csv");
  auto rows = csv_rows(frames);
  CHECK(rows.size() == 9);
  CHECK(frames.substr(0, frames.find('\n')) == kFramesCsvHeader);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == rows[0].size());

  // FPS recomputed from the per-frame CSV matches every summary row.
  const std::string fps = fps_from_frames_csv(frames);
  auto summary = csv_rows(slurp(d1 + "/summary.csv"));
  REQUIRE(summary.size() == 1 + telemetry::kStageCount);
  for (std::size_t i = 1; i < summary.size(); ++i) CHECK(summary[i].back() == fps);
  CHECK(slurp(d1 + "/summary.txt").find(r.equivalence_digest) != std::string::npos);

  r.accounting_ok = false;
  CHECK_FALSE(emit_report(r, d1));
  CHECK(code_of([&] { emit_report(r, "/proc/definitely/not/writable"); }) == ErrorCode::kBackendFailure);
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("the pipeline has a single inference call site") {
  const std::string src = slurp(oracle::source_dir() + "/src/bench/pipeline.cpp");
  const std::regex call(R"(\.infer\s*\()");
  const auto n = std::distance(std::sregex_iterator(src.begin(), src.end(), call), std::sregex_iterator());
  CHECK(n == 1);
}

TEST_CASE("replay reproduces published local frame rates") {
  auto fps = [](const std::string& text) {
    return run_replay(scenario("model = x\n" + text)).summary.fps.to_double();
  };
  // 764 ms per frame locally -> 1.30 FPS.
  CHECK(std::abs(fps("frames = 60\nreplay.inference_us = 764000\n") - 1.30) / 1.30 < 0.015);
  // ResNet50 pair: 120.6 ms <-> 8.29 FPS.
  CHECK(std::abs(fps("frames = 60\nreplay.inference_us = 120600\n") - 8.29) / 8.29 < 0.015);
  // 20 ms inference and no network time bound the rate at 50 FPS.
  CHECK(fps("frames = 60\nreplay.inference_us = 20000\nreplay.network_oneway_us = 0\n") == 50.0);
  CHECK(fps("frames = 10\nreplay.inference_us = 20000\nreplay.network_oneway_us = 5000\n") == 1e6 / 30000);

  BenchReport r = run_replay(scenario("model = x\nduration_s = 1\nreplay.inference_us = 300000\n"));
  CHECK(r.frames.size() == 3);
  CHECK(r.passed());
  BenchReport tiny = run_replay(scenario("model = x\nduration_s = 0.1\nreplay.inference_us = 300000\n"));
  CHECK(tiny.frames.size() == 1);
  CHECK(code_of([] { run_replay(scenario("model = x\nframes = 3\n")); }) == ErrorCode::kMalformedFrame);
  CHECK(code_of([] { scenario("model = x\nreplay.inference_us = -1\n"); }) == ErrorCode::kMalformedFrame);
}

TEST_CASE("frame size arithmetic and the segmentation calibration point") {
  auto store = corpus_store();
  const auto plan = store->require(*store->hash_for_name("tiny-classifier"));
  // Header + hash + count + (dtype, ndim, 4 dims, payload).
  CHECK(request_frame_bytes(*plan) == 19 + 32 + 2 + 2 + 4 * 8 + 3 * 32 * 32 * 4);
  // Header + count + (dtype, ndim, 2 dims, payload) + 3 timings.
  CHECK(response_frame_bytes(*plan) == 19 + 2 + 2 + 2 * 8 + 10 * 4 + 24);

  // Full-size segmentation: f32[1,3,224,224] in, f32[1,21,224,224] out, at
  // 25 MB/s + 2 ms, 20 ms edge inference, 1.68 FPS locally (DeepLabV3-ResNet50).
  const wire::ShapedLink link{2000, 25'000'000};
  const std::uint64_t req = 19 + 32 + 2 + 2 + 4 * 8 + 602'112;
  const std::uint64_t resp = 19 + 2 + 2 + 4 * 8 + 4'214'784 + 24;
  const std::uint64_t down = wire::shaped_delay_micros(link, resp);
  CHECK(std::abs(double(down) - 170'600.0) / 170'600.0 < 0.01);
  const double remote = 20'000.0 + double(wire::shaped_delay_micros(link, req)) + double(down);
  const double local = 1e6 / 1.68;
  CHECK(remote < local);

  CHECK(fps_greater(telemetry::Rational(3, 2), telemetry::Rational(4, 3)));
  CHECK_FALSE(fps_greater(telemetry::Rational(4, 3), telemetry::Rational(4, 3)));
}

TEST_CASE("small crossover grid agrees with the predicate") {
  KeyValues kv = KeyValues::parse(
      "model = tiny-classifier\nframes = 6\nwidth = 64\nheight = 48\nlocal_speed = 0.1\n"
      "grid.edge_speeds = 0.02,8\ngrid.bandwidths_Bps = 0,250000\ngrid.latency_us = 500\n");
  CrossoverGrid g = crossover_grid_from_kv(kv);
  CHECK(g.edge_speeds.size() == 2);
  CHECK(g.bandwidths_Bps == std::vector<std::uint64_t>{0, 250000});
  CrossoverTable t = run_crossover_study(g, corpus_store());
  REQUIRE(t.cells.size() == 4);
  CHECK(t.accounting_ok);
  CHECK(t.agreements() == 4);
  // Slow edge, or slow link: local wins. Fast edge on a free link: remote wins.
  CHECK_FALSE(t.cells[0].predicted_remote);
  CHECK_FALSE(t.cells[1].predicted_remote);
  CHECK(t.cells[2].predicted_remote);
  CHECK_FALSE(t.cells[3].predicted_remote);
  for (const auto& c : t.cells) {
    const auto plan = corpus_store()->require(*corpus_store()->hash_for_name("tiny-classifier"));
    CHECK(c.round_trip_us == wire::shaped_delay_micros(c.link, request_frame_bytes(*plan)) +
                                 wire::shaped_delay_micros(c.link, response_frame_bytes(*plan)));
    CHECK(c.predicted_remote == (c.remote_inference_us + double(c.round_trip_us) < c.local_inference_us));
    CHECK(c.measured_remote == fps_greater(c.remote_fps, c.local_fps));
  }
  const std::string csv = crossover_csv(t);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(crossover_text(t).find("agreement: 4/4") != std::string::npos);
  CHECK(code_of([] { crossover_grid_from_kv(KeyValues::parse("model = m\ngrid.bandwidths_Bps = 0\n")); }) ==
        ErrorCode::kMalformedFrame);
}

TEST_CASE("provider specs") {
  ProviderSpec a = parse_provider_spec("activity");
  CHECK(a.kind == ProviderSpec::Kind::kActivity);
  CHECK(a.busy_mw == 9500);
  CHECK(a.idle_mw == 600);
  ProviderSpec b = parse_provider_spec("activity:busy_w=12,idle_w=1.5");
  CHECK(b.busy_mw == 12000);
  CHECK(b.idle_mw == 1500);
  ProviderSpec r = parse_provider_spec("ramp:9.5");
  CHECK(r.kind == ProviderSpec::Kind::kRamp);
  CHECK(r.ramp_mw == 9500);
  CHECK(parse_provider_spec("file:/x/y").path == "/x/y");
  ProviderSpec bare = parse_provider_spec("/sys/energy");
  CHECK(bare.kind == ProviderSpec::Kind::kFile);
  CHECK(bare.path == "/sys/energy");
  CHECK(describe(r).find("ramp") != std::string::npos);
  for (const char* bad : {"ramp:", "ramp:-1", "activity:busy_w=1,idle_w=2", "activity:speed=3", "file:"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_provider_spec(bad), Error);
  }
}

TEST_CASE("power study with ramp providers is exact") {
  Scenario s = scenario("model = tiny-classifier\nframes = 10\nwidth = 32\nheight = 32\n");
  PowerTable t = run_power_study(s, parse_provider_spec("ramp:9.5"), parse_provider_spec("ramp:0"), 50.0,
                                 corpus_store());
  REQUIRE(t.local.robot_w);
  REQUIRE(t.remote.robot_w);
  CHECK(*t.local.robot_w == telemetry::Rational(19, 2));
  CHECK(*t.remote.robot_w == telemetry::Rational(19, 2));
  CHECK(*t.remote.edge_w == telemetry::Rational(0, 1));
  REQUIRE(t.robot_reduction_pct);
  CHECK(*t.robot_reduction_pct == 0.0);
  CHECK_FALSE(t.remote_robot_lower());
  CHECK(t.local.run_passed);
  CHECK(t.remote.run_passed);
  CHECK(power_csv(t).rfind("placement,robot_w,edge_w", 0) == 0);
}

TEST_CASE("power study with activity providers favours offloading") {
  Scenario s = scenario(
      "model = tiny-classifier\nframes = 40\nwidth = 64\nheight = 48\nlocal_speed = 0.05\nedge_speed = 1\n"
      "edge.latency_us = 2500\n");
  PowerTable t = run_power_study(s, parse_provider_spec("activity"), parse_provider_spec("activity"), 20.0,
                                 corpus_store());
  REQUIRE(t.robot_reduction_pct);
  CHECK(t.remote_robot_lower());
  CHECK(*t.robot_reduction_pct > 50.0);
  CHECK(t.local.robot_w->to_double() == doctest::Approx(9.5).epsilon(0.02));
  // The edge only burns busy power in the Remote run.
  CHECK(t.local.edge_w->to_double() == doctest::Approx(0.6).epsilon(0.02));
  CHECK(t.remote.edge_w->to_double() > 0.6);
  CHECK(power_text(t).find("robot reduction") != std::string::npos);
}
