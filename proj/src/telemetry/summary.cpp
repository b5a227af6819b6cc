// SPDX-License-Identifier: Apache-2.0
#include "genop/telemetry/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace genop::telemetry {

Rational fps_from_latencies(std::span<const std::int64_t> per_frame_us) {
  if (per_frame_us.empty()) throw Error(ErrorCode::kInvalidShape, "no frames");
  std::int64_t total = 0;
  for (std::int64_t us : per_frame_us) {
    if (us <= 0) throw Error(ErrorCode::kInvalidShape, "frame latency must be positive");
    total += us;
  }
  return Rational(static_cast<std::int64_t>(per_frame_us.size()) * 1'000'000, total);
}

std::int64_t nearest_rank(std::span<const std::int64_t> sorted, int percentile) {
  if (sorted.empty()) throw Error(ErrorCode::kInvalidShape, "no values");
  if (percentile < 1 || percentile > 100) throw Error(ErrorCode::kInvalidShape, "bad percentile");
  std::size_t rank = (static_cast<std::size_t>(percentile) * sorted.size() + 99) / 100;
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Summary Collector::summarize() const {
  Summary s;
  s.frames = frames_.size();
  if (frames_.empty()) return s;

  std::vector<std::int64_t> e2e;
  e2e.reserve(frames_.size());
  for (const auto& f : frames_) e2e.push_back(f.end_to_end_us);
  s.fps = fps_from_latencies(e2e);

  std::array<std::vector<std::int64_t>, kStageCount> columns;
  for (const auto& f : frames_) {
    auto v = stage_values(f);
    for (std::size_t i = 0; i < kStageCount; ++i) columns[i].push_back(v[i]);
  }
  for (std::size_t i = 0; i < kStageCount; ++i) {
    auto& col = columns[i];
    std::int64_t sum = 0;
    for (auto v : col) sum += v;
    s.stages[i].mean_us = static_cast<double>(sum) / static_cast<double>(col.size());
    std::sort(col.begin(), col.end());
    s.stages[i].p50_us = nearest_rank(col, 50);
    s.stages[i].p95_us = nearest_rank(col, 95);
    s.stages[i].max_us = col.back();
  }
  const double e2e_mean = s.stages[kStageCount - 1].mean_us;
  for (auto& st : s.stages) st.share_pct = e2e_mean > 0 ? st.mean_us / e2e_mean * 100.0 : 0.0;
  return s;
}

std::string format_fps(const Rational& fps) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", fps.to_double());
  return buf;
}

std::string summary_csv(const Summary& s) {
  std::string out = std::string(kSummaryCsvHeader) + "\n";
  const std::string fps = format_fps(s.fps);
  char buf[256];
  for (std::size_t i = 0; i < kStageCount; ++i) {
    const auto& st = s.stages[i];
    std::snprintf(buf, sizeof buf, "%s,%zu,%.3f,%lld,%lld,%lld,%.3f,%s\n",
                  std::string(kStageNames[i]).c_str(), s.frames, st.mean_us,
                  static_cast<long long>(st.p50_us), static_cast<long long>(st.p95_us),
                  static_cast<long long>(st.max_us), st.share_pct, fps.c_str());
    out += buf;
  }
  return out;
}

std::string summary_table(const Summary& s) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "frames: %zu   fps: %s\n", s.frames, format_fps(s.fps).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "%-12s %14s %10s %10s %10s %8s\n", "stage", "mean_us", "p50_us",
                "p95_us", "max_us", "share%");
  out += buf;
  for (std::size_t i = 0; i < kStageCount; ++i) {
    const auto& st = s.stages[i];
    std::snprintf(buf, sizeof buf, "%-12s %14.3f %10lld %10lld %10lld %8.2f\n",
                  std::string(kStageNames[i]).c_str(), st.mean_us,
                  static_cast<long long>(st.p50_us), static_cast<long long>(st.p95_us),
                  static_cast<long long>(st.max_us), st.share_pct);
    out += buf;
  }
  return out;
}

}  // namespace genop::telemetry
