// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "genop/telemetry/latency.hpp"
#include "genop/telemetry/rational.hpp"

namespace genop::telemetry {

// n * 10^6 / sum(per_frame_us). Throws INVALID_SHAPE on an empty list or a
// non-positive latency.
Rational fps_from_latencies(std::span<const std::int64_t> per_frame_us);

// Nearest-rank percentile: sorted[ceil(p * n / 100) - 1], integer arithmetic.
// `sorted` must be non-empty and ascending; 1 <= p <= 100.
std::int64_t nearest_rank(std::span<const std::int64_t> sorted, int percentile);

struct StageStats {
  double mean_us = 0;
  std::int64_t p50_us = 0;
  std::int64_t p95_us = 0;
  std::int64_t max_us = 0;
  double share_pct = 0;  // mean / mean(end_to_end) * 100
};

struct Summary {
  std::size_t frames = 0;
  Rational fps;
  std::array<StageStats, kStageCount> stages{};
};

// Single-writer frame log.
class Collector {
 public:
  void record_frame(const LatencyBreakdown& b) { frames_.push_back(b); }
  const std::vector<LatencyBreakdown>& frames() const { return frames_; }
  Summary summarize() const;

 private:
  std::vector<LatencyBreakdown> frames_;
};

// Columns: stage,frames,mean_us,p50_us,p95_us,max_us,share_pct,fps
// One row per stage in kStageNames order. Means and shares use three
// decimals, fps six.
inline constexpr const char* kSummaryCsvHeader =
    "stage,frames,mean_us,p50_us,p95_us,max_us,share_pct,fps";
std::string summary_csv(const Summary& s);
std::string summary_table(const Summary& s);
std::string format_fps(const Rational& fps);

}  // namespace genop::telemetry
