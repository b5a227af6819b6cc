// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace genop::telemetry {

// Per-frame stage timings in microseconds.
struct LatencyBreakdown {
  std::int64_t acquire_us = 0;
  std::int64_t preprocess_us = 0;
  std::int64_t serialize_us = 0;
  std::int64_t network_us = 0;
  std::int64_t inference_us = 0;
  std::int64_t deserialize_us = 0;
  std::int64_t postprocess_us = 0;
  std::int64_t publish_us = 0;
  std::int64_t end_to_end_us = 0;

  std::int64_t component_sum() const;
  std::int64_t component_max() const;

  friend bool operator==(const LatencyBreakdown&, const LatencyBreakdown&) = default;
};

inline constexpr std::int64_t kDefaultAccountingEpsilonUs = 2000;

// end_to_end >= every component and |end_to_end - sum| <= epsilon.
bool accounting_holds(const LatencyBreakdown& b,
                      std::int64_t epsilon_us = kDefaultAccountingEpsilonUs);

inline constexpr std::size_t kStageCount = 9;
// The eight stages in pipeline order, then end_to_end.
inline constexpr std::array<std::string_view, kStageCount> kStageNames = {
    "acquire",   "preprocess",  "serialize", "network", "inference",
    "deserialize", "postprocess", "publish",   "end_to_end"};

std::array<std::int64_t, kStageCount> stage_values(const LatencyBreakdown& b);

}  // namespace genop::telemetry
