// SPDX-License-Identifier: Apache-2.0
#include "genop/telemetry/latency.hpp"

#include <algorithm>
#include <cstdlib>

namespace genop::telemetry {

std::array<std::int64_t, kStageCount> stage_values(const LatencyBreakdown& b) {
  return {b.acquire_us,   b.preprocess_us,  b.serialize_us, b.network_us,   b.inference_us,
          b.deserialize_us, b.postprocess_us, b.publish_us,   b.end_to_end_us};
}

std::int64_t LatencyBreakdown::component_sum() const {
  auto v = stage_values(*this);
  std::int64_t s = 0;
  for (std::size_t i = 0; i + 1 < kStageCount; ++i) s += v[i];
  return s;
}

std::int64_t LatencyBreakdown::component_max() const {
  auto v = stage_values(*this);
  return *std::max_element(v.begin(), v.end() - 1);
}

bool accounting_holds(const LatencyBreakdown& b, std::int64_t epsilon_us) {
  auto v = stage_values(b);
  for (std::size_t i = 0; i + 1 < kStageCount; ++i) {
    if (v[i] < 0) return false;
  }
  return b.end_to_end_us >= b.component_max() &&
         std::llabs(b.end_to_end_us - b.component_sum()) <= epsilon_us;
}

}  // namespace genop::telemetry
