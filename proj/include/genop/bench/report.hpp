// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "genop/bench/pipeline.hpp"

namespace genop::bench {

// frames.csv columns, one row per attempted frame:
//   frame,ok,t_acquire_us,t_publish_us,acquire_us,preprocess_us,serialize_us,
//   network_us,inference_us,deserialize_us,postprocess_us,publish_us,
//   end_to_end_us,result
// Failed frames have ok = 0 and the error in the result column.
inline constexpr const char* kFramesCsvHeader =
    "frame,ok,t_acquire_us,t_publish_us,acquire_us,preprocess_us,serialize_us,network_us,"
    "inference_us,deserialize_us,postprocess_us,publish_us,end_to_end_us,result";

std::string frames_csv(const BenchReport& r);
// Scenario echo, placement, stage table, invariant verdicts and digest.
std::string summary_text(const BenchReport& r);

// Writes frames.csv, summary.csv, summary.txt and results.log into
// `out_dir` (created if needed). Output depends only on the report, so
// emitting twice gives identical files. Returns r.passed(); throws
// BACKEND_FAILURE on I/O errors.
bool emit_report(const BenchReport& r, const std::string& out_dir);

// Writes `content` to out_dir/name, creating out_dir. BACKEND_FAILURE on
// failure.
void write_text(const std::string& out_dir, const std::string& name, const std::string& content);

}  // namespace genop::bench
