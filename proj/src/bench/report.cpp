// SPDX-License-Identifier: Apache-2.0
#include "genop/bench/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "genop/core/error.hpp"

namespace genop::bench {
namespace {

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

}  // namespace

std::string frames_csv(const BenchReport& r) {
  std::ostringstream s;
  s << kFramesCsvHeader << "\n";
  for (const auto& f : r.frames) {
    const auto& b = f.breakdown;
    s << f.index << "," << (f.ok ? 1 : 0) << "," << f.t_acquire_us << "," << f.t_publish_us << ","
      << b.acquire_us << "," << b.preprocess_us << "," << b.serialize_us << "," << b.network_us << ","
      << b.inference_us << "," << b.deserialize_us << "," << b.postprocess_us << "," << b.publish_us << ","
      << b.end_to_end_us << "," << csv_safe(f.ok ? f.result : f.error) << "\n";
  }
  return s.str();
}

std::string summary_text(const BenchReport& r) {
  std::ostringstream s;
  s << "# scenario\n" << r.scenario_echo << "\n"
    << "placement: " << r.placement << "\n"
    << "frames: " << r.frames.size() << " attempted, " << r.summary.frames << " ok, " << r.frame_errors
    << " failed\n"
    << "fps: " << telemetry::format_fps(r.summary.fps) << "\n\n";
  if (r.summary.frames > 0) s << telemetry::summary_table(r.summary) << "\n";
  s << "accounting invariant: " << (r.accounting_ok ? "pass" : "FAIL") << "\n"
    << "sequential frames: " << (r.sequential_ok ? "pass" : "FAIL") << "\n"
    << "aborted: " << (r.aborted ? "yes" : "no") << "\n"
    << "equivalence digest: " << r.equivalence_digest << "\n"
    << "verdict: " << (r.passed() ? "PASS" : "FAIL") << "\n";
  return s.str();
}

void write_text(const std::string& out_dir, const std::string& name, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kBackendFailure, "cannot create " + out_dir + ": " + ec.message());
  const fs::path path = fs::path(out_dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kBackendFailure, "cannot write " + path.string());
}

bool emit_report(const BenchReport& r, const std::string& out_dir) {
  write_text(out_dir, "frames.csv", frames_csv(r));
  write_text(out_dir, "summary.csv", r.summary.frames > 0 ? telemetry::summary_csv(r.summary)
                                                           : std::string(telemetry::kSummaryCsvHeader) + "\n");
  write_text(out_dir, "summary.txt", summary_text(r));
  write_text(out_dir, "results.log", r.results_log);
  return r.passed();
}

}  // namespace genop::bench
