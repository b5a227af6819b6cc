// SPDX-License-Identifier: Apache-2.0
// agent: edge-side daemon serving inference requests for stored model plans.
//
// Log lines go to stdout, one per request, tab separated:
//   request_id  msg_type  plan_hash  request_bytes  response_bytes
//   deserialize_us  inference_us  serialize_us  outcome
#include <CLI11.hpp>

#include <csignal>
#include <iostream>
#include <thread>

#include "genop/agent/agent.hpp"
#include "genop/core/error.hpp"

using namespace genop;

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genop inference agent"};
  std::string listen = "127.0.0.1:7070";
  std::string plans = "plans";
  std::string backend = "edge-cpu";
  std::string kernels = "parallel";
  double speed = 0;
  int max_conns = 16;
  std::size_t max_msg = wire::kDefaultMaxMessageBytes;
  bool quiet = false;
  app.add_option("--listen", listen, "host:port to bind (port 0 picks a free port)");
  app.add_option("--plans", plans, "Directory of .gopl plan files");
  app.add_option("--backend", backend, "edge-cpu | edge-gpu")->check(CLI::IsMember({"edge-cpu", "edge-gpu"}));
  app.add_option("--speed-factor", speed, "Override the backend's speed factor (> 0)");
  app.add_option("--kernels", kernels, "parallel | serial")->check(CLI::IsMember({"parallel", "serial"}));
  app.add_option("--max-conns", max_conns, "Concurrent connection limit");
  app.add_option("--max-msg-bytes", max_msg, "Largest accepted frame body");
  app.add_flag("-q,--quiet", quiet, "Do not print per-request log lines");
  CLI11_PARSE(app, argc, argv);

  try {
    agent::AgentConfig cfg;
    cfg.listen = wire::parse_endpoint(listen);
    cfg.plan_store = plans;
    cfg.backend = backend;
    cfg.speed_factor = speed > 0 ? speed : agent::default_speed_for_backend(backend);
    cfg.kernel_mode = kernels == "serial" ? interp::KernelMode::kSerial : interp::KernelMode::kParallel;
    cfg.max_concurrent_connections = max_conns;
    cfg.max_message_bytes = max_msg;
    cfg.validate();

    auto store = std::make_shared<agent::PlanStore>(plans);
    auto ag = std::make_shared<agent::Agent>(cfg, store, quiet ? nullptr : &std::cout);
    agent::AgentServer server(ag);
    server.start();
    std::cerr << "agent listening on " << cfg.listen.host << ":" << server.port() << " backend=" << backend
              << " speed=" << cfg.speed_factor << " plans=" << store->list().size() << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    std::cerr << "agent: shutting down" << std::endl;
    server.stop();
  } catch (const Error& e) {
    std::cerr << "agent: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
