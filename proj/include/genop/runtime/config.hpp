// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <variant>

#include "genop/core/kv.hpp"
#include "genop/interp/kernels.hpp"
#include "genop/wire/transport.hpp"

namespace genop::runtime {

enum class TransportKind { kTcp, kInproc };

struct LocalPlacement {
  double speed_factor = 1.0;
  interp::KernelMode kernel_mode = interp::KernelMode::kParallel;
};

struct RemotePlacement {
  // host:port for tcp, a registry name for inproc.
  std::string endpoint;
  TransportKind transport = TransportKind::kTcp;
  std::optional<wire::ShapedLink> shaping;
};

using Placement = std::variant<LocalPlacement, RemotePlacement>;

inline bool is_remote(const Placement& p) { return std::holds_alternative<RemotePlacement>(p); }
std::string describe(const Placement& p);

struct RuntimeConfig {
  Placement placement = LocalPlacement{};
  std::string plan_store = "plans";
  std::chrono::milliseconds timeout = wire::kDefaultTimeout;
  std::size_t max_message_bytes = wire::kDefaultMaxMessageBytes;
};

// Configuration keys. Each may be overridden by GENOP_<KEY> with '.' -> '_',
// e.g. GENOP_SHAPE_LATENCY_US.
//   placement        local | remote
//   endpoint         host:port (tcp) or agent name (inproc)
//   transport        tcp | inproc
//   speed_factor     local backend speed, > 0
//   kernels          parallel | serial
//   shape.latency_us one-way latency added per message
//   shape.bandwidth_Bps  bytes per second, 0 = unlimited
//   plan_store       directory of .gopl files
//   timeout_ms       per-call deadline
//   max_msg_bytes    frame size limit
inline constexpr const char* kEnvPrefix = "GENOP_";
const std::vector<std::string>& config_keys();

// Throws MALFORMED_FRAME on unknown values or an endpoint/placement mismatch.
RuntimeConfig config_from_kv(const KeyValues& kv);
// File contents, then environment overrides.
RuntimeConfig load_config(const std::string& path);
// Environment overrides only, on top of defaults.
RuntimeConfig config_from_env(KeyValues base = {});

}  // namespace genop::runtime
