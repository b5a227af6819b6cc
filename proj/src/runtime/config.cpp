// SPDX-License-Identifier: Apache-2.0
#include "genop/runtime/config.hpp"

#include <sstream>

namespace genop::runtime {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "placement",          "endpoint",   "transport",  "speed_factor",  "kernels",
      "shape.latency_us",   "shape.bandwidth_Bps", "plan_store", "timeout_ms", "max_msg_bytes"};
  return keys;
}

std::string describe(const Placement& p) {
  if (auto* l = std::get_if<LocalPlacement>(&p)) {
    std::ostringstream s;
    s << "local(speed=" << l->speed_factor << ")";
    return s.str();
  }
  const auto& r = std::get<RemotePlacement>(p);
  std::string s = std::string("remote(") + (r.transport == TransportKind::kTcp ? "tcp" : "inproc") +
                  "," + r.endpoint;
  if (r.shaping) {
    s += ",latency_us=" + std::to_string(r.shaping->one_way_latency_micros) +
         ",bandwidth_Bps=" + std::to_string(r.shaping->bandwidth_bytes_per_sec);
  }
  return s + ")";
}

RuntimeConfig config_from_kv(const KeyValues& kv) {
  RuntimeConfig cfg;
  cfg.plan_store = kv.get("plan_store", cfg.plan_store);
  cfg.timeout = std::chrono::milliseconds(kv.get_int("timeout_ms", cfg.timeout.count()));
  cfg.max_message_bytes = kv.get_uint("max_msg_bytes", cfg.max_message_bytes);
  if (cfg.timeout.count() <= 0) throw Error(ErrorCode::kMalformedFrame, "timeout_ms must be > 0");

  const std::string placement = kv.get("placement", "local");
  if (placement == "local") {
    if (kv.has("endpoint")) {
      throw Error(ErrorCode::kMalformedFrame, "endpoint given for local placement");
    }
    LocalPlacement local;
    local.speed_factor = kv.get_double("speed_factor", 1.0);
    if (!(local.speed_factor > 0.0)) {
      throw Error(ErrorCode::kMalformedFrame, "speed_factor must be > 0");
    }
    const std::string kernels = kv.get("kernels", "parallel");
    if (kernels == "serial") {
      local.kernel_mode = interp::KernelMode::kSerial;
    } else if (kernels != "parallel") {
      throw Error(ErrorCode::kMalformedFrame, "kernels must be parallel or serial");
    }
    cfg.placement = local;
  } else if (placement == "remote") {
    RemotePlacement remote;
    remote.endpoint = kv.get("endpoint", "");
    if (remote.endpoint.empty()) {
      throw Error(ErrorCode::kMalformedFrame, "remote placement needs an endpoint");
    }
    const std::string transport = kv.get("transport", "tcp");
    if (transport == "tcp") {
      remote.transport = TransportKind::kTcp;
    } else if (transport == "inproc") {
      remote.transport = TransportKind::kInproc;
    } else {
      throw Error(ErrorCode::kMalformedFrame, "transport must be tcp or inproc");
    }
    if (kv.has("shape.latency_us") || kv.has("shape.bandwidth_Bps")) {
      wire::ShapedLink link;
      link.one_way_latency_micros = kv.get_uint("shape.latency_us", 0);
      link.bandwidth_bytes_per_sec = kv.get_uint("shape.bandwidth_Bps", 0);
      remote.shaping = link;
    }
    cfg.placement = remote;
  } else {
    throw Error(ErrorCode::kMalformedFrame, "placement must be local or remote");
  }
  return cfg;
}

RuntimeConfig load_config(const std::string& path) {
  KeyValues kv = KeyValues::load(path);
  kv.apply_env(kEnvPrefix, config_keys());
  return config_from_kv(kv);
}

RuntimeConfig config_from_env(KeyValues base) {
  base.apply_env(kEnvPrefix, config_keys());
  return config_from_kv(base);
}

}  // namespace genop::runtime
