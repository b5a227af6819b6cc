// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "genop/telemetry/rational.hpp"

namespace genop::telemetry {

struct PowerSample {
  std::int64_t t_us = 0;       // monotonic timestamp
  std::int64_t energy_uj = 0;  // cumulative, never wraps

  friend bool operator==(const PowerSample&, const PowerSample&) = default;
};

// Watts = microjoules per microsecond, exactly. Throws INVALID_SHAPE unless
// last.t > first.t and energy did not decrease.
Rational avg_power(const PowerSample& first, const PowerSample& last);

class EnergyProvider {
 public:
  virtual ~EnergyProvider() = default;
  // Successive reads have strictly increasing t_us and non-decreasing
  // energy_uj. Throws BACKEND_FAILURE when the counter cannot be read.
  virtual PowerSample read() = 0;
};

// Reads "<t_us> <energy_uj>" from a file that a producer rewrites
// atomically. A read that goes backwards in time or energy is an error.
class FileEnergyProvider : public EnergyProvider {
 public:
  explicit FileEnergyProvider(std::string path) : path_(std::move(path)) {}
  PowerSample read() override;

 private:
  std::string path_;
  std::optional<PowerSample> last_;
};

// Constant power on a virtual clock: each read advances t by step_us and
// E(t) = milliwatts * t / 1000. Exact when milliwatts * step_us is a
// multiple of 1000.
class RampEnergyProvider : public EnergyProvider {
 public:
  RampEnergyProvider(std::int64_t milliwatts, std::int64_t step_us = 100'000)
      : milliwatts_(milliwatts), step_us_(step_us) {}
  PowerSample read() override;

 private:
  std::int64_t milliwatts_;
  std::int64_t step_us_;
  std::int64_t t_us_ = 0;
};

// Busy/idle bookkeeping for one side of the system (robot or edge). Time
// is wall-clock microseconds since construction.
class ActivityTracker {
 public:
  ActivityTracker();

  void set_busy(bool busy);
  // Adds busy time measured elsewhere (for example agent-reported
  // inference time).
  void credit_busy(std::int64_t micros);

  std::int64_t now_us() const;
  // Busy microseconds accumulated up to now_us(), including an open
  // interval and credits.
  std::int64_t busy_us() const;

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point origin_;
  mutable std::mutex mu_;
  bool busy_ = false;
  std::int64_t busy_since_ = 0;
  std::int64_t busy_total_ = 0;
};

// Synthetic energy counter driven by an ActivityTracker:
// E(t) = idle_mw * t + (busy_mw - idle_mw) * busy_us(t), in microjoules.
class ActivityEnergyProvider : public EnergyProvider {
 public:
  ActivityEnergyProvider(std::shared_ptr<ActivityTracker> tracker, std::int64_t busy_milliwatts,
                         std::int64_t idle_milliwatts);
  PowerSample read() override;

 private:
  std::shared_ptr<ActivityTracker> tracker_;
  std::int64_t busy_mw_;
  std::int64_t idle_mw_;
  std::int64_t last_t_ = -1;
  std::int64_t last_e_ = 0;
};

// Polls a provider on a background thread. Samples that do not advance
// time are dropped; read failures are counted, not fatal.
class PowerSampler {
 public:
  PowerSampler(std::shared_ptr<EnergyProvider> provider, double rate_hz = 10.0);
  ~PowerSampler();

  void start();
  void stop();

  std::vector<PowerSample> samples() const;
  std::size_t failures() const { return failures_.load(); }
  // avg_power(first, last); nullopt with fewer than two samples.
  std::optional<Rational> average() const;

 private:
  void sample_once();

  std::shared_ptr<EnergyProvider> provider_;
  std::chrono::microseconds period_;
  mutable std::mutex mu_;
  std::vector<PowerSample> samples_;
  std::atomic<std::size_t> failures_{0};
  std::atomic<bool> running_{false};
  std::thread thread_;
};

// Rounded to the nearest milliwatt.
std::int64_t watts_to_milliwatts(double watts);

}  // namespace genop::telemetry
