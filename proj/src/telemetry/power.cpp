// SPDX-License-Identifier: Apache-2.0
#include "genop/telemetry/power.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace genop::telemetry {

Rational avg_power(const PowerSample& first, const PowerSample& last) {
  if (last.t_us <= first.t_us) {
    throw Error(ErrorCode::kInvalidShape, "power window must have last.t > first.t");
  }
  if (last.energy_uj < first.energy_uj) {
    throw Error(ErrorCode::kInvalidShape, "energy counter decreased");
  }
  return Rational(last.energy_uj - first.energy_uj, last.t_us - first.t_us);
}

PowerSample FileEnergyProvider::read() {
  std::ifstream in(path_);
  if (!in) throw Error(ErrorCode::kBackendFailure, "cannot open energy counter " + path_);
  PowerSample s;
  if (!(in >> s.t_us >> s.energy_uj)) {
    throw Error(ErrorCode::kBackendFailure, "energy counter " + path_ + " is not '<t_us> <energy_uj>'");
  }
  if (last_ && (s.t_us < last_->t_us || s.energy_uj < last_->energy_uj)) {
    throw Error(ErrorCode::kBackendFailure, "energy counter " + path_ + " went backwards");
  }
  last_ = s;
  return s;
}

PowerSample RampEnergyProvider::read() {
  t_us_ += step_us_;
  return {t_us_, milliwatts_ * t_us_ / 1000};
}

ActivityTracker::ActivityTracker() : origin_(Clock::now()) {}

std::int64_t ActivityTracker::now_us() const {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - origin_).count();
}

void ActivityTracker::set_busy(bool busy) {
  std::lock_guard lock(mu_);
  if (busy == busy_) return;
  const std::int64_t now = now_us();
  if (busy) {
    busy_since_ = now;
  } else {
    busy_total_ += now - busy_since_;
  }
  busy_ = busy;
}

void ActivityTracker::credit_busy(std::int64_t micros) {
  std::lock_guard lock(mu_);
  busy_total_ += micros;
}

std::int64_t ActivityTracker::busy_us() const {
  std::lock_guard lock(mu_);
  return busy_total_ + (busy_ ? now_us() - busy_since_ : 0);
}

ActivityEnergyProvider::ActivityEnergyProvider(std::shared_ptr<ActivityTracker> tracker,
                                               std::int64_t busy_milliwatts,
                                               std::int64_t idle_milliwatts)
    : tracker_(std::move(tracker)), busy_mw_(busy_milliwatts), idle_mw_(idle_milliwatts) {}

PowerSample ActivityEnergyProvider::read() {
  std::int64_t t = tracker_->now_us();
  while (t <= last_t_) {
    std::this_thread::yield();
    t = tracker_->now_us();
  }
  // Credited busy time can run ahead of the clock; clamp to elapsed time.
  const std::int64_t busy = std::min(tracker_->busy_us(), t);
  std::int64_t e = (idle_mw_ * t + (busy_mw_ - idle_mw_) * busy) / 1000;
  if (e < last_e_) e = last_e_;
  last_t_ = t;
  last_e_ = e;
  return {t, e};
}

PowerSampler::PowerSampler(std::shared_ptr<EnergyProvider> provider, double rate_hz)
    : provider_(std::move(provider)),
      period_(static_cast<std::int64_t>(1e6 / (rate_hz > 0 ? rate_hz : 10.0))) {}

PowerSampler::~PowerSampler() { stop(); }

void PowerSampler::sample_once() {
  try {
    PowerSample s = provider_->read();
    std::lock_guard lock(mu_);
    if (samples_.empty() || s.t_us > samples_.back().t_us) samples_.push_back(s);
  } catch (const std::exception&) {
    ++failures_;
  }
}

void PowerSampler::start() {
  if (running_.exchange(true)) return;
  sample_once();
  thread_ = std::thread([this] {
    auto next = std::chrono::steady_clock::now() + period_;
    while (running_.load()) {
      std::this_thread::sleep_until(std::min(next, std::chrono::steady_clock::now() +
                                                       std::chrono::milliseconds(20)));
      if (std::chrono::steady_clock::now() >= next) {
        sample_once();
        next += period_;
      }
    }
  });
}

void PowerSampler::stop() {
  if (!running_.exchange(false)) return;
  if (thread_.joinable()) thread_.join();
  sample_once();
}

std::vector<PowerSample> PowerSampler::samples() const {
  std::lock_guard lock(mu_);
  return samples_;
}

std::optional<Rational> PowerSampler::average() const {
  std::lock_guard lock(mu_);
  if (samples_.size() < 2) return std::nullopt;
  return avg_power(samples_.front(), samples_.back());
}

std::int64_t watts_to_milliwatts(double watts) {
  return static_cast<std::int64_t>(std::llround(watts * 1000.0));
}

}  // namespace genop::telemetry
