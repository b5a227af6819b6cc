// SPDX-License-Identifier: Apache-2.0
#include "genop/interp/execute.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace genop::interp {

using Clock = std::chrono::steady_clock;

void check_inputs(std::span<const TensorSpec> specs, std::span<const Tensor> inputs) {
  if (specs.size() != inputs.size()) {
    throw Error(ErrorCode::kInvalidShape, "expected " + std::to_string(specs.size()) +
                                              " inputs, got " + std::to_string(inputs.size()));
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!inputs[i].valid()) {
      throw Error(ErrorCode::kInvalidShape, "input " + std::to_string(i) + " is empty");
    }
    if (inputs[i].dtype() != specs[i].dtype) {
      throw Error(ErrorCode::kDtypeMismatch, "input " + std::to_string(i) + " is " +
                                                 inputs[i].spec().to_string() + ", expected " +
                                                 specs[i].to_string());
    }
    if (inputs[i].shape() != specs[i].shape) {
      throw Error(ErrorCode::kInvalidShape, "input " + std::to_string(i) + " is " +
                                                inputs[i].spec().to_string() + ", expected " +
                                                specs[i].to_string());
    }
  }
}

ExecutionReport execute_plan(const planc::ModelPlan& plan, std::span<const Tensor> inputs,
                             const ExecOptions& options) {
  if (!(options.speed_factor > 0.0) || !std::isfinite(options.speed_factor)) {
    throw Error(ErrorCode::kBackendFailure, "speed_factor must be positive");
  }
  check_inputs(plan.input_specs, inputs);

  const auto start = Clock::now();
  std::vector<Tensor> slots(plan.slot_count());
  std::copy(inputs.begin(), inputs.end(), slots.begin());
  std::copy(plan.const_pool.begin(), plan.const_pool.end(),
            slots.begin() + static_cast<std::ptrdiff_t>(inputs.size()));

  ExecutionReport report;
  report.per_op_micros.reserve(plan.ops.size());
  std::vector<Tensor> args;
  for (std::size_t i = 0; i < plan.ops.size(); ++i) {
    const auto& ins = plan.ops[i];
    const auto op_start = Clock::now();
    args.clear();
    for (auto s : ins.operands) {
      if (s >= slots.size() || !slots[s].valid()) {
        throw Error(ErrorCode::kBackendFailure, "instruction " + std::to_string(i) +
                                                    " reads undefined slot " + std::to_string(s));
      }
      args.push_back(slots[s]);
    }
    if (ins.output >= slots.size()) {
      throw Error(ErrorCode::kBackendFailure, "instruction " + std::to_string(i) +
                                                  " writes slot out of range");
    }
    try {
      slots[ins.output] = run_kernel(ins.kind, ins.attrs, args, options.mode);
    } catch (const Error& e) {
      throw Error(ErrorCode::kBackendFailure, "instruction " + std::to_string(i) + " (" +
                                                  std::string(planc::op_kind_name(ins.kind)) +
                                                  "): " + e.detail());
    }
    auto elapsed = Clock::now() - op_start;
    if (options.speed_factor < 1.0) {
      auto target = std::chrono::duration_cast<Clock::duration>(elapsed / options.speed_factor);
      std::this_thread::sleep_until(op_start + target);
      elapsed = Clock::now() - op_start;
    }
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count();
    if (options.speed_factor > 1.0) {
      micros = static_cast<std::int64_t>(static_cast<double>(micros) / options.speed_factor);
    }
    report.per_op_micros.emplace_back(i, micros);
  }

  for (std::size_t i = 0; i < plan.output_slots.size(); ++i) {
    const Tensor& out = slots.at(plan.output_slots[i]);
    if (out.spec() != plan.output_specs[i]) {
      throw Error(ErrorCode::kBackendFailure, "output " + std::to_string(i) + " is " +
                                                  out.spec().to_string() + ", plan declares " +
                                                  plan.output_specs[i].to_string());
    }
    report.outputs.push_back(out);
  }

  auto total = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
  if (options.speed_factor > 1.0) {
    total = static_cast<std::int64_t>(static_cast<double>(total) / options.speed_factor);
  }
  std::int64_t max_op = 0;
  for (const auto& [_, us] : report.per_op_micros) max_op = std::max(max_op, us);
  report.total_micros = std::max(total, max_op);
  return report;
}

}  // namespace genop::interp
