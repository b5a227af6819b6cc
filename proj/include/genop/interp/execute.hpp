// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "genop/interp/kernels.hpp"
#include "genop/planc/plan.hpp"

namespace genop::interp {

struct ExecOptions {
  // < 1 sleeps after each instruction to stretch it to elapsed/speed_factor;
  // > 1 leaves wall time alone and divides the reported timings.
  double speed_factor = 1.0;
  KernelMode mode = KernelMode::kParallel;
};

struct ExecutionReport {
  std::vector<Tensor> outputs;
  std::vector<std::pair<std::size_t, std::int64_t>> per_op_micros;
  std::int64_t total_micros = 0;
};

// Throws DTYPE_MISMATCH / INVALID_SHAPE when inputs do not match
// input_specs, BACKEND_FAILURE when a kernel rejects its operands.
// Reentrant: the plan is only read.
ExecutionReport execute_plan(const planc::ModelPlan& plan, std::span<const Tensor> inputs,
                             const ExecOptions& options = {});

// Input validation used by execute_plan and by the runtime before a remote
// call.
void check_inputs(std::span<const TensorSpec> specs, std::span<const Tensor> inputs);

}  // namespace genop::interp
