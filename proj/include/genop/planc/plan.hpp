// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "genop/core/bytes.hpp"
#include "genop/planc/graph.hpp"
#include "genop/planc/passes.hpp"

namespace genop::planc {

inline constexpr std::uint16_t kPlanVersion = 1;

struct Instruction {
  OpKind kind = OpKind::kMatMul;
  std::vector<std::uint32_t> operands;  // slot indices
  std::uint32_t output = 0;             // slot index
  OpAttrs attrs;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// Frozen executable artifact. Slot layout: inputs occupy slots
// [0, inputs), constants the next const_pool.size() slots, and every
// instruction defines one fresh slot after that, in order.
struct ModelPlan {
  std::uint16_t plan_version = kPlanVersion;
  std::vector<TensorSpec> input_specs;
  std::vector<TensorSpec> output_specs;
  std::vector<std::uint32_t> output_slots;
  std::vector<Tensor> const_pool;
  std::vector<Instruction> ops;
  Digest plan_hash{};

  std::uint32_t slot_count() const {
    return static_cast<std::uint32_t>(input_specs.size() + const_pool.size() + ops.size());
  }
};

// Runs the passes in order, infers shapes, orders and slots the graph, and
// hashes the result. Throws INVALID_SHAPE naming the node on inference
// failure, BACKEND_FAILURE if const folding rejects its inputs.
ModelPlan compile(const Graph& g, std::span<const Pass> passes);

// Binary layout, all integers little-endian:
//   "GOPL" | u16 plan_version
//   | u64 len | specs:  u16 n_in, spec*; u16 n_out, (spec, u32 slot)*
//   | u64 len | consts: u32 n, tensor*
//   | u64 len | instrs: u32 n, (u8 kind, u8 n_operands, u32 slot*, u32 out,
//                                i32 stride, i32 pad, i32 kernel, i32 axis)*
//   | 32-byte SHA-256 of every preceding byte
Bytes serialize_plan(const ModelPlan& p);

// Throws MALFORMED_FRAME on truncation, bad magic, unsupported version,
// hash mismatch or an instruction list that reads a slot before defining it.
ModelPlan deserialize_plan(ByteView bytes);

// Structural check used by deserialize_plan: slot def-before-use and
// operand arity. Throws MALFORMED_FRAME.
void validate_plan_slots(const ModelPlan& p);

ModelPlan load_plan_file(const std::string& path);
void save_plan_file(const ModelPlan& p, const std::string& path);

}  // namespace genop::planc
