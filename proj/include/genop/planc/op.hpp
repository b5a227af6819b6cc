// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "genop/core/tensor.hpp"

namespace genop::planc {

// Plan-file values are stable; do not renumber.
enum class OpKind : std::uint8_t {
  kInput = 0,
  kConst = 1,
  kMatMul = 2,
  kConv2D = 3,
  kReLU = 4,
  kAdd = 5,
  kMaxPool2D = 6,
  kGlobalAvgPool = 7,
  kSoftmax = 8,
  kArgMaxTop1 = 9,
  kFusedConv2DReLU = 10,
  kFusedMatMulReLU = 11,
};

inline constexpr std::uint8_t kMaxOpKind = 11;

std::string_view op_kind_name(OpKind kind);
// Only the kinds a source file may spell; fused kinds and input/const are
// rejected here.
std::optional<OpKind> parse_op_kind(std::string_view name);
int op_arity(OpKind kind);
bool is_compute(OpKind kind);

struct OpAttrs {
  std::int32_t stride = 1;
  std::int32_t pad = 0;
  std::int32_t kernel = 0;  // MaxPool2D window (square)
  std::int32_t axis = -1;   // Softmax

  friend bool operator==(const OpAttrs&, const OpAttrs&) = default;
};

// Static shape rules. Throws INVALID_SHAPE with a description of the failure.
TensorSpec infer_output_spec(OpKind kind, const OpAttrs& attrs,
                             std::span<const TensorSpec> operands);

// floor((in + 2*pad - window) / stride) + 1; throws INVALID_SHAPE if < 1.
std::int64_t window_output_dim(std::int64_t in, std::int64_t window, std::int64_t stride,
                               std::int64_t pad);

}  // namespace genop::planc
