// SPDX-License-Identifier: Apache-2.0
#include "genop/planc/op.hpp"

#include <string>

namespace genop::planc {

std::string_view op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::kInput: return "input";
    case OpKind::kConst: return "const";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kConv2D: return "conv2d";
    case OpKind::kReLU: return "relu";
    case OpKind::kAdd: return "add";
    case OpKind::kMaxPool2D: return "maxpool2d";
    case OpKind::kGlobalAvgPool: return "globalavgpool";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kArgMaxTop1: return "argmax_top1";
    case OpKind::kFusedConv2DReLU: return "fused_conv2d_relu";
    case OpKind::kFusedMatMulReLU: return "fused_matmul_relu";
  }
  return "?";
}

std::optional<OpKind> parse_op_kind(std::string_view name) {
  for (std::uint8_t k = static_cast<std::uint8_t>(OpKind::kMatMul);
       k <= static_cast<std::uint8_t>(OpKind::kArgMaxTop1); ++k) {
    if (op_kind_name(static_cast<OpKind>(k)) == name) return static_cast<OpKind>(k);
  }
  return std::nullopt;
}

int op_arity(OpKind kind) {
  switch (kind) {
    case OpKind::kInput:
    case OpKind::kConst:
      return 0;
    case OpKind::kMatMul:
    case OpKind::kConv2D:
    case OpKind::kAdd:
    case OpKind::kFusedConv2DReLU:
    case OpKind::kFusedMatMulReLU:
      return 2;
    case OpKind::kReLU:
    case OpKind::kMaxPool2D:
    case OpKind::kGlobalAvgPool:
    case OpKind::kSoftmax:
    case OpKind::kArgMaxTop1:
      return 1;
  }
  return -1;
}

bool is_compute(OpKind kind) { return kind != OpKind::kInput && kind != OpKind::kConst; }

std::int64_t window_output_dim(std::int64_t in, std::int64_t window, std::int64_t stride,
                               std::int64_t pad) {
  if (stride < 1) throw Error(ErrorCode::kInvalidShape, "stride must be >= 1");
  if (pad < 0) throw Error(ErrorCode::kInvalidShape, "pad must be >= 0");
  if (window < 1) throw Error(ErrorCode::kInvalidShape, "window must be >= 1");
  std::int64_t span = in + 2 * pad - window;
  if (span < 0) {
    throw Error(ErrorCode::kInvalidShape, "window " + std::to_string(window) +
                                              " larger than padded input " +
                                              std::to_string(in + 2 * pad));
  }
  return span / stride + 1;
}

namespace {

void require_f32(const TensorSpec& s, const char* what) {
  if (s.dtype != DType::kF32) {
    throw Error(ErrorCode::kInvalidShape, std::string(what) + " expects f32, got " + s.to_string());
  }
}

void require_rank(const TensorSpec& s, std::size_t rank, const char* what) {
  if (s.shape.size() != rank) {
    throw Error(ErrorCode::kInvalidShape, std::string(what) + " expects rank " +
                                              std::to_string(rank) + ", got " + s.to_string());
  }
}

}  // namespace

TensorSpec infer_output_spec(OpKind kind, const OpAttrs& attrs,
                             std::span<const TensorSpec> in) {
  if (static_cast<int>(in.size()) != op_arity(kind)) {
    throw Error(ErrorCode::kInvalidShape, std::string(op_kind_name(kind)) + " takes " +
                                              std::to_string(op_arity(kind)) + " operands");
  }
  switch (kind) {
    case OpKind::kInput:
    case OpKind::kConst:
      throw Error(ErrorCode::kInvalidShape, "leaf kinds have no inferred output");

    case OpKind::kMatMul:
    case OpKind::kFusedMatMulReLU: {
      require_f32(in[0], "matmul");
      require_f32(in[1], "matmul");
      require_rank(in[1], 2, "matmul rhs");
      if (in[0].shape.size() < 2) {
        throw Error(ErrorCode::kInvalidShape, "matmul lhs must have rank >= 2");
      }
      std::int64_t m = in[0].shape[0];
      std::int64_t k = num_elements(in[0].shape) / m;
      if (k != in[1].shape[0]) {
        throw Error(ErrorCode::kInvalidShape, "matmul inner dims differ: " + in[0].to_string() +
                                                  " x " + in[1].to_string());
      }
      return {DType::kF32, {m, in[1].shape[1]}};
    }

    case OpKind::kConv2D:
    case OpKind::kFusedConv2DReLU: {
      require_f32(in[0], "conv2d");
      require_f32(in[1], "conv2d");
      require_rank(in[0], 4, "conv2d input");
      require_rank(in[1], 4, "conv2d kernel");
      if (in[0].shape[1] != in[1].shape[1]) {
        throw Error(ErrorCode::kInvalidShape, "conv2d channel mismatch: " + in[0].to_string() +
                                                  " vs kernel " + in[1].to_string());
      }
      std::int64_t oh = window_output_dim(in[0].shape[2], in[1].shape[2], attrs.stride, attrs.pad);
      std::int64_t ow = window_output_dim(in[0].shape[3], in[1].shape[3], attrs.stride, attrs.pad);
      return {DType::kF32, {in[0].shape[0], in[1].shape[0], oh, ow}};
    }

    case OpKind::kReLU:
      require_f32(in[0], "relu");
      return in[0];

    case OpKind::kAdd:
      require_f32(in[0], "add");
      if (in[0] != in[1]) {
        throw Error(ErrorCode::kInvalidShape,
                    "add operands differ: " + in[0].to_string() + " vs " + in[1].to_string());
      }
      return in[0];

    case OpKind::kMaxPool2D: {
      require_f32(in[0], "maxpool2d");
      require_rank(in[0], 4, "maxpool2d input");
      std::int64_t oh = window_output_dim(in[0].shape[2], attrs.kernel, attrs.stride, attrs.pad);
      std::int64_t ow = window_output_dim(in[0].shape[3], attrs.kernel, attrs.stride, attrs.pad);
      return {DType::kF32, {in[0].shape[0], in[0].shape[1], oh, ow}};
    }

    case OpKind::kGlobalAvgPool:
      require_f32(in[0], "globalavgpool");
      require_rank(in[0], 4, "globalavgpool input");
      return {DType::kF32, {in[0].shape[0], in[0].shape[1], 1, 1}};

    case OpKind::kSoftmax: {
      require_f32(in[0], "softmax");
      auto rank = static_cast<std::int32_t>(in[0].shape.size());
      if (attrs.axis < -rank || attrs.axis >= rank) {
        throw Error(ErrorCode::kInvalidShape, "softmax axis " + std::to_string(attrs.axis) +
                                                  " out of range for " + in[0].to_string());
      }
      return in[0];
    }

    case OpKind::kArgMaxTop1: {
      require_f32(in[0], "argmax_top1");
      Shape out(in[0].shape.begin(), in[0].shape.end() - 1);
      if (out.empty()) out.push_back(1);
      return {DType::kI64, out};
    }
  }
  throw Error(ErrorCode::kInvalidShape, "unknown op kind");
}

}  // namespace genop::planc
