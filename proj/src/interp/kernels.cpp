// SPDX-License-Identifier: Apache-2.0
#include "genop/interp/kernels.hpp"

namespace genop::interp {

using planc::OpKind;

namespace {

template <typename Impl>
Tensor dispatch(OpKind kind, const planc::OpAttrs& a, std::span<const Tensor> in) {
  if (static_cast<int>(in.size()) != planc::op_arity(kind)) {
    throw Error(ErrorCode::kInvalidShape, std::string(planc::op_kind_name(kind)) + " takes " +
                                              std::to_string(planc::op_arity(kind)) +
                                              " operands, got " + std::to_string(in.size()));
  }
  switch (kind) {
    case OpKind::kMatMul: return Impl::matmul(in[0], in[1]);
    case OpKind::kConv2D: return Impl::conv2d(in[0], in[1], a.stride, a.pad);
    case OpKind::kReLU: return Impl::relu(in[0]);
    case OpKind::kAdd: return Impl::add(in[0], in[1]);
    case OpKind::kMaxPool2D: return Impl::maxpool2d(in[0], a.kernel, a.stride, a.pad);
    case OpKind::kGlobalAvgPool: return Impl::global_avg_pool(in[0]);
    case OpKind::kSoftmax: return Impl::softmax(in[0], a.axis);
    case OpKind::kArgMaxTop1: return Impl::argmax_top1(in[0]);
    case OpKind::kFusedConv2DReLU: return Impl::fused_conv2d_relu(in[0], in[1], a.stride, a.pad);
    case OpKind::kFusedMatMulReLU: return Impl::fused_matmul_relu(in[0], in[1]);
    case OpKind::kInput:
    case OpKind::kConst:
      break;
  }
  throw Error(ErrorCode::kBackendFailure,
              "no kernel for " + std::string(planc::op_kind_name(kind)));
}

struct SerialImpl {
  static Tensor matmul(const Tensor& a, const Tensor& b) { return serial::matmul(a, b); }
  static Tensor conv2d(const Tensor& x, const Tensor& k, int s, int p) { return serial::conv2d(x, k, s, p); }
  static Tensor relu(const Tensor& x) { return serial::relu(x); }
  static Tensor add(const Tensor& a, const Tensor& b) { return serial::add(a, b); }
  static Tensor maxpool2d(const Tensor& x, int k, int s, int p) { return serial::maxpool2d(x, k, s, p); }
  static Tensor global_avg_pool(const Tensor& x) { return serial::global_avg_pool(x); }
  static Tensor softmax(const Tensor& x, int axis) { return serial::softmax(x, axis); }
  static Tensor argmax_top1(const Tensor& x) { return serial::argmax_top1(x); }
  static Tensor fused_conv2d_relu(const Tensor& x, const Tensor& k, int s, int p) { return serial::fused_conv2d_relu(x, k, s, p); }
  static Tensor fused_matmul_relu(const Tensor& a, const Tensor& b) { return serial::fused_matmul_relu(a, b); }
};

struct OmpImpl {
  static Tensor matmul(const Tensor& a, const Tensor& b) { return omp::matmul(a, b); }
  static Tensor conv2d(const Tensor& x, const Tensor& k, int s, int p) { return omp::conv2d(x, k, s, p); }
  static Tensor relu(const Tensor& x) { return omp::relu(x); }
  static Tensor add(const Tensor& a, const Tensor& b) { return omp::add(a, b); }
  static Tensor maxpool2d(const Tensor& x, int k, int s, int p) { return omp::maxpool2d(x, k, s, p); }
  static Tensor global_avg_pool(const Tensor& x) { return omp::global_avg_pool(x); }
  static Tensor softmax(const Tensor& x, int axis) { return omp::softmax(x, axis); }
  static Tensor argmax_top1(const Tensor& x) { return omp::argmax_top1(x); }
  static Tensor fused_conv2d_relu(const Tensor& x, const Tensor& k, int s, int p) { return omp::fused_conv2d_relu(x, k, s, p); }
  static Tensor fused_matmul_relu(const Tensor& a, const Tensor& b) { return omp::fused_matmul_relu(a, b); }
};

}  // namespace

Tensor run_kernel(OpKind kind, const planc::OpAttrs& attrs, std::span<const Tensor> operands,
                  KernelMode mode) {
  return mode == KernelMode::kSerial ? dispatch<SerialImpl>(kind, attrs, operands)
                                     : dispatch<OmpImpl>(kind, attrs, operands);
}

}  // namespace genop::interp
