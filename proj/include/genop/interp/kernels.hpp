// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "genop/core/tensor.hpp"
#include "genop/planc/op.hpp"

namespace genop::interp {

// Every kernel exists twice: a serial reference and an OpenMP variant that
// splits work only across independent output elements. Each output element
// sees the same sequence of float operations in both, so results are
// bitwise identical regardless of mode or thread count.
enum class KernelMode { kSerial, kParallel };

// Accumulation orders (shared by both variants):
//   matmul:  c[i,j] = 0 + a[i,0]*b[0,j] + a[i,1]*b[1,j] + ...   (t ascending)
//   conv2d:  cross-correlation, taps in (c, ky, kx) ascending order, padded
//            taps skipped
//   maxpool: window max over in-range taps, -inf if none
//   gap:     ascending (h, w) sum, one division by h*w
//   softmax: x - max, exp, ascending sum, per-element division
//   argmax:  last axis, lowest index wins ties
//   relu:    x < 0 ? 0 : x
namespace serial {
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad);
Tensor relu(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor maxpool2d(const Tensor& x, int kernel, int stride, int pad);
Tensor global_avg_pool(const Tensor& x);
Tensor softmax(const Tensor& x, int axis);
Tensor argmax_top1(const Tensor& x);
Tensor fused_conv2d_relu(const Tensor& x, const Tensor& k, int stride, int pad);
Tensor fused_matmul_relu(const Tensor& a, const Tensor& b);
}  // namespace serial

namespace omp {
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad);
Tensor relu(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor maxpool2d(const Tensor& x, int kernel, int stride, int pad);
Tensor global_avg_pool(const Tensor& x);
Tensor softmax(const Tensor& x, int axis);
Tensor argmax_top1(const Tensor& x);
Tensor fused_conv2d_relu(const Tensor& x, const Tensor& k, int stride, int pad);
Tensor fused_matmul_relu(const Tensor& a, const Tensor& b);
}  // namespace omp

// Dispatches one compute op. Shape violations throw INVALID_SHAPE and dtype
// violations INVALID_SHAPE/DTYPE_MISMATCH, exactly as the static shape rules.
Tensor run_kernel(planc::OpKind kind, const planc::OpAttrs& attrs,
                  std::span<const Tensor> operands, KernelMode mode = KernelMode::kParallel);

// Number of OpenMP threads kernels may use (1 when built without OpenMP).
int kernel_threads();

}  // namespace genop::interp
