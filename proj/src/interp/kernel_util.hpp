// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "genop/core/tensor.hpp"
#include "genop/planc/op.hpp"

namespace genop::interp::detail {

inline TensorSpec checked_output(planc::OpKind kind, const planc::OpAttrs& attrs,
                                 std::initializer_list<const Tensor*> operands) {
  std::vector<TensorSpec> specs;
  specs.reserve(operands.size());
  for (const Tensor* t : operands) specs.push_back(t->spec());
  return planc::infer_output_spec(kind, attrs, specs);
}

inline planc::OpAttrs window_attrs(int kernel, int stride, int pad) {
  planc::OpAttrs a;
  a.kernel = kernel;
  a.stride = stride;
  a.pad = pad;
  return a;
}

inline float relu_value(float v) { return v < 0.0f ? 0.0f : v; }

inline int normalize_axis(int axis, std::size_t rank) {
  return axis < 0 ? axis + static_cast<int>(rank) : axis;
}

}  // namespace genop::interp::detail
