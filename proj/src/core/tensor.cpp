// SPDX-License-Identifier: Apache-2.0
#include "genop/core/tensor.hpp"

#include <algorithm>
#include <limits>

namespace genop {

bool dtype_from_code(std::uint8_t code, DType* out) {
  switch (code) {
    case 1: *out = DType::kF32; return true;
    case 2: *out = DType::kI64; return true;
    case 3: *out = DType::kU8; return true;
    default: return false;
  }
}

std::string_view dtype_name(DType t) {
  switch (t) {
    case DType::kF32: return "f32";
    case DType::kI64: return "i64";
    case DType::kU8: return "u8";
  }
  return "?";
}

bool dtype_from_name(std::string_view name, DType* out) {
  if (name == "f32") { *out = DType::kF32; return true; }
  if (name == "i64") { *out = DType::kI64; return true; }
  if (name == "u8") { *out = DType::kU8; return true; }
  return false;
}

std::int64_t num_elements(std::span<const std::int64_t> shape) {
  if (shape.empty()) throw Error(ErrorCode::kInvalidShape, "empty shape");
  if (shape.size() > kMaxRank) {
    throw Error(ErrorCode::kInvalidShape,
                "rank " + std::to_string(shape.size()) + " exceeds " + std::to_string(kMaxRank));
  }
  std::int64_t n = 1;
  for (std::int64_t d : shape) {
    if (d < 1) {
      throw Error(ErrorCode::kInvalidShape, "dimension " + std::to_string(d) + " in " +
                                                shape_to_string(shape));
    }
    if (__builtin_mul_overflow(n, d, &n)) {
      throw Error(ErrorCode::kInvalidShape, "element count overflows in " + shape_to_string(shape));
    }
  }
  return n;
}

std::int64_t tensor_num_bytes(DType dtype, std::span<const std::int64_t> shape) {
  std::int64_t n = num_elements(shape);
  std::int64_t bytes = 0;
  if (__builtin_mul_overflow(n, static_cast<std::int64_t>(dtype_size(dtype)), &bytes)) {
    throw Error(ErrorCode::kInvalidShape, "byte count overflows in " + shape_to_string(shape));
  }
  return bytes;
}

std::string shape_to_string(std::span<const std::int64_t> shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::string TensorSpec::to_string() const {
  return std::string(dtype_name(dtype)) + shape_to_string(shape);
}

Tensor Tensor::create(DType dtype, Shape shape, std::span<const std::byte> data) {
  return create(dtype, std::move(shape), std::vector<std::byte>(data.begin(), data.end()));
}

Tensor Tensor::create(DType dtype, Shape shape, std::vector<std::byte>&& data) {
  std::int64_t expected = tensor_num_bytes(dtype, shape);
  if (static_cast<std::int64_t>(data.size()) != expected) {
    throw Error(ErrorCode::kInvalidShape,
                std::string(dtype_name(dtype)) + shape_to_string(shape) + " needs " +
                    std::to_string(expected) + " bytes, got " + std::to_string(data.size()));
  }
  return Tensor(dtype, std::move(shape),
                std::make_shared<const std::vector<std::byte>>(std::move(data)));
}

std::int64_t Tensor::num_elements() const noexcept {
  return data_ ? static_cast<std::int64_t>(data_->size() / dtype_size(dtype_)) : 0;
}

bool tensor_equal_bitwise(const Tensor& a, const Tensor& b) {
  if (a.dtype() != b.dtype() || a.shape() != b.shape()) return false;
  auto x = a.bytes();
  auto y = b.bytes();
  return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin());
}

bool tensors_equal_bitwise(std::span<const Tensor> a, std::span<const Tensor> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!tensor_equal_bitwise(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace genop
