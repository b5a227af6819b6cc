// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "genop/core/error.hpp"

namespace genop {

static_assert(std::endian::native == std::endian::little,
              "tensor payloads are stored as raw little-endian element bytes");

// Wire codes: F32=1, I64=2, U8=3. Zero is never a valid dtype code.
enum class DType : std::uint8_t { kF32 = 1, kI64 = 2, kU8 = 3 };

constexpr std::size_t dtype_size(DType t) {
  switch (t) {
    case DType::kF32: return 4;
    case DType::kI64: return 8;
    case DType::kU8: return 1;
  }
  return 0;
}

bool dtype_from_code(std::uint8_t code, DType* out);
std::string_view dtype_name(DType t);  // "f32", "i64", "u8"
bool dtype_from_name(std::string_view name, DType* out);

template <typename T>
constexpr DType dtype_of();
template <>
constexpr DType dtype_of<float>() { return DType::kF32; }
template <>
constexpr DType dtype_of<std::int64_t>() { return DType::kI64; }
template <>
constexpr DType dtype_of<std::uint8_t>() { return DType::kU8; }

using Shape = std::vector<std::int64_t>;

inline constexpr std::size_t kMaxRank = 5;

// product(shape) * size(dtype). Throws INVALID_SHAPE on an empty shape, a
// dimension < 1, rank > kMaxRank, or a product above 2^63-1.
std::int64_t tensor_num_bytes(DType dtype, std::span<const std::int64_t> shape);
std::int64_t num_elements(std::span<const std::int64_t> shape);

std::string shape_to_string(std::span<const std::int64_t> shape);

struct TensorSpec {
  DType dtype = DType::kF32;
  Shape shape;

  friend bool operator==(const TensorSpec&, const TensorSpec&) = default;
  std::string to_string() const;  // e.g. "f32[1,3,32,32]"
};

// Immutable dense row-major tensor. Copies share the payload.
class Tensor {
 public:
  Tensor() = default;

  // Validates data.size() == tensor_num_bytes(dtype, shape).
  static Tensor create(DType dtype, Shape shape, std::span<const std::byte> data);
  static Tensor create(DType dtype, Shape shape, std::vector<std::byte>&& data);

  template <typename T>
  static Tensor from_values(Shape shape, std::span<const T> values) {
    return create(dtype_of<T>(), std::move(shape), std::as_bytes(values));
  }
  template <typename T>
  static Tensor from_values(Shape shape, const std::vector<T>& values) {
    return from_values<T>(std::move(shape), std::span<const T>(values));
  }

  DType dtype() const noexcept { return dtype_; }
  const Shape& shape() const noexcept { return shape_; }
  TensorSpec spec() const { return {dtype_, shape_}; }
  std::int64_t num_elements() const noexcept;
  std::size_t num_bytes() const noexcept { return data_ ? data_->size() : 0; }
  bool valid() const noexcept { return data_ != nullptr; }

  std::span<const std::byte> bytes() const noexcept {
    return data_ ? std::span<const std::byte>(*data_) : std::span<const std::byte>();
  }

  // Throws DTYPE_MISMATCH if T does not match dtype().
  template <typename T>
  std::span<const T> values() const {
    if (dtype_of<T>() != dtype_) {
      throw Error(ErrorCode::kDtypeMismatch,
                  "tensor is " + std::string(dtype_name(dtype_)) + ", requested " +
                      std::string(dtype_name(dtype_of<T>())));
    }
    return {reinterpret_cast<const T*>(data_->data()), data_->size() / sizeof(T)};
  }

  template <typename T>
  std::vector<T> to_vector() const {
    auto v = values<T>();
    return {v.begin(), v.end()};
  }

 private:
  Tensor(DType dtype, Shape shape, std::shared_ptr<const std::vector<std::byte>> data)
      : dtype_(dtype), shape_(std::move(shape)), data_(std::move(data)) {}

  DType dtype_ = DType::kF32;
  Shape shape_;
  std::shared_ptr<const std::vector<std::byte>> data_;
};

// dtype, shape, and payload bytes identical. NaNs compare by bit pattern.
bool tensor_equal_bitwise(const Tensor& a, const Tensor& b);
bool tensors_equal_bitwise(std::span<const Tensor> a, std::span<const Tensor> b);

}  // namespace genop
