/* Copyright 2026 The Prequant Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef PREQUANT_TENSOR_HPP_
#define PREQUANT_TENSOR_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prequant/error.hpp"
#include "prequant/fp16.hpp"

namespace pq {

// The five element types the toolkit deals in.  F16 values are carried as
// raw binary16 bit patterns (std::uint16_t); all arithmetic on them goes
// through the fp16 conversion helpers.
enum class ElemType : std::uint8_t { kI8, kU8, kI32, kF32, kF16 };

inline std::size_t elem_size(ElemType type) {
  switch (type) {
    case ElemType::kI8:
    case ElemType::kU8: return 1;
    case ElemType::kF16: return 2;
    case ElemType::kI32:
    case ElemType::kF32: return 4;
  }
  throw Error(ErrorCode::kValidation, "invalid element type");
}

inline const char* elem_type_name(ElemType type) {
  switch (type) {
    case ElemType::kI8: return "int8";
    case ElemType::kU8: return "uint8";
    case ElemType::kI32: return "int32";
    case ElemType::kF32: return "float32";
    case ElemType::kF16: return "float16";
  }
  return "invalid";
}

inline std::optional<ElemType> elem_type_from_name(std::string_view name) {
  if (name == "int8") return ElemType::kI8;
  if (name == "uint8") return ElemType::kU8;
  if (name == "int32") return ElemType::kI32;
  if (name == "float32") return ElemType::kF32;
  if (name == "float16") return ElemType::kF16;
  return std::nullopt;
}

inline int64_t shape_element_count(std::span<const int64_t> shape) {
  int64_t count = 1;
  for (int64_t extent : shape) {
    if (extent < 0) {
      throw Error(ErrorCode::kValidation, "negative tensor dimension");
    }
    if (extent != 0 && count > (int64_t{1} << 31) / extent) {
      throw Error(ErrorCode::kValidation, "tensor too large");
    }
    count *= extent;
  }
  return count;
}

// Dense row-major tensor.  The payload is a typed vector selected by dtype;
// an empty shape means a scalar (one element).
class QTensor {
 public:
  QTensor() : QTensor(ElemType::kF32, {0}) {}

  QTensor(ElemType dtype, std::vector<int64_t> shape)
      : dtype_(dtype), shape_(std::move(shape)) {
    const auto count = static_cast<std::size_t>(shape_element_count(shape_));
    switch (dtype_) {
      case ElemType::kI8: payload_ = std::vector<std::int8_t>(count); break;
      case ElemType::kU8: payload_ = std::vector<std::uint8_t>(count); break;
      case ElemType::kI32: payload_ = std::vector<std::int32_t>(count); break;
      case ElemType::kF32: payload_ = std::vector<float>(count); break;
      case ElemType::kF16: payload_ = std::vector<std::uint16_t>(count); break;
    }
  }

  static QTensor from_f32(std::vector<int64_t> shape, std::vector<float> data) {
    QTensor t(ElemType::kF32, std::move(shape));
    t.assign(std::move(data));
    return t;
  }
  static QTensor from_i8(std::vector<int64_t> shape,
                         std::vector<std::int8_t> data) {
    QTensor t(ElemType::kI8, std::move(shape));
    t.assign(std::move(data));
    return t;
  }
  static QTensor from_u8(std::vector<int64_t> shape,
                         std::vector<std::uint8_t> data) {
    QTensor t(ElemType::kU8, std::move(shape));
    t.assign(std::move(data));
    return t;
  }
  static QTensor from_i32(std::vector<int64_t> shape,
                          std::vector<std::int32_t> data) {
    QTensor t(ElemType::kI32, std::move(shape));
    t.assign(std::move(data));
    return t;
  }
  static QTensor from_f16_bits(std::vector<int64_t> shape,
                               std::vector<std::uint16_t> data) {
    QTensor t(ElemType::kF16, std::move(shape));
    t.assign(std::move(data));
    return t;
  }

  static QTensor scalar_f32(float v) { return from_f32({}, {v}); }
  static QTensor scalar_i8(std::int8_t v) { return from_i8({}, {v}); }
  static QTensor scalar_u8(std::uint8_t v) { return from_u8({}, {v}); }

  ElemType dtype() const { return dtype_; }
  const std::vector<int64_t>& shape() const { return shape_; }
  int64_t element_count() const { return shape_element_count(shape_); }
  int64_t rank() const { return static_cast<int64_t>(shape_.size()); }

  std::span<const std::int8_t> i8() const { return get<std::int8_t>(); }
  std::span<const std::uint8_t> u8() const { return get<std::uint8_t>(); }
  std::span<const std::int32_t> i32() const { return get<std::int32_t>(); }
  std::span<const float> f32() const { return get<float>(); }
  std::span<const std::uint16_t> f16_bits() const {
    return get<std::uint16_t>();
  }

  std::span<std::int8_t> i8() { return get_mut<std::int8_t>(); }
  std::span<std::uint8_t> u8() { return get_mut<std::uint8_t>(); }
  std::span<std::int32_t> i32() { return get_mut<std::int32_t>(); }
  std::span<float> f32() { return get_mut<float>(); }
  std::span<std::uint16_t> f16_bits() { return get_mut<std::uint16_t>(); }

  // Reads any element widened to double (fp16 goes through binary32 first).
  double element_as_double(int64_t index) const {
    const auto i = static_cast<std::size_t>(index);
    switch (dtype_) {
      case ElemType::kI8: return i8()[i];
      case ElemType::kU8: return u8()[i];
      case ElemType::kI32: return i32()[i];
      case ElemType::kF32: return f32()[i];
      case ElemType::kF16: return from_fp16_bits(f16_bits()[i]);
    }
    throw Error(ErrorCode::kValidation, "invalid element type");
  }

  // Payload as little-endian bytes, in row-major element order.
  std::vector<std::uint8_t> raw_bytes() const {
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(element_count()) *
                elem_size(dtype_));
    auto push = [&out](auto value) {
      using T = decltype(value);
      auto u = [&] {
        if constexpr (sizeof(T) == 1) return static_cast<std::uint8_t>(value);
        else if constexpr (sizeof(T) == 2) return std::bit_cast<std::uint16_t>(value);
        else return std::bit_cast<std::uint32_t>(value);
      }();
      for (std::size_t b = 0; b < sizeof(T); ++b) {
        out.push_back(static_cast<std::uint8_t>((u >> (8 * b)) & 0xffu));
      }
    };
    switch (dtype_) {
      case ElemType::kI8: for (auto v : i8()) push(v); break;
      case ElemType::kU8: for (auto v : u8()) push(v); break;
      case ElemType::kI32: for (auto v : i32()) push(v); break;
      case ElemType::kF32: for (auto v : f32()) push(v); break;
      case ElemType::kF16: for (auto v : f16_bits()) push(v); break;
    }
    return out;
  }

  static QTensor from_raw_bytes(ElemType dtype, std::vector<int64_t> shape,
                                std::span<const std::uint8_t> bytes) {
    QTensor t(dtype, std::move(shape));
    const auto count = static_cast<std::size_t>(t.element_count());
    if (bytes.size() != count * elem_size(dtype)) {
      throw Error(ErrorCode::kValidation,
                  "tensor payload size does not match shape");
    }
    auto read = [&bytes](std::size_t offset, std::size_t width) {
      std::uint32_t u = 0;
      for (std::size_t b = 0; b < width; ++b) {
        u |= static_cast<std::uint32_t>(bytes[offset + b]) << (8 * b);
      }
      return u;
    };
    switch (dtype) {
      case ElemType::kI8: {
        auto dst = t.i8();
        for (std::size_t i = 0; i < count; ++i) {
          dst[i] = static_cast<std::int8_t>(bytes[i]);
        }
        break;
      }
      case ElemType::kU8: {
        auto dst = t.u8();
        for (std::size_t i = 0; i < count; ++i) dst[i] = bytes[i];
        break;
      }
      case ElemType::kI32: {
        auto dst = t.i32();
        for (std::size_t i = 0; i < count; ++i) {
          dst[i] = std::bit_cast<std::int32_t>(read(4 * i, 4));
        }
        break;
      }
      case ElemType::kF32: {
        auto dst = t.f32();
        for (std::size_t i = 0; i < count; ++i) {
          dst[i] = std::bit_cast<float>(read(4 * i, 4));
        }
        break;
      }
      case ElemType::kF16: {
        auto dst = t.f16_bits();
        for (std::size_t i = 0; i < count; ++i) {
          dst[i] = static_cast<std::uint16_t>(read(2 * i, 2));
        }
        break;
      }
    }
    return t;
  }

  // Bit-exact comparison: dtype, shape and payload bytes must all match
  // (so e.g. -0.0f and 0.0f compare unequal, and NaNs compare equal to
  // themselves).
  friend bool operator==(const QTensor& a, const QTensor& b) {
    return a.dtype_ == b.dtype_ && a.shape_ == b.shape_ &&
           a.raw_bytes() == b.raw_bytes();
  }

 private:
  template <typename T>
  std::span<const T> get() const {
    if (const auto* v = std::get_if<std::vector<T>>(&payload_)) return *v;
    throw Error(ErrorCode::kValidation, "tensor dtype mismatch");
  }
  template <typename T>
  std::span<T> get_mut() {
    if (auto* v = std::get_if<std::vector<T>>(&payload_)) return *v;
    throw Error(ErrorCode::kValidation, "tensor dtype mismatch");
  }
  template <typename T>
  void assign(std::vector<T> data) {
    if (data.size() != static_cast<std::size_t>(element_count())) {
      throw Error(ErrorCode::kValidation,
                  "tensor data size does not match shape");
    }
    payload_ = std::move(data);
  }

  ElemType dtype_;
  std::vector<int64_t> shape_;
  std::variant<std::vector<std::int8_t>, std::vector<std::uint8_t>,
               std::vector<std::int32_t>, std::vector<float>,
               std::vector<std::uint16_t>>
      payload_;
};

// Row-major strides for a shape.
inline std::vector<int64_t> row_major_strides(std::span<const int64_t> shape) {
  std::vector<int64_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * shape[i];
  }
  return strides;
}

// A positive, finite quantization scale.  Zero points are always zero in
// this toolkit, so the scale is the entire quantization parameter set.
class Scale {
 public:
  explicit Scale(float value) : value_(value) {
    if (!(value > 0.0f) || !std::isfinite(value)) {
      throw Error(ErrorCode::kRange, "scale must be positive and finite");
    }
  }

  float value() const { return value_; }

  friend bool operator==(const Scale& a, const Scale& b) {
    return a.value_ == b.value_;
  }

 private:
  float value_;
};

}  // namespace pq

#endif  // PREQUANT_TENSOR_HPP_
