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
#ifndef PREQUANT_QMATH_HPP_
#define PREQUANT_QMATH_HPP_

// Scalar quantization arithmetic: symmetric scales, round-to-nearest-even,
// bias quantization, and the decomposition of a real rescale multiplier into
// the integer (quant_scale, shift_bits) pair a fixed-point datapath consumes.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "prequant/error.hpp"
#include "prequant/tensor.hpp"

namespace pq {

// Largest integer multiplier a 24-bit rescale unit can hold.  2^24 itself is
// allowed; anything above is not exactly representable in fp32 either.
inline constexpr std::uint32_t kMaxQuantScale = 1u << 24;

// Shift bound keeps 2^-shift a normal fp32 value and keeps 64-bit shifts
// well-defined.
inline constexpr std::uint32_t kMaxShiftBits = 62;

// Round to nearest integer, ties to even.  Exact for every double whose
// fractional part is representable, which covers all inputs produced here.
inline double round_half_even(double x) {
  const double f = std::floor(x);
  const double diff = x - f;
  if (diff > 0.5) return f + 1.0;
  if (diff < 0.5) return f;
  return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

namespace detail {

inline double clamp_limit(ElemType dtype, bool upper) {
  switch (dtype) {
    case ElemType::kI8: return upper ? 127.0 : -128.0;
    case ElemType::kU8: return upper ? 255.0 : 0.0;
    case ElemType::kI32:
      return upper ? 2147483647.0 : -2147483648.0;
    default:
      throw Error(ErrorCode::kValidation, "not an integer element type");
  }
}

}  // namespace detail

// scale = abs_max / q_max for the symmetric signed (q_max = 127) or
// asymmetric-free unsigned (q_max = 255) grid.  The zero point is always 0.
inline Scale compute_symmetric_scale(float abs_max, ElemType target) {
  if (!std::isfinite(abs_max)) {
    throw Error(ErrorCode::kRange, "abs_max must be finite");
  }
  if (!(abs_max > 0.0f)) {
    throw Error(ErrorCode::kRange,
                "abs_max must be positive (constant-zero data cannot be "
                "calibrated)");
  }
  float q_max;
  switch (target) {
    case ElemType::kI8: q_max = 127.0f; break;
    case ElemType::kU8: q_max = 255.0f; break;
    default:
      throw Error(ErrorCode::kRange, "quantization target must be int8/uint8");
  }
  return Scale(abs_max / q_max);
}

// Rounds x/scale to the integer grid of `target` with saturation.  Returns
// the clipped integer; *saturated reports whether clipping happened.
inline std::int32_t round_clip(float x, const Scale& scale, ElemType target,
                               bool* saturated = nullptr) {
  if (std::isnan(x)) {
    throw Error(ErrorCode::kDomain, "cannot quantize NaN");
  }
  const float ratio = x / scale.value();
  const double rounded = round_half_even(static_cast<double>(ratio));
  const double lo = detail::clamp_limit(target, false);
  const double hi = detail::clamp_limit(target, true);
  if (saturated != nullptr) *saturated = rounded < lo || rounded > hi;
  const double clipped = rounded < lo ? lo : (rounded > hi ? hi : rounded);
  return static_cast<std::int32_t>(clipped);
}

// Elementwise x_q = clip(round(x / scale)).  Saturation is silent here; the
// interpreter counts it where it matters for diagnostics.
inline QTensor quantize_tensor(const QTensor& x, const Scale& scale,
                               ElemType target) {
  if (x.dtype() != ElemType::kF32) {
    throw Error(ErrorCode::kValidation, "quantize_tensor expects float32");
  }
  QTensor out(target, x.shape());
  const auto src = x.f32();
  if (target == ElemType::kI8) {
    auto dst = out.i8();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = static_cast<std::int8_t>(round_clip(src[i], scale, target));
    }
  } else if (target == ElemType::kU8) {
    auto dst = out.u8();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = static_cast<std::uint8_t>(round_clip(src[i], scale, target));
    }
  } else {
    throw Error(ErrorCode::kRange, "quantization target must be int8/uint8");
  }
  return out;
}

// Elementwise fp32 product scale * x_q.
inline QTensor dequantize_tensor(const QTensor& x, const Scale& scale) {
  QTensor out(ElemType::kF32, x.shape());
  auto dst = out.f32();
  const auto n = static_cast<std::size_t>(x.element_count());
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = scale.value() * static_cast<float>(x.element_as_double(i));
  }
  return out;
}

struct BiasQuantResult {
  QTensor bias_q;             // int32
  int64_t saturated_count = 0;  // elements clipped to the int32 range
};

// bias_q = round(bias / (scale_w * scale_x)) on the int32 grid.  The scale
// product and division run in double so the only rounding is the final one.
inline BiasQuantResult quantize_bias(const QTensor& bias, const Scale& scale_w,
                                     const Scale& scale_x) {
  if (bias.dtype() != ElemType::kF32) {
    throw Error(ErrorCode::kValidation, "quantize_bias expects float32");
  }
  BiasQuantResult result;
  result.bias_q = QTensor(ElemType::kI32, bias.shape());
  const double denom = static_cast<double>(scale_w.value()) *
                       static_cast<double>(scale_x.value());
  const auto src = bias.f32();
  auto dst = result.bias_q.i32();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (std::isnan(src[i])) {
      throw Error(ErrorCode::kDomain, "cannot quantize NaN bias");
    }
    const double rounded = round_half_even(src[i] / denom);
    const double lo = detail::clamp_limit(ElemType::kI32, false);
    const double hi = detail::clamp_limit(ElemType::kI32, true);
    if (rounded < lo || rounded > hi) ++result.saturated_count;
    const double clipped = rounded < lo ? lo : (rounded > hi ? hi : rounded);
    dst[i] = static_cast<std::int32_t>(clipped);
  }
  return result;
}

// The real rescale multiplier (scale_w * scale_x) / scale_y, kept in double
// so that its integer decomposition is not polluted by an fp32 rounding.
inline double rescale_multiplier_real(const Scale& scale_w,
                                      const Scale& scale_x,
                                      const Scale& scale_y) {
  return static_cast<double>(scale_w.value()) *
         static_cast<double>(scale_x.value()) /
         static_cast<double>(scale_y.value());
}

inline float rescale_multiplier(const Scale& scale_w, const Scale& scale_x,
                                const Scale& scale_y) {
  return static_cast<float>(rescale_multiplier_real(scale_w, scale_x, scale_y));
}

// A rescale stage in both of its forms: the fp32 multiplier that a float
// datapath would use, and the (quant_scale, shift_bits) pair such that
// quant_scale * 2^-shift_bits approximates the multiplier from below with
// quant_scale <= 2^24.
struct RescaleSpec {
  float multiplier = 1.0f;
  std::uint32_t quant_scale = 1;
  std::uint32_t shift_bits = 0;

  friend bool operator==(const RescaleSpec&, const RescaleSpec&) = default;
};

// Splits a real multiplier m into quant_scale * 2^-shift_bits: shift_bits is
// the largest N >= 0 with floor(m * 2^N) <= 2^24, quant_scale the floor at
// that N.  All intermediate products are exact in double (m < 2^25,
// N <= 62).
inline RescaleSpec decompose_rescale(double multiplier) {
  if (!std::isfinite(multiplier) || !(multiplier > 0.0)) {
    throw Error(ErrorCode::kRange, "rescale multiplier must be positive");
  }
  if (std::floor(multiplier) > static_cast<double>(kMaxQuantScale)) {
    throw Error(ErrorCode::kRange,
                "rescale multiplier too large: " + std::to_string(multiplier));
  }
  std::uint32_t shift = 0;
  while (shift < kMaxShiftBits &&
         std::floor(std::ldexp(multiplier, static_cast<int>(shift) + 1)) <=
             static_cast<double>(kMaxQuantScale)) {
    ++shift;
  }
  const double q = std::floor(std::ldexp(multiplier, static_cast<int>(shift)));
  if (q < 1.0) {
    throw Error(ErrorCode::kRange,
                "rescale multiplier too small: " + std::to_string(multiplier));
  }
  RescaleSpec spec;
  spec.multiplier = static_cast<float>(multiplier);
  spec.quant_scale = static_cast<std::uint32_t>(q);
  spec.shift_bits = shift;
  return spec;
}

// Strips common powers of two: (q * 2, N + 1) and (q, N) encode the same
// multiplier, so divide quant_scale down while it stays integral.
inline RescaleSpec normalize_rescale(RescaleSpec spec) {
  while (spec.quant_scale != 0 && (spec.quant_scale & 1u) == 0 &&
         spec.shift_bits > 0) {
    spec.quant_scale >>= 1;
    --spec.shift_bits;
  }
  return spec;
}

// Integer datapath: (acc * quant_scale) >> shift_bits with an arithmetic
// (floor) shift, all in 64 bits.
inline std::int64_t apply_rescale_int(std::int32_t acc,
                                      const RescaleSpec& spec) {
  const std::int64_t product =
      static_cast<std::int64_t>(acc) *
      static_cast<std::int64_t>(spec.quant_scale);
  const std::uint32_t n = spec.shift_bits > 63 ? 63 : spec.shift_bits;
  return product >> n;
}

// Float datapath: fl(fl(acc) * quant_scale) * 2^-shift_bits, each step in
// fp32.  The final product is exact because it only changes the exponent.
inline float apply_rescale_float(std::int32_t acc, const RescaleSpec& spec) {
  const float a = static_cast<float>(acc);
  const float p = a * static_cast<float>(spec.quant_scale);
  return p * std::ldexp(1.0f, -static_cast<int>(spec.shift_bits));
}

}  // namespace pq

#endif  // PREQUANT_QMATH_HPP_
