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
#ifndef PREQUANT_FP16_HPP_
#define PREQUANT_FP16_HPP_

// Software conversion between IEEE 754 binary32 and binary16, with
// round-to-nearest-even on the narrowing path.  Everything works on raw bit
// patterns so results do not depend on compiler fp16 support or on the FPU
// rounding mode.

#include <bit>
#include <cstdint>

namespace pq {

// Narrows an fp32 value to fp16 bits.  Values of magnitude >= 65520 (the
// midpoint between the largest finite half 65504 and 2^16) become infinity;
// magnitudes at or below 2^-25 flush to signed zero after rounding; NaN maps
// to a quiet NaN.
inline std::uint16_t to_fp16_bits(float value) {
  const std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 16) & 0x8000u);
  const std::uint32_t abs = bits & 0x7fffffffu;

  if (abs >= 0x7f800000u) {  // inf or NaN
    return abs == 0x7f800000u ? static_cast<std::uint16_t>(sign | 0x7c00u)
                              : static_cast<std::uint16_t>(sign | 0x7e00u);
  }
  if (abs >= 0x477ff000u) {  // >= 65520.0f rounds up out of the half range
    return static_cast<std::uint16_t>(sign | 0x7c00u);
  }
  if (abs <= 0x33000000u) {  // <= 2^-25: nearest-even rounds to zero
    return sign;
  }

  const std::uint32_t exp = abs >> 23;
  std::uint32_t mantissa = abs & 0x007fffffu;
  std::uint32_t shift;
  std::uint32_t half;
  if (exp > 112) {
    // Normal half: rebias the exponent and keep the top 10 mantissa bits.
    half = ((exp - 112u) << 10) | (mantissa >> 13);
    shift = 13;
  } else {
    // Subnormal half: restore the implicit bit, then shift so that one unit
    // in the last place equals 2^-24.
    mantissa |= 0x00800000u;
    shift = 126u - exp;
    half = mantissa >> shift;
  }
  // Round to nearest, ties to even.  A mantissa carry propagates into the
  // exponent field by construction (1023 -> 1024 crosses into the next
  // binade), which is exactly the IEEE behaviour.
  const std::uint32_t remainder = mantissa & ((1u << shift) - 1u);
  const std::uint32_t halfway = 1u << (shift - 1);
  if (remainder > halfway || (remainder == halfway && (half & 1u))) {
    ++half;
  }
  return static_cast<std::uint16_t>(sign | half);
}

// Widens fp16 bits to an fp32 value.  Exact: every finite half is
// representable in binary32.
inline float from_fp16_bits(std::uint16_t half) {
  const std::uint32_t sign = static_cast<std::uint32_t>(half & 0x8000u) << 16;
  const std::uint32_t exp = (half >> 10) & 0x1fu;
  const std::uint32_t mantissa = half & 0x03ffu;

  std::uint32_t bits;
  if (exp == 0x1fu) {  // inf or NaN
    bits = sign | 0x7f800000u | (mantissa << 13);
    if (mantissa != 0) bits |= 0x00400000u;  // keep NaN quiet
  } else if (exp != 0) {
    bits = sign | ((exp + 112u) << 23) | (mantissa << 13);
  } else if (mantissa != 0) {
    // Subnormal half: normalise.  The mantissa has at most 10 significant
    // bits, so the loop runs at most 10 times.
    std::uint32_t e = 113;
    std::uint32_t m = mantissa;
    while ((m & 0x0400u) == 0) {
      m <<= 1;
      --e;
    }
    bits = sign | (e << 23) | ((m & 0x03ffu) << 13);
  } else {
    bits = sign;  // signed zero
  }
  return std::bit_cast<float>(bits);
}

// fp32 -> fp16 -> fp32, i.e. rounds an fp32 value onto the binary16 grid.
inline float fp16_round(float value) {
  return from_fp16_bits(to_fp16_bits(value));
}

}  // namespace pq

#endif  // PREQUANT_FP16_HPP_
