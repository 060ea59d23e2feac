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
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "prequant/fp16.hpp"

namespace {

// Mathematical value of a finite half pattern, by direct field decoding.
// Independent of the conversion code under test.
double half_value(std::uint16_t h) {
  const int sign = (h & 0x8000u) ? -1 : 1;
  const int exp = (h >> 10) & 0x1f;
  const int mantissa = h & 0x3ff;
  REQUIRE(exp != 0x1f);
  if (exp == 0) return sign * std::ldexp(static_cast<double>(mantissa), -24);
  return sign * std::ldexp(static_cast<double>(1024 + mantissa), exp - 25);
}

bool is_finite_half(std::uint16_t h) { return ((h >> 10) & 0x1f) != 0x1f; }

}  // namespace

TEST_CASE("widening every finite half is exact", "[fp16]") {
  for (std::uint32_t h = 0; h <= 0xffffu; ++h) {
    const auto bits = static_cast<std::uint16_t>(h);
    if (!is_finite_half(bits)) continue;
    const float widened = pq::from_fp16_bits(bits);
    REQUIRE(static_cast<double>(widened) == half_value(bits));
    // Signed zero must keep its sign bit.
    if ((bits & 0x7fffu) == 0) {
      REQUIRE(std::signbit(widened) == ((bits & 0x8000u) != 0));
    }
  }
}

TEST_CASE("narrow(widen(h)) is the identity on finite halves", "[fp16]") {
  for (std::uint32_t h = 0; h <= 0xffffu; ++h) {
    const auto bits = static_cast<std::uint16_t>(h);
    if (!is_finite_half(bits)) continue;
    REQUIRE(pq::to_fp16_bits(pq::from_fp16_bits(bits)) == bits);
  }
}

TEST_CASE("midpoints between adjacent halves round to even", "[fp16]") {
  // Walk all adjacent positive finite pairs.  Their midpoint needs one
  // extra significand bit, which fp32 always has room for, so float(mid)
  // is the exact midpoint and must round to whichever neighbour has an
  // even bit pattern.
  for (std::uint32_t h = 0; h < 0x7bffu; ++h) {
    const auto lo_bits = static_cast<std::uint16_t>(h);
    const auto hi_bits = static_cast<std::uint16_t>(h + 1);
    const double lo = half_value(lo_bits);
    const double hi = half_value(hi_bits);
    const auto mid = static_cast<float>((lo + hi) / 2.0);
    REQUIRE(static_cast<double>(mid) == (lo + hi) / 2.0);

    const std::uint16_t even = (h % 2 == 0) ? lo_bits : hi_bits;
    REQUIRE(pq::to_fp16_bits(mid) == even);
    // One fp32 ulp to either side breaks the tie toward that side.
    REQUIRE(pq::to_fp16_bits(std::nextafter(mid, 0.0f)) == lo_bits);
    REQUIRE(pq::to_fp16_bits(std::nextafter(mid, 1e9f)) == hi_bits);
  }
}

TEST_CASE("random values narrow to the nearest half", "[fp16]") {
  std::mt19937_64 rng(0xf16f16u);
  std::uniform_real_distribution<double> log_mag(-25.0, 16.0);
  std::uniform_real_distribution<double> frac(1.0, 2.0);
  std::bernoulli_distribution coin;

  for (int i = 0; i < 20000; ++i) {
    const double mag = frac(rng) * std::exp2(log_mag(rng));
    const auto x = static_cast<float>(coin(rng) ? -mag : mag);
    const std::uint16_t h = pq::to_fp16_bits(x);
    if (!is_finite_half(h)) {
      REQUIRE(std::fabs(x) >= 65520.0f);
      continue;
    }
    const double err = std::fabs(static_cast<double>(x) - half_value(h));
    // No representable value may be closer than the chosen one.
    if (h != 0 && (h & 0x7fffu) != 0) {
      const auto down = static_cast<std::uint16_t>(h - 1);
      if (is_finite_half(down) && (down & 0x8000u) == (h & 0x8000u)) {
        REQUIRE(err <= std::fabs(static_cast<double>(x) - half_value(down)));
      }
    }
    const auto up = static_cast<std::uint16_t>(h + 1);
    if (is_finite_half(up) && (up & 0x8000u) == (h & 0x8000u)) {
      REQUIRE(err <= std::fabs(static_cast<double>(x) - half_value(up)));
    }
  }
}

TEST_CASE("narrowing edge cases", "[fp16]") {
  const float inf = std::numeric_limits<float>::infinity();

  SECTION("infinities and NaN") {
    REQUIRE(pq::to_fp16_bits(inf) == 0x7c00u);
    REQUIRE(pq::to_fp16_bits(-inf) == 0xfc00u);
    const std::uint16_t nan_bits =
        pq::to_fp16_bits(std::numeric_limits<float>::quiet_NaN());
    REQUIRE((nan_bits & 0x7c00u) == 0x7c00u);
    REQUIRE((nan_bits & 0x03ffu) != 0);
  }

  SECTION("overflow threshold") {
    REQUIRE(pq::to_fp16_bits(65504.0f) == 0x7bffu);         // largest finite
    REQUIRE(pq::to_fp16_bits(65519.996f) == 0x7bffu);       // below midpoint
    REQUIRE(pq::to_fp16_bits(65520.0f) == 0x7c00u);         // midpoint -> inf
    REQUIRE(pq::to_fp16_bits(-65520.0f) == 0xfc00u);
    REQUIRE(pq::to_fp16_bits(1e9f) == 0x7c00u);
  }

  SECTION("underflow threshold") {
    const float tiny = std::ldexp(1.0f, -25);
    REQUIRE(pq::to_fp16_bits(tiny) == 0x0000u);             // tie to even zero
    REQUIRE(pq::to_fp16_bits(-tiny) == 0x8000u);
    REQUIRE(pq::to_fp16_bits(std::nextafter(tiny, 1.0f)) == 0x0001u);
    REQUIRE(pq::to_fp16_bits(std::ldexp(1.0f, -24)) == 0x0001u);
    REQUIRE(pq::to_fp16_bits(0.0f) == 0x0000u);
    REQUIRE(pq::to_fp16_bits(-0.0f) == 0x8000u);
  }

  SECTION("values exactly on the half grid pass through") {
    REQUIRE(pq::fp16_round(1.0f) == 1.0f);
    REQUIRE(pq::fp16_round(-2.5f) == -2.5f);
    REQUIRE(pq::fp16_round(0.0009765625f) == 0.0009765625f);  // 2^-10
  }

  SECTION("widening specials") {
    REQUIRE(pq::from_fp16_bits(0x7c00u) == inf);
    REQUIRE(pq::from_fp16_bits(0xfc00u) == -inf);
    REQUIRE(std::isnan(pq::from_fp16_bits(0x7e00u)));
    REQUIRE(pq::from_fp16_bits(0x0001u) == std::ldexp(1.0f, -24));
    REQUIRE(pq::from_fp16_bits(0x0400u) == std::ldexp(1.0f, -14));
  }
}

TEST_CASE("rounding in the half grid matches double rounding", "[fp16]") {
  // 0.1f is not on the half grid; its two neighbours are 0.0999755859375
  // (0x2e66) and 0.10009765625 (0x2e67).  0.1f sits closer to the lower one.
  REQUIRE(pq::to_fp16_bits(0.1f) == 0x2e66u);
  REQUIRE(pq::fp16_round(0.1f) == 0.0999755859375f);
  // 1/3 rounds to 0.333251953125 = 0x3555.
  REQUIRE(pq::to_fp16_bits(1.0f / 3.0f) == 0x3555u);
}
