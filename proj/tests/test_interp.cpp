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
#include <map>
#include <random>
#include <vector>

#include "prequant/interp.hpp"
#include "prequant/patterns.hpp"

using pq::ActivationSpec;
using pq::AttrValue;
using pq::ElemType;
using pq::Error;
using pq::ErrorCode;
using pq::GraphIR;
using pq::HwLayerDescriptor;
using pq::LayerKind;
using pq::ModelInput;
using pq::NodeIR;
using pq::QTensor;
using pq::RescaleCodification;
using pq::Scale;

namespace {

QTensor random_i8(std::mt19937_64& rng, std::vector<int64_t> shape) {
  std::uniform_int_distribution<int> d(-127, 127);
  QTensor t(ElemType::kI8, std::move(shape));
  for (auto& v : t.i8()) v = static_cast<std::int8_t>(d(rng));
  return t;
}

HwLayerDescriptor random_fc(std::mt19937_64& rng, int64_t out, int64_t in,
                            ActivationSpec act, RescaleCodification cod) {
  std::uniform_int_distribution<int> bias_dist(-4000, 4000);
  std::uniform_real_distribution<double> log_m(-8.0, 0.0);
  HwLayerDescriptor d;
  d.name = "fc0";
  d.kind = LayerKind::kFullyConnected;
  d.weights = random_i8(rng, {out, in});
  d.bias = QTensor(ElemType::kI32, {out});
  for (auto& b : d.bias.i32()) b = bias_dist(rng);
  d.rescale = pq::decompose_rescale(std::exp2(log_m(rng)));
  d.codification = cod;
  d.activation = act;
  return d;
}

// Independent evaluation of one quantized FC layer: integer accumulate,
// float rescale exactly as codified, optional relu, round and clip.
QTensor fc_oracle(const HwLayerDescriptor& d, const QTensor& x) {
  const int64_t batch = x.shape()[0];
  const int64_t in = x.shape()[1];
  const int64_t out = d.weights.shape()[0];
  QTensor y(ElemType::kI8, {batch, out});
  for (int64_t r = 0; r < batch; ++r) {
    for (int64_t c = 0; c < out; ++c) {
      std::int64_t acc = d.bias.i32()[static_cast<std::size_t>(c)];
      for (int64_t k = 0; k < in; ++k) {
        acc += static_cast<std::int64_t>(
                   x.i8()[static_cast<std::size_t>(r * in + k)]) *
               d.weights.i8()[static_cast<std::size_t>(c * in + k)];
      }
      REQUIRE(acc >= INT32_MIN);
      REQUIRE(acc <= INT32_MAX);
      const float f = static_cast<float>(static_cast<std::int32_t>(acc));
      float scaled;
      if (d.codification == RescaleCodification::kTwoMul) {
        scaled = (f * static_cast<float>(d.rescale.quant_scale)) *
                 std::ldexp(1.0f, -static_cast<int>(d.rescale.shift_bits));
      } else {
        scaled = f * d.rescale.multiplier;
      }
      if (d.activation.kind() == pq::ActivationKind::kRelu && scaled < 0.0f) {
        scaled = 0.0f;
      }
      y.i8()[static_cast<std::size_t>(r * out + c)] = static_cast<std::int8_t>(
          pq::round_clip(scaled, Scale(1.0f), ElemType::kI8));
    }
  }
  return y;
}

}  // namespace

TEST_CASE("fully-connected layers match the brute-force oracle", "[interp]") {
  std::mt19937_64 rng(314159);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int iter = 0; iter < 100; ++iter) {
    const int64_t in = dim(rng);
    const int64_t out = dim(rng);
    const int64_t batch = dim(rng) % 3 + 1;
    const auto act = (iter % 2 == 0) ? ActivationSpec::none()
                                     : ActivationSpec::relu();
    const auto cod = (iter % 4 < 2) ? RescaleCodification::kTwoMul
                                    : RescaleCodification::kOneMul;
    const HwLayerDescriptor d = random_fc(rng, out, in, act, cod);
    const GraphIR g = pq::build_model(
        std::vector<HwLayerDescriptor>{d},
        ModelInput{"input", ElemType::kI8, {batch, in}});
    const QTensor x = random_i8(rng, {batch, in});

    const auto result = pq::run(g, {{"input", x}});
    const QTensor& got = result.outputs.at("fc0/out");
    const QTensor want = fc_oracle(d, x);
    INFO("iter " << iter);
    REQUIRE(got == want);
  }
}

TEST_CASE("worked single-neuron example", "[interp]") {
  // One output neuron: weights [3, 4], bias 5, input [1, 2], multiplier 1/3
  // as the integer pair (11184810, 25).  The accumulator is
  // 1*3 + 2*4 + 5 = 16 and 16 * 11184810 / 2^25 rounds to 5.
  HwLayerDescriptor d;
  d.name = "fc0";
  d.kind = LayerKind::kFullyConnected;
  d.weights = QTensor::from_i8({1, 2}, {3, 4});
  d.bias = QTensor::from_i32({1}, {5});
  d.rescale = pq::decompose_rescale(1.0 / 3.0);
  d.codification = RescaleCodification::kTwoMul;
  const GraphIR g =
      pq::build_model(std::vector<HwLayerDescriptor>{d},
                      ModelInput{"input", ElemType::kI8, {1, 2}});
  const auto result =
      pq::run(g, {{"input", QTensor::from_i8({1, 2}, {1, 2})}});
  REQUIRE(result.outputs.at("fc0/out").i8()[0] == 5);
  REQUIRE(result.stats.quantize_saturation_count == 0);
  REQUIRE(result.stats.inexact_cast_count == 0);
}

TEST_CASE("1x1 convolution equals a matmul on reshaped data", "[interp]") {
  std::mt19937_64 rng(2718);
  const int64_t c = 3, m = 4, h = 5, w = 2;

  const QTensor x = random_i8(rng, {1, c, h, w});
  const QTensor wc = random_i8(rng, {m, c, 1, 1});

  GraphIR conv;
  conv.name = "conv";
  conv.inputs = {{"x", ElemType::kI8, {1, c, h, w}}};
  conv.initializers.emplace("w", wc);
  conv.nodes = {{.op_type = "ConvInteger",
                 .name = "conv",
                 .inputs = {"x", "w"},
                 .outputs = {"acc"},
                 .attributes = {}}};
  conv.outputs = {{"acc", ElemType::kI32, {1, m, h, w}}};

  GraphIR mm;
  mm.name = "mm";
  mm.inputs = {{"x", ElemType::kI8, {h * w, c}}};
  QTensor wm(ElemType::kI8, {c, m});
  for (int64_t ci = 0; ci < c; ++ci) {
    for (int64_t mi = 0; mi < m; ++mi) {
      wm.i8()[static_cast<std::size_t>(ci * m + mi)] =
          wc.i8()[static_cast<std::size_t>(mi * c + ci)];
    }
  }
  mm.initializers.emplace("w", wm);
  mm.nodes = {{.op_type = "MatMulInteger",
               .name = "mm",
               .inputs = {"x", "w"},
               .outputs = {"acc"},
               .attributes = {}}};
  mm.outputs = {{"acc", ElemType::kI32, {h * w, m}}};

  QTensor xm(ElemType::kI8, {h * w, c});
  for (int64_t p = 0; p < h * w; ++p) {
    for (int64_t ci = 0; ci < c; ++ci) {
      xm.i8()[static_cast<std::size_t>(p * c + ci)] =
          x.i8()[static_cast<std::size_t>(ci * h * w + p)];
    }
  }

  const QTensor conv_out = pq::run(conv, {{"x", x}}).outputs.at("acc");
  const QTensor mm_out = pq::run(mm, {{"x", xm}}).outputs.at("acc");
  for (int64_t mi = 0; mi < m; ++mi) {
    for (int64_t p = 0; p < h * w; ++p) {
      REQUIRE(conv_out.i32()[static_cast<std::size_t>(mi * h * w + p)] ==
              mm_out.i32()[static_cast<std::size_t>(p * m + mi)]);
    }
  }
}

TEST_CASE("convolution matches a nested-loop oracle", "[interp]") {
  std::mt19937_64 rng(99991);
  std::uniform_int_distribution<int> chan(1, 4);
  std::uniform_int_distribution<int> spatial(3, 8);
  std::uniform_int_distribution<int> stride_pick(1, 2);
  std::uniform_int_distribution<int> pad_pick(0, 1);

  for (int iter = 0; iter < 20; ++iter) {
    const int64_t c = chan(rng), m = chan(rng);
    const int64_t h = spatial(rng), w = spatial(rng);
    const int64_t sy = stride_pick(rng), sx = stride_pick(rng);
    const int64_t p = pad_pick(rng);
    const QTensor x = random_i8(rng, {1, c, h, w});
    const QTensor wt = random_i8(rng, {m, c, 3, 3});
    if (h + 2 * p < 3 || w + 2 * p < 3) continue;

    GraphIR g;
    g.name = "conv";
    g.inputs = {{"x", ElemType::kI8, {1, c, h, w}}};
    g.initializers.emplace("w", wt);
    g.nodes = {
        {.op_type = "ConvInteger",
         .name = "conv",
         .inputs = {"x", "w"},
         .outputs = {"acc"},
         .attributes = {{"pads", AttrValue(std::vector<int64_t>{p, p, p, p})},
                        {"strides", AttrValue(std::vector<int64_t>{sy, sx})}}}};
    const int64_t oh = (h + 2 * p - 3) / sy + 1;
    const int64_t ow = (w + 2 * p - 3) / sx + 1;
    g.outputs = {{"acc", ElemType::kI32, {1, m, oh, ow}}};

    const QTensor got = pq::run(g, {{"x", x}}).outputs.at("acc");

    for (int64_t oc = 0; oc < m; ++oc) {
      for (int64_t r = 0; r < oh; ++r) {
        for (int64_t cc = 0; cc < ow; ++cc) {
          std::int64_t acc = 0;
          for (int64_t ic = 0; ic < c; ++ic) {
            for (int64_t dy = 0; dy < 3; ++dy) {
              for (int64_t dx = 0; dx < 3; ++dx) {
                const int64_t iy = r * sy - p + dy;
                const int64_t ix = cc * sx - p + dx;
                if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                acc += static_cast<std::int64_t>(x.i8()[static_cast<std::size_t>(
                           (ic * h + iy) * w + ix)]) *
                       wt.i8()[static_cast<std::size_t>(
                           ((oc * c + ic) * 3 + dy) * 3 + dx)];
              }
            }
          }
          INFO("iter " << iter << " at [" << oc << "," << r << "," << cc
                       << "]");
          REQUIRE(got.i32()[static_cast<std::size_t>((oc * oh + r) * ow + cc)] ==
                  acc);
        }
      }
    }
  }
}

TEST_CASE("tanh_i8 activation subsequence reproduces the table", "[interp]") {
  const float x_step = 4.0f / 127.0f;
  const Scale y_scale(1.0f / 127.0f);

  // The activation tail in isolation: snap to the int8 grid, widen, stretch
  // by x_step, tanh, requantize.  Driving it with the 256 grid values it can
  // ever see must reproduce the lookup table exactly.
  GraphIR g;
  g.name = "tail";
  g.inputs = {{"x", ElemType::kF32, {256}}};
  g.initializers.emplace("unit", QTensor::scalar_f32(1.0f));
  g.initializers.emplace("zp", QTensor::scalar_i8(0));
  g.initializers.emplace("step", QTensor::scalar_f32(x_step));
  g.initializers.emplace("y_scale", QTensor::scalar_f32(y_scale.value()));
  g.nodes = {
      {.op_type = "QuantizeLinear",
       .name = "grid",
       .inputs = {"x", "unit", "zp"},
       .outputs = {"q"},
       .attributes = {}},
      {.op_type = "Cast",
       .name = "widen",
       .inputs = {"q"},
       .outputs = {"qf"},
       .attributes = {{"to", AttrValue(pq::onnx_dtype_code(ElemType::kF32))}}},
      {.op_type = "Mul",
       .name = "stretch",
       .inputs = {"qf", "step"},
       .outputs = {"xs"},
       .attributes = {}},
      {.op_type = "Tanh",
       .name = "tanh",
       .inputs = {"xs"},
       .outputs = {"t"},
       .attributes = {}},
      {.op_type = "QuantizeLinear",
       .name = "requant",
       .inputs = {"t", "y_scale", "zp"},
       .outputs = {"y"},
       .attributes = {}},
  };
  g.outputs = {{"y", ElemType::kI8, {256}}};

  QTensor x(ElemType::kF32, {256});
  for (int j = 0; j < 256; ++j) {
    x.f32()[static_cast<std::size_t>(j)] = static_cast<float>(j - 128);
  }
  const QTensor y = pq::run(g, {{"x", x}}).outputs.at("y");

  const auto lut = pq::tanh_i8_lut(x_step, y_scale);
  for (int j = 0; j < 256; ++j) {
    REQUIRE(y.i8()[static_cast<std::size_t>(j)] ==
            lut[static_cast<std::size_t>(j)]);
  }

  // Odd symmetry away from the asymmetric -128 entry.
  for (int i = -127; i <= 127; ++i) {
    REQUIRE(lut[static_cast<std::size_t>(128 + i)] ==
            -lut[static_cast<std::size_t>(128 - i)]);
  }
  // Saturation at the bound: tanh(4) = 0.99933 rounds to 127 with 1/127.
  REQUIRE(lut[255] == 127);
  REQUIRE(lut[128] == 0);
}

TEST_CASE("float16 ops widen, compute in fp32, and round back", "[interp]") {
  GraphIR g;
  g.name = "half";
  g.inputs = {{"x", ElemType::kF32, {4}}};
  g.initializers.emplace(
      "c", QTensor::from_f16_bits({}, {pq::to_fp16_bits(0.3f)}));
  g.nodes = {
      {.op_type = "Cast",
       .name = "narrow",
       .inputs = {"x"},
       .outputs = {"xh"},
       .attributes = {{"to", AttrValue(pq::onnx_dtype_code(ElemType::kF16))}}},
      {.op_type = "Mul",
       .name = "mul",
       .inputs = {"xh", "c"},
       .outputs = {"m"},
       .attributes = {}},
      {.op_type = "Tanh",
       .name = "tanh",
       .inputs = {"m"},
       .outputs = {"y"},
       .attributes = {}},
  };
  g.outputs = {{"y", ElemType::kF16, {4}}};

  const QTensor x = QTensor::from_f32({4}, {0.1f, -1.7f, 2.5f, 100.0f});
  const QTensor y = pq::run(g, {{"x", x}}).outputs.at("y");
  for (std::size_t i = 0; i < 4; ++i) {
    const float xh = pq::fp16_round(x.f32()[i]);
    const float prod = xh * pq::from_fp16_bits(pq::to_fp16_bits(0.3f));
    const float mh = pq::fp16_round(prod);
    const std::uint16_t want = pq::to_fp16_bits(pq::f32_tanh(mh));
    REQUIRE(y.f16_bits()[i] == want);
  }
}

TEST_CASE("cast from int32 counts inexact conversions", "[interp]") {
  GraphIR g;
  g.name = "cast";
  g.inputs = {{"x", ElemType::kI32, {3}}};
  g.nodes = {{.op_type = "Cast",
              .name = "c",
              .inputs = {"x"},
              .outputs = {"y"},
              .attributes = {{"to",
                              AttrValue(pq::onnx_dtype_code(ElemType::kF32))}}}};
  g.outputs = {{"y", ElemType::kF32, {3}}};

  // 2^24 + 1 is the first integer fp32 cannot hold.
  const QTensor x = QTensor::from_i32({3}, {16777217, 16777216, -5});
  const auto result = pq::run(g, {{"x", x}});
  REQUIRE(result.stats.inexact_cast_count == 1);
  REQUIRE(result.outputs.at("y").f32()[1] == 16777216.0f);
  REQUIRE(result.outputs.at("y").f32()[2] == -5.0f);
}

TEST_CASE("quantize saturation is counted", "[interp]") {
  GraphIR g;
  g.name = "sat";
  g.inputs = {{"x", ElemType::kF32, {3}}};
  g.initializers.emplace("s", QTensor::scalar_f32(1.0f));
  g.initializers.emplace("zp", QTensor::scalar_i8(0));
  g.nodes = {{.op_type = "QuantizeLinear",
              .name = "q",
              .inputs = {"x", "s", "zp"},
              .outputs = {"y"},
              .attributes = {}}};
  g.outputs = {{"y", ElemType::kI8, {3}}};

  const auto result =
      pq::run(g, {{"x", QTensor::from_f32({3}, {200.0f, -200.0f, 5.0f})}});
  REQUIRE(result.stats.quantize_saturation_count == 2);
  REQUIRE(result.outputs.at("y").i8()[0] == 127);
  REQUIRE(result.outputs.at("y").i8()[1] == -128);
  REQUIRE(result.outputs.at("y").i8()[2] == 5);
}

TEST_CASE("broadcast add with a channel-shaped bias", "[interp]") {
  GraphIR g;
  g.name = "bc";
  g.inputs = {{"x", ElemType::kI32, {1, 2, 2, 2}}};
  g.initializers.emplace("b", QTensor::from_i32({1, 2, 1, 1}, {10, -10}));
  g.nodes = {{.op_type = "Add",
              .name = "add",
              .inputs = {"x", "b"},
              .outputs = {"y"},
              .attributes = {}}};
  g.outputs = {{"y", ElemType::kI32, {1, 2, 2, 2}}};

  QTensor x(ElemType::kI32, {1, 2, 2, 2});
  for (int i = 0; i < 8; ++i) x.i32()[static_cast<std::size_t>(i)] = i;
  const QTensor y = pq::run(g, {{"x", x}}).outputs.at("y");
  for (int i = 0; i < 4; ++i) {
    REQUIRE(y.i32()[static_cast<std::size_t>(i)] == i + 10);
    REQUIRE(y.i32()[static_cast<std::size_t>(i + 4)] == i + 4 - 10);
  }
}

TEST_CASE("relu acts on every dtype", "[interp]") {
  GraphIR g;
  g.name = "relu";
  g.inputs = {{"x", ElemType::kI8, {4}}};
  g.nodes = {{.op_type = "Relu",
              .name = "r",
              .inputs = {"x"},
              .outputs = {"y"},
              .attributes = {}}};
  g.outputs = {{"y", ElemType::kI8, {4}}};
  const QTensor y =
      pq::run(g, {{"x", QTensor::from_i8({4}, {-3, 0, 7, -128})}})
          .outputs.at("y");
  REQUIRE(y.i8()[0] == 0);
  REQUIRE(y.i8()[1] == 0);
  REQUIRE(y.i8()[2] == 7);
  REQUIRE(y.i8()[3] == 0);
}

TEST_CASE("binding errors", "[interp]") {
  const GraphIR g = pq::build_model(
      std::vector<HwLayerDescriptor>{[] {
        HwLayerDescriptor d;
        d.name = "fc0";
        d.weights = QTensor::from_i8({1, 2}, {1, 1});
        d.bias = QTensor::from_i32({1}, {0});
        d.rescale = pq::decompose_rescale(1.0);
        return d;
      }()},
      ModelInput{"input", ElemType::kI8, {1, 2}});
  auto binding_error = [](const Error& e) {
    return e.code() == ErrorCode::kBinding;
  };

  REQUIRE_THROWS_MATCHES(pq::run(g, {}), Error,
                         Catch::Matchers::Predicate<Error>(binding_error));
  REQUIRE_THROWS_MATCHES(
      pq::run(g, {{"input", QTensor::from_u8({1, 2}, {1, 2})}}), Error,
      Catch::Matchers::Predicate<Error>(binding_error));
  REQUIRE_THROWS_MATCHES(
      pq::run(g, {{"input", QTensor::from_i8({2, 1}, {1, 2})}}), Error,
      Catch::Matchers::Predicate<Error>(binding_error));
  REQUIRE_THROWS_MATCHES(
      pq::run(g, {{"input", QTensor::from_i8({1, 2}, {1, 2})},
                  {"extra", QTensor::scalar_f32(1.0f)}}),
      Error, Catch::Matchers::Predicate<Error>(binding_error));
}

TEST_CASE("int32 accumulator overflow is detected", "[interp]") {
  SECTION("additive overflow in Add") {
    GraphIR g;
    g.name = "of";
    g.inputs = {{"x", ElemType::kI32, {1}}};
    g.initializers.emplace("one", QTensor::from_i32({1}, {1}));
    g.nodes = {{.op_type = "Add",
                .name = "add",
                .inputs = {"x", "one"},
                .outputs = {"y"},
                .attributes = {}}};
    g.outputs = {{"y", ElemType::kI32, {1}}};
    REQUIRE_THROWS_MATCHES(
        pq::run(g, {{"x", QTensor::from_i32({1}, {2147483647})}}), Error,
        Catch::Matchers::Predicate<Error>([](const Error& e) {
          return e.code() == ErrorCode::kOverflow;
        }));
    // One less survives.
    REQUIRE(pq::run(g, {{"x", QTensor::from_i32({1}, {2147483646})}})
                .outputs.at("y")
                .i32()[0] == 2147483647);
  }

  SECTION("accumulation overflow in MatMulInteger") {
    const int64_t k = 140000;  // 140000 * 127 * 127 > 2^31
    GraphIR g;
    g.name = "of";
    g.inputs = {{"x", ElemType::kI8, {1, k}}};
    QTensor w(ElemType::kI8, {k, 1});
    for (auto& v : w.i8()) v = 127;
    g.initializers.emplace("w", std::move(w));
    g.nodes = {{.op_type = "MatMulInteger",
                .name = "mm",
                .inputs = {"x", "w"},
                .outputs = {"y"},
                .attributes = {}}};
    g.outputs = {{"y", ElemType::kI32, {1, 1}}};

    QTensor x(ElemType::kI8, {1, k});
    for (auto& v : x.i8()) v = 127;
    REQUIRE_THROWS_MATCHES(
        pq::run(g, {{"x", x}}), Error,
        Catch::Matchers::Predicate<Error>([](const Error& e) {
          return e.code() == ErrorCode::kOverflow;
        }));
  }
}

TEST_CASE("codifications agree within one output step", "[interp]") {
  // one_mul evaluates fl(acc * m) while two_mul evaluates
  // fl(fl(acc * qs) * 2^-N); the extra rounding can move the result by at
  // most one quantization step.
  std::mt19937_64 rng(60601);
  for (int iter = 0; iter < 50; ++iter) {
    HwLayerDescriptor d = random_fc(rng, 6, 6,
                                    iter % 2 ? ActivationSpec::relu()
                                             : ActivationSpec::none(),
                                    RescaleCodification::kTwoMul);
    HwLayerDescriptor d1 = d;
    d1.codification = RescaleCodification::kOneMul;
    const GraphIR g2 = pq::build_model(
        std::vector<HwLayerDescriptor>{d},
        ModelInput{"input", ElemType::kI8, {2, 6}});
    const GraphIR g1 = pq::build_model(
        std::vector<HwLayerDescriptor>{d1},
        ModelInput{"input", ElemType::kI8, {2, 6}});
    const QTensor x = random_i8(rng, {2, 6});
    const auto a = pq::run(g2, {{"input", x}}).outputs.at("fc0/out");
    const auto b = pq::run(g1, {{"input", x}}).outputs.at("fc0/out");
    for (std::size_t i = 0; i < a.i8().size(); ++i) {
      const int gap = std::abs(static_cast<int>(a.i8()[i]) -
                               static_cast<int>(b.i8()[i]));
      INFO("iter " << iter << " element " << i);
      REQUIRE(gap <= 1);
    }
  }
}

TEST_CASE("execution is deterministic", "[interp]") {
  std::mt19937_64 rng(55);
  const HwLayerDescriptor d = random_fc(
      rng, 6, 7, ActivationSpec::tanh_i8(4.0f, Scale(1.0f / 127.0f)),
      RescaleCodification::kTwoMul);
  const GraphIR g =
      pq::build_model(std::vector<HwLayerDescriptor>{d},
                      ModelInput{"input", ElemType::kI8, {2, 7}});
  const QTensor x = random_i8(rng, {2, 7});
  const QTensor a = pq::run(g, {{"input", x}}).outputs.at("fc0/out");
  const QTensor b = pq::run(g, {{"input", x}}).outputs.at("fc0/out");
  REQUIRE(a == b);
}
