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
#ifndef PREQUANT_FLOAT_MODEL_HPP_
#define PREQUANT_FLOAT_MODEL_HPP_

// The fp32 source model: a chain of fully-connected / conv2d layers with an
// activation per layer.  This is what gets calibrated and quantized, and it
// doubles as the accuracy reference the quantized graph is compared against.

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "prequant/error.hpp"
#include "prequant/interp.hpp"
#include "prequant/patterns.hpp"
#include "prequant/tensor.hpp"

namespace pq {

// Fixed activation output scales: tanh/sigmoid have a bounded range, so the
// output grid does not depend on calibration data.  tanh covers [-1, 1] on
// int8, sigmoid covers [0, 1] on uint8.
inline constexpr float kTanhOutputScale = 1.0f / 127.0f;
inline constexpr float kSigmoidOutputScale = 1.0f / 255.0f;
inline constexpr float kDefaultTanhInputBound = 4.0f;

struct FloatLayer {
  std::string name;
  LayerKind kind = LayerKind::kFullyConnected;
  QTensor weights;  // float32: FC [out, in]; conv [M, C, kH, kW]
  QTensor bias;     // float32 [out]
  ActivationKind activation = ActivationKind::kNone;
  std::vector<int64_t> strides{1, 1};     // conv only
  std::vector<int64_t> pads{0, 0, 0, 0};  // conv only
  float tanh_input_bound = kDefaultTanhInputBound;  // tanh_i8 only
  std::optional<float> y_scale;  // override for the fixed activation scale

  float effective_y_scale() const {
    if (y_scale) return *y_scale;
    return activation == ActivationKind::kSigmoidF16 ? kSigmoidOutputScale
                                                     : kTanhOutputScale;
  }
};

struct FloatModelSpec {
  std::string name = "model";
  std::string input_name = "input";
  std::vector<int64_t> input_shape;
  std::vector<FloatLayer> layers;
};

// Output shape of a float layer, mirroring the chaining rules of the
// quantized patterns.
inline std::vector<int64_t> float_layer_output_shape(
    const FloatLayer& layer, std::span<const int64_t> input_shape) {
  auto fail = [&layer](const std::string& msg) {
    throw Error(ErrorCode::kValidation, "layer '" + layer.name + "': " + msg);
  };
  if (layer.kind == LayerKind::kFullyConnected) {
    if (input_shape.size() != 2) fail("expects a rank-2 input");
    if (input_shape[1] != layer.weights.shape()[1]) {
      fail("input features do not match weights");
    }
    return {input_shape[0], layer.weights.shape()[0]};
  }
  if (input_shape.size() != 4) fail("expects a rank-4 input");
  const auto& w = layer.weights.shape();
  if (input_shape[1] != w[1]) fail("input channels do not match weights");
  const int64_t ph = input_shape[2] + layer.pads[0] + layer.pads[2];
  const int64_t pw = input_shape[3] + layer.pads[1] + layer.pads[3];
  if (ph < w[2] || pw < w[3]) fail("kernel does not fit the padded input");
  return {input_shape[0], w[0], (ph - w[2]) / layer.strides[0] + 1,
          (pw - w[3]) / layer.strides[1] + 1};
}

inline void check_model(const FloatModelSpec& model) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kValidation, msg);
  };
  if (model.layers.empty()) fail("model has no layers");
  if (model.input_name.empty()) fail("model input needs a name");
  if (model.input_shape.empty()) fail("model input shape is empty");
  for (int64_t extent : model.input_shape) {
    if (extent < 1) fail("model input shape must be fully positive");
  }
  std::set<std::string> names;
  std::vector<int64_t> shape = model.input_shape;
  for (const auto& layer : model.layers) {
    if (layer.name.empty()) fail("every layer needs a name");
    if (!names.insert(layer.name).second) {
      fail("duplicate layer name '" + layer.name + "'");
    }
    if (layer.weights.dtype() != ElemType::kF32 ||
        layer.bias.dtype() != ElemType::kF32) {
      fail("layer '" + layer.name + "': weights and bias must be float32");
    }
    const int64_t expected_rank =
        layer.kind == LayerKind::kFullyConnected ? 2 : 4;
    if (layer.weights.rank() != expected_rank) {
      fail("layer '" + layer.name + "': weights have the wrong rank");
    }
    if (layer.kind == LayerKind::kConv2d) {
      if (layer.strides.size() != 2 || layer.strides[0] < 1 ||
          layer.strides[1] < 1) {
        fail("layer '" + layer.name + "': strides must be two positive ints");
      }
      if (layer.pads.size() != 4 ||
          std::any_of(layer.pads.begin(), layer.pads.end(),
                      [](int64_t p) { return p < 0; })) {
        fail("layer '" + layer.name +
             "': pads must be four non-negative ints");
      }
    }
    if (layer.bias.rank() != 1 ||
        layer.bias.shape()[0] != layer.weights.shape()[0]) {
      fail("layer '" + layer.name +
           "': bias must be rank 1 with one element per output channel");
    }
    if (layer.activation == ActivationKind::kTanhI8 &&
        (!(layer.tanh_input_bound > 0.0f) ||
         !std::isfinite(layer.tanh_input_bound))) {
      fail("layer '" + layer.name + "': tanh input bound must be positive");
    }
    if (layer.y_scale && (!(*layer.y_scale > 0.0f) ||
                          !std::isfinite(*layer.y_scale))) {
      fail("layer '" + layer.name + "': y_scale must be positive");
    }
    shape = float_layer_output_shape(layer, shape);
  }
}

struct ReferenceResult {
  // Post-activation fp32 output of every layer, in layer order.
  std::vector<QTensor> layer_outputs;

  const QTensor& final_output() const { return layer_outputs.back(); }
};

namespace float_detail {

inline QTensor fc_forward(const FloatLayer& layer, const QTensor& x) {
  const int64_t m = x.shape()[0], k = x.shape()[1];
  const int64_t n = layer.weights.shape()[0];
  QTensor y(ElemType::kF32, {m, n});
  const auto xs = x.f32();
  const auto ws = layer.weights.f32();
  const auto bs = layer.bias.f32();
  auto dst = y.f32();
  for (int64_t r = 0; r < m; ++r) {
    for (int64_t c = 0; c < n; ++c) {
      float acc = 0.0f;  // fp32 accumulation, k ascending
      for (int64_t j = 0; j < k; ++j) {
        acc += xs[static_cast<std::size_t>(r * k + j)] *
               ws[static_cast<std::size_t>(c * k + j)];
      }
      dst[static_cast<std::size_t>(r * n + c)] =
          acc + bs[static_cast<std::size_t>(c)];
    }
  }
  return y;
}

inline QTensor conv_forward(const FloatLayer& layer, const QTensor& x) {
  const auto& sx = x.shape();
  const auto& sw = layer.weights.shape();
  const int64_t batch = sx[0], channels = sx[1], height = sx[2], width = sx[3];
  const int64_t m = sw[0], kh = sw[2], kw = sw[3];
  const auto& pads = layer.pads;
  const auto& strides = layer.strides;
  const int64_t oh = (height + pads[0] + pads[2] - kh) / strides[0] + 1;
  const int64_t ow = (width + pads[1] + pads[3] - kw) / strides[1] + 1;
  QTensor y(ElemType::kF32, {batch, m, oh, ow});
  const auto xs = x.f32();
  const auto ws = layer.weights.f32();
  const auto bs = layer.bias.f32();
  auto dst = y.f32();
  std::size_t out_idx = 0;
  for (int64_t nb = 0; nb < batch; ++nb) {
    for (int64_t oc = 0; oc < m; ++oc) {
      for (int64_t r = 0; r < oh; ++r) {
        for (int64_t c = 0; c < ow; ++c) {
          float acc = 0.0f;
          for (int64_t ic = 0; ic < channels; ++ic) {
            for (int64_t dy = 0; dy < kh; ++dy) {
              const int64_t iy = r * strides[0] - pads[0] + dy;
              if (iy < 0 || iy >= height) continue;
              for (int64_t dx = 0; dx < kw; ++dx) {
                const int64_t ix = c * strides[1] - pads[1] + dx;
                if (ix < 0 || ix >= width) continue;
                acc += xs[static_cast<std::size_t>(
                           ((nb * channels + ic) * height + iy) * width +
                           ix)] *
                       ws[static_cast<std::size_t>(
                           ((oc * channels + ic) * kh + dy) * kw + dx)];
              }
            }
          }
          dst[out_idx++] = acc + bs[static_cast<std::size_t>(oc)];
        }
      }
    }
  }
  return y;
}

inline void apply_activation(const FloatLayer& layer, QTensor& t) {
  auto vs = t.f32();
  switch (layer.activation) {
    case ActivationKind::kNone:
      break;
    case ActivationKind::kRelu:
      for (auto& v : vs) v = v > 0.0f ? v : 0.0f;
      break;
    case ActivationKind::kTanhI8:
    case ActivationKind::kTanhF16:
      for (auto& v : vs) v = f32_tanh(v);
      break;
    case ActivationKind::kSigmoidF16:
      for (auto& v : vs) v = f32_sigmoid(v);
      break;
  }
}

}  // namespace float_detail

// Runs the fp32 reference network on one input batch.
inline ReferenceResult run_reference(const FloatModelSpec& model,
                                     const QTensor& input) {
  check_model(model);
  if (input.dtype() != ElemType::kF32) {
    throw Error(ErrorCode::kBinding, "reference input must be float32");
  }
  if (input.shape() != model.input_shape) {
    throw Error(ErrorCode::kBinding, "reference input has the wrong shape");
  }
  ReferenceResult result;
  const QTensor* cursor = &input;
  for (const auto& layer : model.layers) {
    QTensor y = layer.kind == LayerKind::kFullyConnected
                    ? float_detail::fc_forward(layer, *cursor)
                    : float_detail::conv_forward(layer, *cursor);
    float_detail::apply_activation(layer, y);
    result.layer_outputs.push_back(std::move(y));
    cursor = &result.layer_outputs.back();
  }
  return result;
}

}  // namespace pq

#endif  // PREQUANT_FLOAT_MODEL_HPP_
