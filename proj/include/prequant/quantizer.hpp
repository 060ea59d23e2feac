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
#ifndef PREQUANT_QUANTIZER_HPP_
#define PREQUANT_QUANTIZER_HPP_

// Post-training quantization: min-max calibration over sample batches,
// symmetric scale derivation for every edge of the layer chain, and the
// lowering of a float model into a pre-quantized ONNX graph plus the
// matching hardware descriptors.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prequant/error.hpp"
#include "prequant/float_model.hpp"
#include "prequant/patterns.hpp"
#include "prequant/qmath.hpp"
#include "prequant/tensor.hpp"

namespace pq {

// Observed |value| maxima, keyed by the model input name and by layer name
// (post-activation) — one entry per quantized edge of the chain.
struct CalibrationProfile {
  std::map<std::string, float> abs_max;

  float at(const std::string& key) const {
    auto it = abs_max.find(key);
    if (it == abs_max.end()) {
      throw Error(ErrorCode::kCalibration,
                  "calibration profile has no abs_max entry for '" + key +
                      "'");
    }
    return it->second;
  }
};

namespace quant_detail {

inline void fold_abs_max(const QTensor& t, const std::string& where,
                         float& acc) {
  for (float v : t.f32()) {
    if (std::isnan(v)) {
      throw Error(ErrorCode::kCalibration,
                  "NaN encountered while calibrating '" + where + "'");
    }
    const float a = std::fabs(v);
    if (a > acc) acc = a;
  }
}

}  // namespace quant_detail

// Min-max calibration: runs the float reference over every sample and
// records the |value| maximum at the input and after every layer.
inline CalibrationProfile calibrate(const FloatModelSpec& model,
                                    std::span<const QTensor> samples) {
  check_model(model);
  if (samples.empty()) {
    throw Error(ErrorCode::kCalibration, "no calibration samples given");
  }
  CalibrationProfile profile;
  float input_max = 0.0f;
  std::vector<float> layer_max(model.layers.size(), 0.0f);
  for (const auto& sample : samples) {
    if (sample.dtype() != ElemType::kF32 ||
        sample.shape() != model.input_shape) {
      throw Error(ErrorCode::kCalibration,
                  "calibration sample does not match the model input");
    }
    quant_detail::fold_abs_max(sample, model.input_name, input_max);
    const ReferenceResult ref = run_reference(model, sample);
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
      quant_detail::fold_abs_max(ref.layer_outputs[i], model.layers[i].name,
                                 layer_max[i]);
    }
  }
  profile.abs_max[model.input_name] = input_max;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    profile.abs_max[model.layers[i].name] = layer_max[i];
  }
  return profile;
}

// The complete scale assignment for one layer.
struct LayerScalePlan {
  Scale scale_w;                 // weight scale
  Scale scale_x;                 // input activation scale
  std::optional<Scale> scale_y;  // calibrated output scale (none/relu only)
  double multiplier_real = 1.0;  // (scale_w * scale_x) / rescale divisor
  RescaleSpec rescale;
  ActivationSpec activation;
  Scale output_scale;            // scale of the layer's quantized output
  ElemType output_dtype = ElemType::kI8;
};

struct ScalePlan {
  Scale input_scale;
  std::vector<LayerScalePlan> layers;

  const Scale& output_scale() const { return layers.back().output_scale; }
  ElemType output_dtype() const { return layers.back().output_dtype; }
};

// Derives every scale in the chain from the calibration profile.
//
// The rescale divisor depends on the activation: plain and relu layers
// rescale straight into the calibrated output grid (divisor scale_y);
// tanh_i8 rescales onto its evaluation grid (divisor x_step); the f16
// variants rescale into real units (divisor 1) because the activation input
// stays a float there.
inline ScalePlan plan_scales(const FloatModelSpec& model,
                             const CalibrationProfile& profile) {
  check_model(model);
  ScalePlan plan{
      .input_scale = compute_symmetric_scale(profile.at(model.input_name),
                                             ElemType::kI8),
      .layers = {}};

  Scale incoming = plan.input_scale;
  for (const auto& layer : model.layers) {
    float w_abs = 0.0f;
    quant_detail::fold_abs_max(layer.weights, layer.name, w_abs);
    if (!(w_abs > 0.0f)) {
      throw Error(ErrorCode::kRange,
                  "layer '" + layer.name +
                      "' has all-zero weights; cannot derive a scale");
    }
    const Scale scale_w = compute_symmetric_scale(w_abs, ElemType::kI8);
    const Scale scale_x = incoming;

    std::optional<Scale> scale_y;
    ActivationSpec activation;
    double divisor;
    Scale output_scale = scale_x;  // placeholder, overwritten below
    switch (layer.activation) {
      case ActivationKind::kNone:
      case ActivationKind::kRelu: {
        scale_y = compute_symmetric_scale(profile.at(layer.name),
                                          ElemType::kI8);
        activation = layer.activation == ActivationKind::kRelu
                         ? ActivationSpec::relu()
                         : ActivationSpec::none();
        divisor = static_cast<double>(scale_y->value());
        output_scale = *scale_y;
        break;
      }
      case ActivationKind::kTanhI8: {
        const Scale y(layer.effective_y_scale());
        activation = ActivationSpec::tanh_i8(layer.tanh_input_bound, y);
        divisor = static_cast<double>(activation.x_step());
        output_scale = y;
        break;
      }
      case ActivationKind::kTanhF16:
      case ActivationKind::kSigmoidF16: {
        const Scale y(layer.effective_y_scale());
        activation = layer.activation == ActivationKind::kTanhF16
                         ? ActivationSpec::tanh_f16(y)
                         : ActivationSpec::sigmoid_f16(y);
        divisor = 1.0;  // rescale straight to real units
        output_scale = y;
        break;
      }
      default:
        throw Error(ErrorCode::kValidation, "invalid activation kind");
    }

    LayerScalePlan lp{.scale_w = scale_w,
                      .scale_x = scale_x,
                      .scale_y = scale_y,
                      .multiplier_real =
                          static_cast<double>(scale_w.value()) *
                          static_cast<double>(scale_x.value()) / divisor,
                      .rescale = {},
                      .activation = activation,
                      .output_scale = output_scale,
                      .output_dtype = activation.output_dtype()};
    lp.rescale = decompose_rescale(lp.multiplier_real);
    incoming = lp.output_scale;
    plan.layers.push_back(std::move(lp));
  }
  return plan;
}

struct LayerReport {
  std::string name;
  float scale_w = 0.0f;
  float scale_x = 0.0f;
  std::optional<float> scale_y;  // calibrated output scale (none/relu)
  std::optional<float> y_scale;  // fixed activation output scale
  float multiplier = 0.0f;
  std::uint32_t quant_scale = 0;
  std::uint32_t shift_bits = 0;
  int64_t bias_saturated = 0;
};

struct QuantReport {
  std::string model;
  std::string codification;
  float input_scale = 0.0f;
  float output_scale = 0.0f;
  std::vector<LayerReport> layers;
};

struct QuantizeResult {
  GraphIR graph;
  std::vector<HwLayerDescriptor> descriptors;
  ScalePlan plan;
  QuantReport report;
};

// Lowers the float model into a pre-quantized graph.  Weights/bias are
// quantized with the planned scales, the rescale stage is codified as
// requested, and the descriptors returned are exactly what `extract` would
// recover from the graph.
inline QuantizeResult quantize_model(const FloatModelSpec& model,
                                     const CalibrationProfile& profile,
                                     RescaleCodification codification) {
  ScalePlan plan = plan_scales(model, profile);

  QuantizeResult result{.graph = {},
                        .descriptors = {},
                        .plan = std::move(plan),
                        .report = {}};
  result.report.model = model.name;
  result.report.codification = codification_name(codification);
  result.report.input_scale = result.plan.input_scale.value();
  result.report.output_scale = result.plan.output_scale().value();

  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const FloatLayer& layer = model.layers[i];
    const LayerScalePlan& lp = result.plan.layers[i];

    HwLayerDescriptor d;
    d.name = layer.name;
    d.kind = layer.kind;
    d.weights = quantize_tensor(layer.weights, lp.scale_w, ElemType::kI8);
    BiasQuantResult bias = quantize_bias(layer.bias, lp.scale_w, lp.scale_x);
    d.bias = std::move(bias.bias_q);
    d.rescale = lp.rescale;
    d.codification = codification;
    d.activation = lp.activation;
    d.strides = layer.strides;
    d.pads = layer.pads;

    LayerReport report{
        .name = layer.name,
        .scale_w = lp.scale_w.value(),
        .scale_x = lp.scale_x.value(),
        .scale_y = lp.scale_y ? std::optional<float>(lp.scale_y->value())
                              : std::nullopt,
        .y_scale = lp.activation.has_params()
                       ? std::optional<float>(lp.activation.y_scale().value())
                       : std::nullopt,
        .multiplier = lp.rescale.multiplier,
        .quant_scale = lp.rescale.quant_scale,
        .shift_bits = lp.rescale.shift_bits,
        .bias_saturated = bias.saturated_count};
    result.report.layers.push_back(std::move(report));
    result.descriptors.push_back(std::move(d));
  }

  result.graph = build_model(
      result.descriptors,
      ModelInput{model.input_name, ElemType::kI8, model.input_shape},
      model.name);
  return result;
}

}  // namespace pq

#endif  // PREQUANT_QUANTIZER_HPP_
