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
#ifndef PREQUANT_PATTERNS_HPP_
#define PREQUANT_PATTERNS_HPP_

// Codification of hardware layer descriptors as standard-ONNX node patterns,
// and the inverse: pattern extraction from a conforming graph.
//
// Every layer lowers to the same backbone
//   MatMulInteger/ConvInteger -> Add(bias) -> Cast(f32) -> rescale -> act
// where the rescale stage is either one fp32 Mul (the real multiplier) or
// two fp32 Muls (integer quant_scale, then the power-of-two shift fraction),
// and the activation stage ends in a QuantizeLinear that fixes the output
// grid.  QuantizeLinear with scale 1 and zero point 0 doubles as a plain
// round-and-saturate.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "prequant/error.hpp"
#include "prequant/graph.hpp"
#include "prequant/qmath.hpp"
#include "prequant/tensor.hpp"

namespace pq {

enum class LayerKind { kFullyConnected, kConv2d };
enum class ActivationKind { kNone, kRelu, kTanhI8, kTanhF16, kSigmoidF16 };
enum class RescaleCodification { kOneMul, kTwoMul };

inline const char* layer_kind_name(LayerKind k) {
  return k == LayerKind::kFullyConnected ? "fully_connected" : "conv2d";
}
inline std::optional<LayerKind> layer_kind_from_name(std::string_view name) {
  if (name == "fully_connected") return LayerKind::kFullyConnected;
  if (name == "conv2d") return LayerKind::kConv2d;
  return std::nullopt;
}

inline const char* activation_kind_name(ActivationKind k) {
  switch (k) {
    case ActivationKind::kNone: return "none";
    case ActivationKind::kRelu: return "relu";
    case ActivationKind::kTanhI8: return "tanh_i8";
    case ActivationKind::kTanhF16: return "tanh_f16";
    case ActivationKind::kSigmoidF16: return "sigmoid_f16";
  }
  return "invalid";
}
inline std::optional<ActivationKind> activation_kind_from_name(
    std::string_view name) {
  if (name == "none") return ActivationKind::kNone;
  if (name == "relu") return ActivationKind::kRelu;
  if (name == "tanh_i8") return ActivationKind::kTanhI8;
  if (name == "tanh_f16") return ActivationKind::kTanhF16;
  if (name == "sigmoid_f16") return ActivationKind::kSigmoidF16;
  return std::nullopt;
}

inline const char* codification_name(RescaleCodification c) {
  return c == RescaleCodification::kOneMul ? "one_mul" : "two_mul";
}
inline std::optional<RescaleCodification> codification_from_name(
    std::string_view name) {
  if (name == "one_mul") return RescaleCodification::kOneMul;
  if (name == "two_mul") return RescaleCodification::kTwoMul;
  return std::nullopt;
}

// Activation stage parameters.  tanh_i8 evaluates tanh on the int8 grid
// i * x_step (a 256-entry table in hardware); the f16 variants evaluate the
// function in half precision on the dequantized value.  All variants except
// `none`/`relu` requantize the function output with y_scale.
class ActivationSpec {
 public:
  ActivationSpec() = default;

  static ActivationSpec none() { return ActivationSpec(); }
  static ActivationSpec relu() {
    ActivationSpec a;
    a.kind_ = ActivationKind::kRelu;
    return a;
  }
  // input_bound is the |x| range the grid covers; the step retained is the
  // fp32 value of input_bound / 127, which is what the graph embeds.
  static ActivationSpec tanh_i8(float input_bound, Scale y_scale) {
    if (!(input_bound > 0.0f) || !std::isfinite(input_bound)) {
      throw Error(ErrorCode::kRange, "tanh input bound must be positive");
    }
    ActivationSpec a;
    a.kind_ = ActivationKind::kTanhI8;
    a.x_step_ = input_bound / 127.0f;
    a.y_scale_ = y_scale;
    return a;
  }
  static ActivationSpec tanh_i8_from_step(float x_step, Scale y_scale) {
    if (!(x_step > 0.0f) || !std::isfinite(x_step)) {
      throw Error(ErrorCode::kRange, "tanh grid step must be positive");
    }
    ActivationSpec a;
    a.kind_ = ActivationKind::kTanhI8;
    a.x_step_ = x_step;
    a.y_scale_ = y_scale;
    return a;
  }
  static ActivationSpec tanh_f16(Scale y_scale) {
    ActivationSpec a;
    a.kind_ = ActivationKind::kTanhF16;
    a.y_scale_ = y_scale;
    return a;
  }
  static ActivationSpec sigmoid_f16(Scale y_scale) {
    ActivationSpec a;
    a.kind_ = ActivationKind::kSigmoidF16;
    a.y_scale_ = y_scale;
    return a;
  }

  ActivationKind kind() const { return kind_; }
  bool has_params() const { return kind_ != ActivationKind::kNone &&
                                   kind_ != ActivationKind::kRelu; }
  float x_step() const {
    if (kind_ != ActivationKind::kTanhI8) {
      throw Error(ErrorCode::kValidation, "x_step only exists for tanh_i8");
    }
    return *x_step_;
  }
  float input_bound() const { return x_step() * 127.0f; }
  const Scale& y_scale() const {
    if (!y_scale_) {
      throw Error(ErrorCode::kValidation,
                  "y_scale only exists for tanh/sigmoid activations");
    }
    return *y_scale_;
  }

  // Output element type implied by the activation: uint8 for sigmoid (its
  // range is non-negative), int8 otherwise.
  ElemType output_dtype() const {
    return kind_ == ActivationKind::kSigmoidF16 ? ElemType::kU8
                                                : ElemType::kI8;
  }

  friend bool operator==(const ActivationSpec& a, const ActivationSpec& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.x_step_.has_value() != b.x_step_.has_value()) return false;
    if (a.x_step_ && *a.x_step_ != *b.x_step_) return false;
    if (a.y_scale_.has_value() != b.y_scale_.has_value()) return false;
    if (a.y_scale_ && !(*a.y_scale_ == *b.y_scale_)) return false;
    return true;
  }

 private:
  ActivationKind kind_ = ActivationKind::kNone;
  std::optional<float> x_step_;
  std::optional<Scale> y_scale_;
};

// Everything a fixed-point accelerator needs for one layer.  FC weights are
// stored [out_features, in_features]; conv weights [M, C, kH, kW].
struct HwLayerDescriptor {
  std::string name;
  LayerKind kind = LayerKind::kFullyConnected;
  QTensor weights;  // int8
  QTensor bias;     // int32, one element per output channel
  RescaleSpec rescale;
  RescaleCodification codification = RescaleCodification::kTwoMul;
  ActivationSpec activation;
  std::vector<int64_t> strides{1, 1};     // conv only
  std::vector<int64_t> pads{0, 0, 0, 0};  // conv only: top, left, bottom, right

  ElemType output_dtype() const { return activation.output_dtype(); }

  // Descriptor equality is codification-aware: a one_mul graph embeds only
  // the fp32 multiplier and a two_mul graph embeds only the integer pair, so
  // only the codified half of the rescale participates.
  friend bool operator==(const HwLayerDescriptor& a,
                         const HwLayerDescriptor& b) {
    if (a.name != b.name || a.kind != b.kind || a.weights != b.weights ||
        a.bias != b.bias || a.codification != b.codification ||
        !(a.activation == b.activation) || a.strides != b.strides ||
        a.pads != b.pads) {
      return false;
    }
    if (a.codification == RescaleCodification::kOneMul) {
      return a.rescale.multiplier == b.rescale.multiplier;
    }
    return a.rescale.quant_scale == b.rescale.quant_scale &&
           a.rescale.shift_bits == b.rescale.shift_bits;
  }
};

// Sanity checks a descriptor before it is lowered or serialized.
inline void check_descriptor(const HwLayerDescriptor& d) {
  auto fail = [&d](const std::string& msg) {
    throw Error(ErrorCode::kValidation,
                "layer '" + d.name + "': " + msg);
  };
  if (d.name.empty()) fail("layer name must not be empty");
  if (d.weights.dtype() != ElemType::kI8) fail("weights must be int8");
  if (d.bias.dtype() != ElemType::kI32) fail("bias must be int32");
  int64_t out_channels = 0;
  if (d.kind == LayerKind::kFullyConnected) {
    if (d.weights.rank() != 2) fail("fully-connected weights must be rank 2");
    out_channels = d.weights.shape()[0];
  } else {
    if (d.weights.rank() != 4) fail("conv weights must be rank 4");
    out_channels = d.weights.shape()[0];
    if (d.strides.size() != 2 || d.strides[0] < 1 || d.strides[1] < 1) {
      fail("strides must be two positive ints");
    }
    if (d.pads.size() != 4 ||
        std::any_of(d.pads.begin(), d.pads.end(),
                    [](int64_t p) { return p < 0; })) {
      fail("pads must be four non-negative ints");
    }
  }
  if (d.weights.element_count() == 0) fail("weights must not be empty");
  if (d.bias.rank() != 1 || d.bias.shape()[0] != out_channels) {
    fail("bias must be rank 1 with one element per output channel");
  }
  if (d.rescale.quant_scale < 1 || d.rescale.quant_scale > kMaxQuantScale) {
    fail("quant_scale out of range");
  }
  if (d.rescale.shift_bits > kMaxShiftBits) fail("shift_bits out of range");
  if (!(d.rescale.multiplier > 0.0f) ||
      !std::isfinite(d.rescale.multiplier)) {
    fail("rescale multiplier must be positive and finite");
  }
}

struct ModelInput {
  std::string name = "input";
  ElemType dtype = ElemType::kI8;
  std::vector<int64_t> shape;
};

// A lowered layer: its node chain plus the initializers it references.
struct LayerNodes {
  std::vector<NodeIR> nodes;
  std::map<std::string, QTensor> initializers;
  std::string output_name;
};

namespace pattern_detail {

inline std::string stage(const std::string& layer, const char* suffix) {
  return layer + "/" + suffix;
}

// Emits Cast(f32) -> rescale Mul(s) -> (activation chain) -> QuantizeLinear
// shared by FC and conv.  `acc_name` is the biased int32 accumulator value.
inline void emit_epilogue(const HwLayerDescriptor& d,
                          const std::string& acc_name, LayerNodes& out) {
  const std::string& layer = d.name;
  auto add_node = [&out](NodeIR node) { out.nodes.push_back(std::move(node)); };
  auto add_init = [&out, &layer](const std::string& name, QTensor t) {
    if (!out.initializers.emplace(name, std::move(t)).second) {
      throw Error(ErrorCode::kValidation,
                  "layer '" + layer + "': duplicate initializer " + name);
    }
  };

  // Cast the accumulator to fp32.
  const std::string acc_f32 = stage(layer, "acc_f32");
  add_node({.op_type = "Cast",
            .name = stage(layer, "cast"),
            .inputs = {acc_name},
            .outputs = {acc_f32},
            .attributes = {{"to", AttrValue(onnx_dtype_code(ElemType::kF32))}}});

  // Rescale stage.
  std::string scaled;
  if (d.codification == RescaleCodification::kOneMul) {
    scaled = stage(layer, "scaled");
    add_init(stage(layer, "multiplier"),
             QTensor::scalar_f32(d.rescale.multiplier));
    add_node({.op_type = "Mul",
              .name = stage(layer, "rescale"),
              .inputs = {acc_f32, stage(layer, "multiplier")},
              .outputs = {scaled},
              .attributes = {}});
  } else {
    const std::string partial = stage(layer, "scaled_q");
    scaled = stage(layer, "scaled");
    add_init(stage(layer, "quant_scale"),
             QTensor::scalar_f32(static_cast<float>(d.rescale.quant_scale)));
    add_init(stage(layer, "shift_scale"),
             QTensor::scalar_f32(
                 std::ldexp(1.0f, -static_cast<int>(d.rescale.shift_bits))));
    add_node({.op_type = "Mul",
              .name = stage(layer, "rescale_q"),
              .inputs = {acc_f32, stage(layer, "quant_scale")},
              .outputs = {partial},
              .attributes = {}});
    add_node({.op_type = "Mul",
              .name = stage(layer, "rescale_shift"),
              .inputs = {partial, stage(layer, "shift_scale")},
              .outputs = {scaled},
              .attributes = {}});
  }

  const ElemType out_dtype = d.output_dtype();
  const std::string zero_point = stage(layer, "zero_point");
  add_init(zero_point, out_dtype == ElemType::kU8
                           ? QTensor::scalar_u8(0)
                           : QTensor::scalar_i8(0));
  out.output_name = stage(layer, "out");

  switch (d.activation.kind()) {
    case ActivationKind::kNone:
    case ActivationKind::kRelu: {
      std::string pre_quant = scaled;
      if (d.activation.kind() == ActivationKind::kRelu) {
        pre_quant = stage(layer, "relu");
        add_node({.op_type = "Relu",
                  .name = stage(layer, "relu"),
                  .inputs = {scaled},
                  .outputs = {pre_quant},
                  .attributes = {}});
      }
      add_init(stage(layer, "unit_scale"), QTensor::scalar_f32(1.0f));
      add_node({.op_type = "QuantizeLinear",
                .name = stage(layer, "quantize"),
                .inputs = {pre_quant, stage(layer, "unit_scale"), zero_point},
                .outputs = {out.output_name},
                .attributes = {}});
      break;
    }
    case ActivationKind::kTanhI8: {
      // Round the rescaled value onto the int8 evaluation grid, then widen
      // and stretch by x_step before the fp32 tanh.  In hardware this whole
      // tail collapses into a 256-entry table lookup.
      add_init(stage(layer, "unit_scale"), QTensor::scalar_f32(1.0f));
      const std::string grid_q = stage(layer, "grid_q");
      add_node({.op_type = "QuantizeLinear",
                .name = stage(layer, "grid_quantize"),
                .inputs = {scaled, stage(layer, "unit_scale"), zero_point},
                .outputs = {grid_q},
                .attributes = {}});
      const std::string grid_f32 = stage(layer, "grid_f32");
      add_node(
          {.op_type = "Cast",
           .name = stage(layer, "grid_cast"),
           .inputs = {grid_q},
           .outputs = {grid_f32},
           .attributes = {{"to", AttrValue(onnx_dtype_code(ElemType::kF32))}}});
      add_init(stage(layer, "x_step"),
               QTensor::scalar_f32(d.activation.x_step()));
      const std::string tanh_in = stage(layer, "tanh_in");
      add_node({.op_type = "Mul",
                .name = stage(layer, "step_mul"),
                .inputs = {grid_f32, stage(layer, "x_step")},
                .outputs = {tanh_in},
                .attributes = {}});
      const std::string tanh_out = stage(layer, "tanh_out");
      add_node({.op_type = "Tanh",
                .name = stage(layer, "tanh"),
                .inputs = {tanh_in},
                .outputs = {tanh_out},
                .attributes = {}});
      add_init(stage(layer, "y_scale"),
               QTensor::scalar_f32(d.activation.y_scale().value()));
      add_node({.op_type = "QuantizeLinear",
                .name = stage(layer, "quantize"),
                .inputs = {tanh_out, stage(layer, "y_scale"), zero_point},
                .outputs = {out.output_name},
                .attributes = {}});
      break;
    }
    case ActivationKind::kTanhF16:
    case ActivationKind::kSigmoidF16: {
      const bool is_tanh = d.activation.kind() == ActivationKind::kTanhF16;
      const std::string act_f16 = stage(layer, "act_f16");
      add_node(
          {.op_type = "Cast",
           .name = stage(layer, "act_cast"),
           .inputs = {scaled},
           .outputs = {act_f16},
           .attributes = {{"to", AttrValue(onnx_dtype_code(ElemType::kF16))}}});
      const std::string act_out = stage(layer, "act_out");
      add_node({.op_type = is_tanh ? "Tanh" : "Sigmoid",
                .name = stage(layer, is_tanh ? "tanh" : "sigmoid"),
                .inputs = {act_f16},
                .outputs = {act_out},
                .attributes = {}});
      add_init(stage(layer, "y_scale"),
               QTensor::scalar_f32(d.activation.y_scale().value()));
      add_node({.op_type = "QuantizeLinear",
                .name = stage(layer, "quantize"),
                .inputs = {act_out, stage(layer, "y_scale"), zero_point},
                .outputs = {out.output_name},
                .attributes = {}});
      break;
    }
  }
}

inline QTensor transpose_2d(const QTensor& w) {
  const int64_t rows = w.shape()[0];
  const int64_t cols = w.shape()[1];
  QTensor out(w.dtype(), {cols, rows});
  auto src = w.i8();
  auto dst = out.i8();
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t c = 0; c < cols; ++c) {
      dst[static_cast<std::size_t>(c * rows + r)] =
          src[static_cast<std::size_t>(r * cols + c)];
    }
  }
  return out;
}

}  // namespace pattern_detail

// Lowers one fully-connected layer.  `input_name` is the int8/uint8
// activation value feeding the layer; the layer's quantized output appears
// under the returned output_name ("<layer>/out").
inline LayerNodes build_fc(const HwLayerDescriptor& d,
                           const std::string& input_name) {
  check_descriptor(d);
  if (d.kind != LayerKind::kFullyConnected) {
    throw Error(ErrorCode::kValidation,
                "build_fc called with a non-FC descriptor");
  }
  using pattern_detail::stage;
  LayerNodes out;
  // MatMulInteger consumes the weights transposed to [in, out].
  out.initializers.emplace(stage(d.name, "weights_q"),
                           pattern_detail::transpose_2d(d.weights));
  out.initializers.emplace(stage(d.name, "bias_q"), d.bias);
  const std::string acc = stage(d.name, "acc");
  out.nodes.push_back({.op_type = "MatMulInteger",
                       .name = stage(d.name, "matmul"),
                       .inputs = {input_name, stage(d.name, "weights_q")},
                       .outputs = {acc},
                       .attributes = {}});
  const std::string acc_biased = stage(d.name, "acc_biased");
  out.nodes.push_back({.op_type = "Add",
                       .name = stage(d.name, "bias_add"),
                       .inputs = {acc, stage(d.name, "bias_q")},
                       .outputs = {acc_biased},
                       .attributes = {}});
  pattern_detail::emit_epilogue(d, acc_biased, out);
  return out;
}

// Lowers one 2-d convolution layer (NCHW, OIHW weights).
inline LayerNodes build_conv(const HwLayerDescriptor& d,
                             const std::string& input_name) {
  check_descriptor(d);
  if (d.kind != LayerKind::kConv2d) {
    throw Error(ErrorCode::kValidation,
                "build_conv called with a non-conv descriptor");
  }
  using pattern_detail::stage;
  LayerNodes out;
  out.initializers.emplace(stage(d.name, "weights_q"), d.weights);
  // Bias broadcasts over N, H, W: store it as [1, M, 1, 1].
  QTensor bias4(ElemType::kI32, {1, d.bias.shape()[0], 1, 1});
  std::copy(d.bias.i32().begin(), d.bias.i32().end(), bias4.i32().begin());
  out.initializers.emplace(stage(d.name, "bias_q"), std::move(bias4));
  const std::string acc = stage(d.name, "acc");
  out.nodes.push_back({.op_type = "ConvInteger",
                       .name = stage(d.name, "conv"),
                       .inputs = {input_name, stage(d.name, "weights_q")},
                       .outputs = {acc},
                       .attributes = {{"pads", AttrValue(d.pads)},
                                      {"strides", AttrValue(d.strides)}}});
  const std::string acc_biased = stage(d.name, "acc_biased");
  out.nodes.push_back({.op_type = "Add",
                       .name = stage(d.name, "bias_add"),
                       .inputs = {acc, stage(d.name, "bias_q")},
                       .outputs = {acc_biased},
                       .attributes = {}});
  pattern_detail::emit_epilogue(d, acc_biased, out);
  return out;
}

// Output shape of a layer applied to `input_shape`, with full validation of
// the chaining constraints.
inline std::vector<int64_t> layer_output_shape(
    const HwLayerDescriptor& d, std::span<const int64_t> input_shape) {
  auto fail = [&d](const std::string& msg) {
    throw Error(ErrorCode::kValidation, "layer '" + d.name + "': " + msg);
  };
  if (d.kind == LayerKind::kFullyConnected) {
    if (input_shape.size() != 2) fail("expects a rank-2 input");
    if (input_shape[1] != d.weights.shape()[1]) {
      fail("input features " + std::to_string(input_shape[1]) +
           " do not match weights in_features " +
           std::to_string(d.weights.shape()[1]));
    }
    return {input_shape[0], d.weights.shape()[0]};
  }
  if (input_shape.size() != 4) fail("expects a rank-4 input");
  const auto& w = d.weights.shape();
  if (input_shape[1] != w[1]) {
    fail("input channels " + std::to_string(input_shape[1]) +
         " do not match weight channels " + std::to_string(w[1]));
  }
  const int64_t padded_h = input_shape[2] + d.pads[0] + d.pads[2];
  const int64_t padded_w = input_shape[3] + d.pads[1] + d.pads[3];
  if (padded_h < w[2] || padded_w < w[3]) {
    fail("kernel does not fit the padded input");
  }
  return {input_shape[0], w[0], (padded_h - w[2]) / d.strides[0] + 1,
          (padded_w - w[3]) / d.strides[1] + 1};
}

// Chains layers into a complete single-input single-output GraphIR.
inline GraphIR build_model(std::span<const HwLayerDescriptor> layers,
                           const ModelInput& input,
                           const std::string& model_name = "model") {
  if (layers.empty()) {
    throw Error(ErrorCode::kValidation, "model needs at least one layer");
  }
  if (input.dtype != ElemType::kI8 && input.dtype != ElemType::kU8) {
    throw Error(ErrorCode::kValidation,
                "model input must be int8 or uint8");
  }
  if (input.name.empty()) {
    throw Error(ErrorCode::kValidation, "model input needs a name");
  }
  for (int64_t extent : input.shape) {
    if (extent < 1) {
      throw Error(ErrorCode::kValidation,
                  "model input shape must be fully positive");
    }
  }

  GraphIR g;
  g.name = model_name;
  g.inputs.push_back({input.name, input.dtype, input.shape});

  std::set<std::string> seen_names;
  std::string cursor = input.name;
  std::vector<int64_t> shape = input.shape;
  for (const auto& layer : layers) {
    if (!seen_names.insert(layer.name).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate layer name '" + layer.name + "'");
    }
    shape = layer_output_shape(layer, shape);
    LayerNodes lowered = layer.kind == LayerKind::kFullyConnected
                             ? build_fc(layer, cursor)
                             : build_conv(layer, cursor);
    for (auto& node : lowered.nodes) g.nodes.push_back(std::move(node));
    for (auto& [name, tensor] : lowered.initializers) {
      g.initializers.insert_or_assign(name, std::move(tensor));
    }
    cursor = lowered.output_name;
  }
  g.outputs.push_back({cursor, layers.back().output_dtype(), shape});
  return g;
}

namespace pattern_detail {

[[noreturn]] inline void pattern_fail(const std::string& where,
                                      const std::string& msg) {
  throw Error(ErrorCode::kPattern,
              (where.empty() ? "" : where + ": ") + msg);
}

class Extractor {
 public:
  explicit Extractor(const GraphIR& g) : g_(g) {
    for (std::size_t i = 0; i < g_.nodes.size(); ++i) {
      for (const auto& in : g_.nodes[i].inputs) {
        consumers_[in].push_back(i);
      }
    }
  }

  std::vector<HwLayerDescriptor> run() {
    if (g_.inputs.size() != 1 || g_.outputs.size() != 1) {
      pattern_fail("", "expected exactly one graph input and one output");
    }
    std::vector<HwLayerDescriptor> layers;
    std::string cursor = g_.inputs[0].name;
    while (cursor != g_.outputs[0].name) {
      layers.push_back(extract_layer(cursor));
    }
    if (consumed_.size() != g_.nodes.size()) {
      pattern_fail("", "graph contains nodes outside the layer chain");
    }
    return layers;
  }

 private:
  // The unique node consuming `value`; errors if the value fans out, which
  // conforming layer chains never do.
  const NodeIR& sole_consumer(const std::string& value) {
    auto it = consumers_.find(value);
    if (it == consumers_.end() || it->second.empty()) {
      pattern_fail("", "value '" + value + "' is never consumed");
    }
    if (it->second.size() != 1) {
      pattern_fail("", "value '" + value + "' feeds more than one node");
    }
    consumed_.insert(it->second[0]);
    return g_.nodes[it->second[0]];
  }

  const NodeIR& expect_op(const std::string& value, std::string_view op) {
    const NodeIR& node = sole_consumer(value);
    if (node.op_type != op) {
      pattern_fail(node.name, "expected " + std::string(op) + " after '" +
                                  value + "', found " + node.op_type);
    }
    return node;
  }

  const QTensor* initializer(const std::string& name) const {
    auto it = g_.initializers.find(name);
    return it == g_.initializers.end() ? nullptr : &it->second;
  }

  float scalar_f32_initializer(const NodeIR& node, const std::string& name) {
    const QTensor* t = initializer(name);
    if (t == nullptr || t->dtype() != ElemType::kF32 ||
        t->element_count() != 1) {
      pattern_fail(node.name,
                   "'" + name + "' must be a float32 scalar initializer");
    }
    return t->f32()[0];
  }

  std::string derive_layer_name(const NodeIR& first_node, std::size_t index) {
    std::string base;
    const auto slash = first_node.name.find('/');
    if (slash != std::string::npos && slash > 0) {
      base = first_node.name.substr(0, slash);
    } else if (!first_node.name.empty()) {
      base = first_node.name;
    } else {
      base = "layer" + std::to_string(index);
    }
    while (!used_layer_names_.insert(base).second) base += "_";
    return base;
  }

  HwLayerDescriptor extract_layer(std::string& cursor) {
    HwLayerDescriptor d;
    const NodeIR& head = sole_consumer(cursor);
    d.name = derive_layer_name(head, layer_index_++);

    if (head.op_type == "MatMulInteger") {
      d.kind = LayerKind::kFullyConnected;
      if (head.inputs.size() != 2 || head.inputs[0] != cursor) {
        pattern_fail(head.name, "activations must be the left matmul input");
      }
      const QTensor* w = initializer(head.inputs[1]);
      if (w == nullptr || w->dtype() != ElemType::kI8 || w->rank() != 2) {
        pattern_fail(head.name,
                     "matmul weights must be a rank-2 int8 initializer");
      }
      d.weights = transpose_2d(*w);  // wire layout is [in, out]
    } else if (head.op_type == "ConvInteger") {
      d.kind = LayerKind::kConv2d;
      if (head.inputs.size() != 2 || head.inputs[0] != cursor) {
        pattern_fail(head.name, "activations must be the first conv input");
      }
      const QTensor* w = initializer(head.inputs[1]);
      if (w == nullptr || w->dtype() != ElemType::kI8 || w->rank() != 4) {
        pattern_fail(head.name,
                     "conv weights must be a rank-4 int8 initializer");
      }
      d.weights = *w;
      if (const auto* s = head.ints_attr("strides")) d.strides = *s;
      if (const auto* p = head.ints_attr("pads")) d.pads = *p;
    } else {
      pattern_fail(head.name,
                   "layer must start with MatMulInteger or ConvInteger, "
                   "found " + head.op_type);
    }

    // Bias add: the non-accumulator operand must be an int32 initializer.
    const NodeIR& add = expect_op(head.outputs[0], "Add");
    const std::string& bias_name =
        add.inputs[0] == head.outputs[0] ? add.inputs[1] : add.inputs[0];
    const QTensor* bias = initializer(bias_name);
    if (bias == nullptr || bias->dtype() != ElemType::kI32) {
      pattern_fail(add.name, "bias must be an int32 initializer");
    }
    const int64_t out_channels = d.weights.shape()[0];
    if (d.kind == LayerKind::kFullyConnected) {
      if (bias->rank() != 1 || bias->shape()[0] != out_channels) {
        pattern_fail(add.name, "fully-connected bias must have shape [out]");
      }
      d.bias = *bias;
    } else {
      if (bias->shape() != std::vector<int64_t>{1, out_channels, 1, 1}) {
        pattern_fail(add.name, "conv bias must have shape [1, M, 1, 1]");
      }
      d.bias = QTensor(ElemType::kI32, {out_channels});
      std::copy(bias->i32().begin(), bias->i32().end(), d.bias.i32().begin());
    }

    // Cast to fp32.
    const NodeIR& cast = expect_op(add.outputs[0], "Cast");
    const int64_t* to = cast.int_attr("to");
    if (to == nullptr || elem_type_from_onnx_code(*to) != ElemType::kF32) {
      pattern_fail(cast.name, "accumulator cast must target float32");
    }

    // Rescale stage: one or two scalar Muls.
    const NodeIR& mul1 = expect_op(cast.outputs[0], "Mul");
    const float s1 = scalar_f32_initializer(
        mul1, mul1.inputs[0] == cast.outputs[0] ? mul1.inputs[1]
                                                : mul1.inputs[0]);
    const NodeIR* after_rescale = &sole_consumer(mul1.outputs[0]);
    if (after_rescale->op_type == "Mul") {
      const NodeIR& mul2 = *after_rescale;
      const float s2 = scalar_f32_initializer(
          mul2, mul2.inputs[0] == mul1.outputs[0] ? mul2.inputs[1]
                                                  : mul2.inputs[0]);
      d.codification = RescaleCodification::kTwoMul;
      d.rescale = decode_two_mul(mul2, s1, s2);
      after_rescale = &sole_consumer(mul2.outputs[0]);
    } else {
      d.codification = RescaleCodification::kOneMul;
      if (!(s1 > 0.0f) || !std::isfinite(s1)) {
        pattern_fail(mul1.name, "rescale multiplier must be positive");
      }
      d.rescale = decompose_rescale(static_cast<double>(s1));
      d.rescale.multiplier = s1;
    }

    // Activation stage, ending in the layer's QuantizeLinear.
    const NodeIR& quant = decode_activation(d, *after_rescale);
    const QTensor* zp = initializer(quant.inputs[2]);
    if (zp == nullptr) {
      pattern_fail(quant.name, "zero point must be an initializer");
    }
    if (zp->dtype() != d.output_dtype()) {
      pattern_fail(quant.name,
                   std::string("output zero point must be ") +
                       elem_type_name(d.output_dtype()) + " for activation " +
                       activation_kind_name(d.activation.kind()));
    }

    cursor = quant.outputs[0];
    return d;
  }

  RescaleSpec decode_two_mul(const NodeIR& node, float s1, float s2) {
    if (!(s1 >= 1.0f) || s1 > static_cast<float>(kMaxQuantScale) ||
        s1 != std::floor(s1)) {
      pattern_fail(node.name,
                   "first rescale factor must be an integer in [1, 2^24]");
    }
    int exp = 0;
    const float mant = std::frexp(s2, &exp);
    if (mant != 0.5f || exp > 1 || 1 - exp > static_cast<int>(kMaxShiftBits)) {
      pattern_fail(node.name,
                   "second rescale factor must be a power of two in "
                   "[2^-62, 1]");
    }
    RescaleSpec spec;
    spec.quant_scale = static_cast<std::uint32_t>(s1);
    spec.shift_bits = static_cast<std::uint32_t>(1 - exp);
    spec.multiplier = static_cast<float>(
        std::ldexp(static_cast<double>(spec.quant_scale),
                   -static_cast<int>(spec.shift_bits)));
    return spec;
  }

  // Walks the activation chain starting at the node right after the rescale
  // stage; fills d.activation and returns the closing QuantizeLinear.
  const NodeIR& decode_activation(HwLayerDescriptor& d, const NodeIR& first) {
    if (first.op_type == "QuantizeLinear") {
      const float scale = scalar_f32_initializer(first, first.inputs[1]);
      if (scale != 1.0f) {
        pattern_fail(first.name,
                     "plain layers must quantize with unit scale");
      }
      // Unit-scale QuantizeLinear is shared by the `none` epilogue and the
      // tanh_i8 grid snap; the follow-up Cast distinguishes them.
      auto it = consumers_.find(first.outputs[0]);
      const bool feeds_cast =
          it != consumers_.end() && it->second.size() == 1 &&
          g_.nodes[it->second[0]].op_type == "Cast";
      if (!feeds_cast) {
        d.activation = ActivationSpec::none();
        return first;
      }
      return decode_tanh_i8(d, first);
    }
    if (first.op_type == "Relu") {
      const NodeIR& quant = expect_op(first.outputs[0], "QuantizeLinear");
      const float scale = scalar_f32_initializer(quant, quant.inputs[1]);
      if (scale != 1.0f) {
        pattern_fail(quant.name,
                     "relu layers must quantize with unit scale");
      }
      d.activation = ActivationSpec::relu();
      return quant;
    }
    if (first.op_type == "Cast") {
      const int64_t* to = first.int_attr("to");
      if (to == nullptr || elem_type_from_onnx_code(*to) != ElemType::kF16) {
        pattern_fail(first.name,
                     "activation cast after the rescale must target float16");
      }
      const NodeIR& act = sole_consumer(first.outputs[0]);
      if (act.op_type != "Tanh" && act.op_type != "Sigmoid") {
        pattern_fail(act.name,
                     "expected Tanh or Sigmoid on the float16 value");
      }
      const NodeIR& quant = expect_op(act.outputs[0], "QuantizeLinear");
      const float y = scalar_f32_initializer(quant, quant.inputs[1]);
      d.activation = act.op_type == "Tanh"
                         ? ActivationSpec::tanh_f16(Scale(y))
                         : ActivationSpec::sigmoid_f16(Scale(y));
      return quant;
    }
    pattern_fail(first.name,
                 "unexpected " + first.op_type + " after the rescale stage");
  }

  const NodeIR& decode_tanh_i8(HwLayerDescriptor& d, const NodeIR& grid_q) {
    const NodeIR& cast = expect_op(grid_q.outputs[0], "Cast");
    const int64_t* to = cast.int_attr("to");
    if (to == nullptr || elem_type_from_onnx_code(*to) != ElemType::kF32) {
      pattern_fail(cast.name, "grid cast must target float32");
    }
    const NodeIR& mul = expect_op(cast.outputs[0], "Mul");
    const float step = scalar_f32_initializer(
        mul, mul.inputs[0] == cast.outputs[0] ? mul.inputs[1]
                                              : mul.inputs[0]);
    if (!(step > 0.0f) || !std::isfinite(step)) {
      pattern_fail(mul.name, "tanh grid step must be positive");
    }
    const NodeIR& tanh = expect_op(mul.outputs[0], "Tanh");
    const NodeIR& quant = expect_op(tanh.outputs[0], "QuantizeLinear");
    const float y = scalar_f32_initializer(quant, quant.inputs[1]);
    d.activation = ActivationSpec::tanh_i8_from_step(step, Scale(y));
    return quant;
  }

  const GraphIR& g_;
  std::map<std::string, std::vector<std::size_t>> consumers_;
  std::set<std::size_t> consumed_;
  std::set<std::string> used_layer_names_;
  std::size_t layer_index_ = 0;
};

}  // namespace pattern_detail

// Recovers hardware layer descriptors from a conforming graph.  The graph
// must validate cleanly; any structural deviation from the emitted patterns
// raises a pattern error.
inline std::vector<HwLayerDescriptor> extract(const GraphIR& g) {
  require_valid(g);
  return pattern_detail::Extractor(g).run();
}

inline ModelInput extract_input_spec(const GraphIR& g) {
  if (g.inputs.size() != 1) {
    throw Error(ErrorCode::kPattern, "expected exactly one graph input");
  }
  return {g.inputs[0].name, g.inputs[0].dtype, g.inputs[0].shape};
}

}  // namespace pq

#endif  // PREQUANT_PATTERNS_HPP_
