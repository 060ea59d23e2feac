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
#ifndef PREQUANT_INTERP_HPP_
#define PREQUANT_INTERP_HPP_

// Bit-exact reference interpreter for the supported operator subset.
// Determinism rules: integer accumulation runs in 64 bits in a pinned order
// (k ascending for matmul; c, kh, kw ascending for conv) with an int32
// range check on every partial sum; fp32 ops are evaluated in fp32; fp16
// ops widen to fp32, compute, and round back; tanh/sigmoid are evaluated in
// double and rounded once to fp32.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "prequant/error.hpp"
#include "prequant/fp16.hpp"
#include "prequant/graph.hpp"
#include "prequant/qmath.hpp"
#include "prequant/tensor.hpp"

namespace pq {

// Correctly rounded (to fp32) elementary activations: evaluate in double,
// round once.
inline float f32_tanh(float x) {
  return static_cast<float>(std::tanh(static_cast<double>(x)));
}
inline float f32_sigmoid(float x) {
  return static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(x))));
}

struct RunStats {
  // int32 -> float32 casts where the float could not hold the integer.
  std::uint64_t inexact_cast_count = 0;
  // QuantizeLinear elements clipped to the target range.
  std::uint64_t quantize_saturation_count = 0;
};

struct RunResult {
  std::map<std::string, QTensor> outputs;
  RunStats stats;
};

// The 256-entry table a hardware tanh_i8 stage would hold: entry j covers
// grid index i = j - 128 and stores round_clip(tanh(i * x_step) / y_scale).
inline std::array<std::int8_t, 256> tanh_i8_lut(float x_step,
                                                const Scale& y_scale) {
  std::array<std::int8_t, 256> lut{};
  for (int j = 0; j < 256; ++j) {
    const int i = j - 128;
    const float y = f32_tanh(static_cast<float>(i) * x_step);
    lut[static_cast<std::size_t>(j)] =
        static_cast<std::int8_t>(round_clip(y, y_scale, ElemType::kI8));
  }
  return lut;
}

namespace interp_detail {

class Session {
 public:
  Session(const GraphIR& g, const std::map<std::string, QTensor>& inputs)
      : g_(g) {
    for (const auto& [name, tensor] : g_.initializers) {
      env_.emplace(name, tensor);
    }
    for (const auto& spec : g_.inputs) {
      auto it = inputs.find(spec.name);
      if (it == inputs.end()) {
        throw Error(ErrorCode::kBinding,
                    "no tensor bound for graph input '" + spec.name + "'");
      }
      if (it->second.dtype() != spec.dtype) {
        throw Error(ErrorCode::kBinding,
                    "input '" + spec.name + "' expects " +
                        elem_type_name(spec.dtype) + ", got " +
                        elem_type_name(it->second.dtype()));
      }
      if (it->second.shape() != spec.shape) {
        throw Error(ErrorCode::kBinding,
                    "input '" + spec.name + "' has the wrong shape");
      }
      env_.emplace(spec.name, it->second);
    }
    for (const auto& [name, tensor] : inputs) {
      (void)tensor;
      const bool declared =
          std::any_of(g_.inputs.begin(), g_.inputs.end(),
                      [&name](const ValueSpec& s) { return s.name == name; });
      if (!declared) {
        throw Error(ErrorCode::kBinding,
                    "tensor bound to unknown input '" + name + "'");
      }
    }
  }

  RunResult run() {
    for (const auto& node : g_.nodes) eval(node);
    RunResult result;
    for (const auto& spec : g_.outputs) {
      result.outputs.emplace(spec.name, env_.at(spec.name));
    }
    result.stats = stats_;
    return result;
  }

 private:
  const QTensor& in(const NodeIR& node, std::size_t i) const {
    return env_.at(node.inputs[i]);
  }

  void out(const NodeIR& node, QTensor value) {
    env_.insert_or_assign(node.outputs[0], std::move(value));
  }

  [[noreturn]] void overflow(const NodeIR& node) const {
    throw Error(ErrorCode::kOverflow,
                "int32 accumulator overflow in node '" + node.name + "'");
  }

  static bool fits_i32(std::int64_t v) {
    return v >= std::numeric_limits<std::int32_t>::min() &&
           v <= std::numeric_limits<std::int32_t>::max();
  }

  // Signed view of an int8/uint8 operand element.
  static std::int32_t int_elem(const QTensor& t, std::size_t i) {
    return t.dtype() == ElemType::kI8 ? t.i8()[i]
                                      : static_cast<std::int32_t>(t.u8()[i]);
  }

  void eval(const NodeIR& node) {
    if (node.op_type == "MatMulInteger") {
      matmul(node);
    } else if (node.op_type == "ConvInteger") {
      conv(node);
    } else if (node.op_type == "Add" || node.op_type == "Mul") {
      binary(node);
    } else if (node.op_type == "Cast") {
      cast(node);
    } else if (node.op_type == "QuantizeLinear") {
      quantize_linear(node);
    } else if (node.op_type == "Relu") {
      relu(node);
    } else if (node.op_type == "Tanh" || node.op_type == "Sigmoid") {
      unary_activation(node);
    } else {
      throw Error(ErrorCode::kUnsupportedOp,
                  "unsupported operator '" + node.op_type + "'");
    }
  }

  void matmul(const NodeIR& node) {
    const QTensor& a = in(node, 0);
    const QTensor& b = in(node, 1);
    const int64_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
    QTensor y(ElemType::kI32, {m, n});
    auto dst = y.i32();
    const auto bw = b.i8();
    for (int64_t r = 0; r < m; ++r) {
      for (int64_t c = 0; c < n; ++c) {
        std::int64_t acc = 0;
        for (int64_t j = 0; j < k; ++j) {
          acc += static_cast<std::int64_t>(
                     int_elem(a, static_cast<std::size_t>(r * k + j))) *
                 bw[static_cast<std::size_t>(j * n + c)];
          if (!fits_i32(acc)) overflow(node);
        }
        dst[static_cast<std::size_t>(r * n + c)] =
            static_cast<std::int32_t>(acc);
      }
    }
    out(node, std::move(y));
  }

  void conv(const NodeIR& node) {
    const QTensor& x = in(node, 0);
    const QTensor& w = in(node, 1);
    std::vector<int64_t> strides{1, 1};
    std::vector<int64_t> pads{0, 0, 0, 0};
    if (const auto* s = node.ints_attr("strides")) strides = *s;
    if (const auto* p = node.ints_attr("pads")) pads = *p;

    const int64_t batch = x.shape()[0], channels = x.shape()[1];
    const int64_t height = x.shape()[2], width = x.shape()[3];
    const int64_t m = w.shape()[0], kh = w.shape()[2], kw = w.shape()[3];
    const int64_t oh = (height + pads[0] + pads[2] - kh) / strides[0] + 1;
    const int64_t ow = (width + pads[1] + pads[3] - kw) / strides[1] + 1;

    QTensor y(ElemType::kI32, {batch, m, oh, ow});
    auto dst = y.i32();
    const auto wq = w.i8();
    std::size_t out_idx = 0;
    for (int64_t nb = 0; nb < batch; ++nb) {
      for (int64_t oc = 0; oc < m; ++oc) {
        for (int64_t r = 0; r < oh; ++r) {
          for (int64_t c = 0; c < ow; ++c) {
            std::int64_t acc = 0;
            for (int64_t ic = 0; ic < channels; ++ic) {
              for (int64_t dy = 0; dy < kh; ++dy) {
                const int64_t iy = r * strides[0] - pads[0] + dy;
                if (iy < 0 || iy >= height) continue;  // zero padding
                for (int64_t dx = 0; dx < kw; ++dx) {
                  const int64_t ix = c * strides[1] - pads[1] + dx;
                  if (ix < 0 || ix >= width) continue;
                  const auto xi = static_cast<std::size_t>(
                      ((nb * channels + ic) * height + iy) * width + ix);
                  const auto wi = static_cast<std::size_t>(
                      ((oc * channels + ic) * kh + dy) * kw + dx);
                  acc += static_cast<std::int64_t>(int_elem(x, xi)) * wq[wi];
                  if (!fits_i32(acc)) overflow(node);
                }
              }
            }
            dst[out_idx++] = static_cast<std::int32_t>(acc);
          }
        }
      }
    }
    out(node, std::move(y));
  }

  void binary(const NodeIR& node) {
    const QTensor& a = in(node, 0);
    const QTensor& b = in(node, 1);
    const auto shape = broadcast_shapes(a.shape(), b.shape());
    if (!shape) {
      throw Error(ErrorCode::kValidation,
                  "shapes do not broadcast in node '" + node.name + "'");
    }
    const bool is_add = node.op_type == "Add";
    QTensor y(a.dtype(), *shape);
    const auto count = static_cast<std::size_t>(y.element_count());

    // Index maps for broadcasting: stride 0 on broadcast dimensions.
    const auto out_strides = row_major_strides(*shape);
    auto operand_strides = [&](const QTensor& t) {
      std::vector<int64_t> st(shape->size(), 0);
      const auto ts = row_major_strides(t.shape());
      const std::size_t offset = shape->size() - t.shape().size();
      for (std::size_t i = 0; i < t.shape().size(); ++i) {
        st[offset + i] = t.shape()[i] == 1 ? 0 : ts[i];
      }
      return st;
    };
    const auto sa = operand_strides(a);
    const auto sb = operand_strides(b);
    auto map_index = [&](std::size_t flat, const std::vector<int64_t>& st) {
      std::size_t idx = 0;
      auto rest = static_cast<int64_t>(flat);
      for (std::size_t i = 0; i < out_strides.size(); ++i) {
        const int64_t coord = rest / out_strides[i];
        rest %= out_strides[i];
        idx += static_cast<std::size_t>(coord * st[i]);
      }
      return idx;
    };

    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t ia = map_index(i, sa);
      const std::size_t ib = map_index(i, sb);
      switch (a.dtype()) {
        case ElemType::kI32: {
          const auto va = static_cast<std::int64_t>(a.i32()[ia]);
          const auto vb = static_cast<std::int64_t>(b.i32()[ib]);
          const std::int64_t v = is_add ? va + vb : va * vb;
          if (!fits_i32(v)) overflow(node);
          y.i32()[i] = static_cast<std::int32_t>(v);
          break;
        }
        case ElemType::kF32:
          y.f32()[i] = is_add ? a.f32()[ia] + b.f32()[ib]
                              : a.f32()[ia] * b.f32()[ib];
          break;
        case ElemType::kF16: {
          const float va = from_fp16_bits(a.f16_bits()[ia]);
          const float vb = from_fp16_bits(b.f16_bits()[ib]);
          y.f16_bits()[i] = to_fp16_bits(is_add ? va + vb : va * vb);
          break;
        }
        default:
          throw Error(ErrorCode::kValidation,
                      "unsupported dtype in node '" + node.name + "'");
      }
    }
    out(node, std::move(y));
  }

  void cast(const NodeIR& node) {
    const QTensor& x = in(node, 0);
    const auto target = *elem_type_from_onnx_code(*node.int_attr("to"));
    QTensor y(target, x.shape());
    const auto count = static_cast<std::size_t>(x.element_count());
    if (target == ElemType::kF32) {
      auto dst = y.f32();
      for (std::size_t i = 0; i < count; ++i) {
        switch (x.dtype()) {
          case ElemType::kI32: {
            const std::int32_t v = x.i32()[i];
            const float f = static_cast<float>(v);
            if (static_cast<std::int64_t>(f) != static_cast<std::int64_t>(v)) {
              ++stats_.inexact_cast_count;
            }
            dst[i] = f;
            break;
          }
          case ElemType::kI8: dst[i] = static_cast<float>(x.i8()[i]); break;
          case ElemType::kU8: dst[i] = static_cast<float>(x.u8()[i]); break;
          case ElemType::kF16: dst[i] = from_fp16_bits(x.f16_bits()[i]); break;
          case ElemType::kF32: dst[i] = x.f32()[i]; break;
        }
      }
    } else {  // F16
      auto dst = y.f16_bits();
      for (std::size_t i = 0; i < count; ++i) {
        dst[i] = to_fp16_bits(static_cast<float>(x.element_as_double(i)));
      }
    }
    out(node, std::move(y));
  }

  void quantize_linear(const NodeIR& node) {
    const QTensor& x = in(node, 0);
    const Scale scale(in(node, 1).f32()[0]);
    const ElemType target = in(node, 2).dtype();
    QTensor y(target, x.shape());
    const auto count = static_cast<std::size_t>(x.element_count());
    for (std::size_t i = 0; i < count; ++i) {
      const float v = x.dtype() == ElemType::kF16
                          ? from_fp16_bits(x.f16_bits()[i])
                          : x.f32()[i];
      bool saturated = false;
      const std::int32_t q = round_clip(v, scale, target, &saturated);
      if (saturated) ++stats_.quantize_saturation_count;
      if (target == ElemType::kI8) {
        y.i8()[i] = static_cast<std::int8_t>(q);
      } else {
        y.u8()[i] = static_cast<std::uint8_t>(q);
      }
    }
    out(node, std::move(y));
  }

  void relu(const NodeIR& node) {
    const QTensor& x = in(node, 0);
    QTensor y(x.dtype(), x.shape());
    const auto count = static_cast<std::size_t>(x.element_count());
    for (std::size_t i = 0; i < count; ++i) {
      switch (x.dtype()) {
        case ElemType::kF32:
          y.f32()[i] = x.f32()[i] > 0.0f ? x.f32()[i] : 0.0f;
          break;
        case ElemType::kI32:
          y.i32()[i] = x.i32()[i] > 0 ? x.i32()[i] : 0;
          break;
        case ElemType::kF16: {
          const float v = from_fp16_bits(x.f16_bits()[i]);
          y.f16_bits()[i] = to_fp16_bits(v > 0.0f ? v : 0.0f);
          break;
        }
        case ElemType::kI8:
          y.i8()[i] = x.i8()[i] > 0 ? x.i8()[i] : 0;
          break;
        case ElemType::kU8:
          y.u8()[i] = x.u8()[i];
          break;
      }
    }
    out(node, std::move(y));
  }

  void unary_activation(const NodeIR& node) {
    const QTensor& x = in(node, 0);
    const bool is_tanh = node.op_type == "Tanh";
    QTensor y(x.dtype(), x.shape());
    const auto count = static_cast<std::size_t>(x.element_count());
    for (std::size_t i = 0; i < count; ++i) {
      if (x.dtype() == ElemType::kF32) {
        y.f32()[i] = is_tanh ? f32_tanh(x.f32()[i]) : f32_sigmoid(x.f32()[i]);
      } else {
        const float v = from_fp16_bits(x.f16_bits()[i]);
        y.f16_bits()[i] =
            to_fp16_bits(is_tanh ? f32_tanh(v) : f32_sigmoid(v));
      }
    }
    out(node, std::move(y));
  }

  const GraphIR& g_;
  std::map<std::string, QTensor> env_;
  RunStats stats_;
};

}  // namespace interp_detail

// Validates, binds, and executes the graph.
inline RunResult run(const GraphIR& g,
                     const std::map<std::string, QTensor>& inputs) {
  require_valid(g);
  return interp_detail::Session(g, inputs).run();
}

}  // namespace pq

#endif  // PREQUANT_INTERP_HPP_
