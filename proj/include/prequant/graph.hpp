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
#ifndef PREQUANT_GRAPH_HPP_
#define PREQUANT_GRAPH_HPP_

// In-memory graph IR for the ONNX subset this toolkit emits and consumes,
// plus structural validation.  The IR stays deliberately close to the ONNX
// proto layout so serialization is a direct transcription.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prequant/error.hpp"
#include "prequant/tensor.hpp"

namespace pq {

inline constexpr int64_t kIrVersion = 7;
inline constexpr int64_t kDefaultOpset = 13;
inline constexpr int64_t kMinOpset = 10;

// The closed operator set.  Everything else is rejected at parse and
// validation time.
inline constexpr std::array<std::string_view, 9> kSupportedOps = {
    "Add",  "Cast",           "ConvInteger", "MatMulInteger", "Mul",
    "Relu", "QuantizeLinear", "Sigmoid",     "Tanh",
};

inline bool is_supported_op(std::string_view op_type) {
  for (auto op : kSupportedOps) {
    if (op == op_type) return true;
  }
  return false;
}

// ONNX TensorProto.DataType codes for the element types in the subset.
inline int64_t onnx_dtype_code(ElemType type) {
  switch (type) {
    case ElemType::kF32: return 1;
    case ElemType::kU8: return 2;
    case ElemType::kI8: return 3;
    case ElemType::kI32: return 6;
    case ElemType::kF16: return 10;
  }
  throw Error(ErrorCode::kValidation, "invalid element type");
}

inline std::optional<ElemType> elem_type_from_onnx_code(int64_t code) {
  switch (code) {
    case 1: return ElemType::kF32;
    case 2: return ElemType::kU8;
    case 3: return ElemType::kI8;
    case 6: return ElemType::kI32;
    case 10: return ElemType::kF16;
    default: return std::nullopt;
  }
}

// Node attribute value.  The subset only needs scalars, int lists, and (for
// tolerant parsing) tensors.
using AttrValue = std::variant<float, int64_t, std::vector<int64_t>, QTensor>;

struct NodeIR {
  std::string op_type;
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::map<std::string, AttrValue> attributes;

  const int64_t* int_attr(std::string_view key) const {
    auto it = attributes.find(std::string(key));
    if (it == attributes.end()) return nullptr;
    return std::get_if<int64_t>(&it->second);
  }
  const std::vector<int64_t>* ints_attr(std::string_view key) const {
    auto it = attributes.find(std::string(key));
    if (it == attributes.end()) return nullptr;
    return std::get_if<std::vector<int64_t>>(&it->second);
  }

  friend bool operator==(const NodeIR&, const NodeIR&) = default;
};

// Typed value declaration for graph inputs and outputs.
struct ValueSpec {
  std::string name;
  ElemType dtype = ElemType::kF32;
  std::vector<int64_t> shape;

  friend bool operator==(const ValueSpec&, const ValueSpec&) = default;
};

struct GraphIR {
  std::string name;
  std::vector<NodeIR> nodes;            // topological order
  std::map<std::string, QTensor> initializers;
  std::vector<ValueSpec> inputs;
  std::vector<ValueSpec> outputs;
  int64_t opset_version = kDefaultOpset;

  friend bool operator==(const GraphIR&, const GraphIR&) = default;
};

enum class Severity { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string node;     // node name, or "" for graph-level findings
  std::string message;
};

// Multidirectional broadcasting over trailing axes.  Returns the result
// shape, or nullopt if the shapes are incompatible.
inline std::optional<std::vector<int64_t>> broadcast_shapes(
    std::span<const int64_t> a, std::span<const int64_t> b) {
  const std::size_t rank = std::max(a.size(), b.size());
  std::vector<int64_t> out(rank, 1);
  for (std::size_t i = 0; i < rank; ++i) {
    const int64_t da = i < rank - a.size() ? 1 : a[i - (rank - a.size())];
    const int64_t db = i < rank - b.size() ? 1 : b[i - (rank - b.size())];
    if (da == db || db == 1) {
      out[i] = da;
    } else if (da == 1) {
      out[i] = db;
    } else {
      return std::nullopt;
    }
  }
  return out;
}

namespace detail {

struct ValueState {
  ElemType dtype;
  std::optional<std::vector<int64_t>> shape;
  bool used = false;
};

inline std::string shape_str(std::span<const int64_t> shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != 0) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

class GraphChecker {
 public:
  explicit GraphChecker(const GraphIR& g) : g_(g) {}

  std::vector<Diagnostic> run() {
    if (g_.opset_version < kMinOpset) {
      error("", "opset " + std::to_string(g_.opset_version) +
                    " is below the minimum supported opset " +
                    std::to_string(kMinOpset));
    }
    if (g_.outputs.empty()) error("", "graph declares no outputs");

    for (const auto& [name, tensor] : g_.initializers) {
      if (name.empty()) {
        error("", "initializer with empty name");
        continue;
      }
      define("", name, tensor.dtype(), tensor.shape());
    }
    for (const auto& input : g_.inputs) {
      if (input.name.empty()) {
        error("", "graph input with empty name");
        continue;
      }
      if (g_.initializers.count(input.name) != 0) {
        error("", "graph input '" + input.name + "' shadows an initializer");
        continue;
      }
      define("", input.name, input.dtype, input.shape);
    }

    for (const auto& node : g_.nodes) check_node(node);

    for (const auto& output : g_.outputs) {
      auto it = values_.find(output.name);
      if (it == values_.end()) {
        error("", "graph output '" + output.name + "' is never produced");
        continue;
      }
      it->second.used = true;
      if (it->second.dtype != output.dtype) {
        error("", "graph output '" + output.name + "' declared " +
                      elem_type_name(output.dtype) + " but computed " +
                      elem_type_name(it->second.dtype));
      }
      if (it->second.shape && *it->second.shape != output.shape) {
        error("", "graph output '" + output.name + "' declared shape " +
                      shape_str(output.shape) + " but computed " +
                      shape_str(*it->second.shape));
      }
    }

    for (const auto& [name, tensor] : g_.initializers) {
      (void)tensor;
      auto it = values_.find(name);
      if (it != values_.end() && !it->second.used) {
        warn("", "initializer '" + name + "' is unused");
      }
    }
    return std::move(diags_);
  }

 private:
  void error(const std::string& node, std::string msg) {
    diags_.push_back({Severity::kError, node, std::move(msg)});
  }
  void warn(const std::string& node, std::string msg) {
    diags_.push_back({Severity::kWarning, node, std::move(msg)});
  }

  void define(const std::string& node, const std::string& name, ElemType dtype,
              std::optional<std::vector<int64_t>> shape) {
    auto [it, inserted] =
        values_.try_emplace(name, ValueState{dtype, std::move(shape)});
    (void)it;
    if (!inserted) {
      error(node, "value '" + name + "' is assigned more than once");
    }
  }

  // Looks up a node input, marking it used.  Emits a diagnostic and returns
  // nullptr when the name is undefined (which also covers uses that appear
  // before the producing node, i.e. topological-order violations).
  const ValueState* use(const NodeIR& node, std::size_t idx) {
    const std::string& name = node.inputs[idx];
    if (name.empty()) {
      error(node.name, "empty input name");
      return nullptr;
    }
    auto it = values_.find(name);
    if (it == values_.end()) {
      error(node.name, "input '" + name +
                           "' is not defined at this point in the graph");
      return nullptr;
    }
    it->second.used = true;
    return &it->second;
  }

  const QTensor* initializer_for(const NodeIR& node, std::size_t idx) {
    auto it = g_.initializers.find(node.inputs[idx]);
    return it == g_.initializers.end() ? nullptr : &it->second;
  }

  bool check_arity(const NodeIR& node, std::size_t in, std::size_t out) {
    bool ok = true;
    if (node.inputs.size() != in) {
      error(node.name, node.op_type + " expects " + std::to_string(in) +
                           " inputs, got " +
                           std::to_string(node.inputs.size()));
      ok = false;
    }
    if (node.outputs.size() != out) {
      error(node.name, node.op_type + " expects " + std::to_string(out) +
                           " outputs, got " +
                           std::to_string(node.outputs.size()));
      ok = false;
    }
    return ok;
  }

  void check_node(const NodeIR& node) {
    if (!is_supported_op(node.op_type)) {
      error(node.name, "unsupported operator '" + node.op_type + "'");
      // Still define outputs so later nodes do not cascade spurious errors.
      for (const auto& out : node.outputs) {
        if (!out.empty()) define(node.name, out, ElemType::kF32, std::nullopt);
      }
      return;
    }

    ElemType out_dtype = ElemType::kF32;
    std::optional<std::vector<int64_t>> out_shape;
    bool ok = false;

    if (node.op_type == "MatMulInteger") {
      ok = check_matmul(node, out_dtype, out_shape);
    } else if (node.op_type == "ConvInteger") {
      ok = check_conv(node, out_dtype, out_shape);
    } else if (node.op_type == "Add" || node.op_type == "Mul") {
      ok = check_binary(node, out_dtype, out_shape);
    } else if (node.op_type == "Cast") {
      ok = check_cast(node, out_dtype, out_shape);
    } else if (node.op_type == "QuantizeLinear") {
      ok = check_quantize_linear(node, out_dtype, out_shape);
    } else {  // Relu, Tanh, Sigmoid
      ok = check_unary(node, out_dtype, out_shape);
    }

    for (const auto& out : node.outputs) {
      if (out.empty()) {
        error(node.name, "empty output name");
        continue;
      }
      define(node.name, out, out_dtype, ok ? out_shape : std::nullopt);
    }
  }

  bool check_matmul(const NodeIR& node, ElemType& out_dtype,
                    std::optional<std::vector<int64_t>>& out_shape) {
    out_dtype = ElemType::kI32;
    if (!check_arity(node, 2, 1)) return false;
    const auto* a = use(node, 0);
    const auto* b = use(node, 1);
    if (a == nullptr || b == nullptr) return false;
    if (a->dtype != ElemType::kI8 && a->dtype != ElemType::kU8) {
      error(node.name, "MatMulInteger left input must be int8/uint8, got " +
                           std::string(elem_type_name(a->dtype)));
      return false;
    }
    if (b->dtype != ElemType::kI8) {
      error(node.name, "MatMulInteger right input must be int8, got " +
                           std::string(elem_type_name(b->dtype)));
      return false;
    }
    if (a->shape && b->shape) {
      const auto& sa = *a->shape;
      const auto& sb = *b->shape;
      if (sa.size() != 2 || sb.size() != 2) {
        error(node.name, "MatMulInteger inputs must be rank 2");
        return false;
      }
      if (sa[1] != sb[0]) {
        error(node.name, "MatMulInteger inner dimensions disagree: " +
                             shape_str(sa) + " x " + shape_str(sb));
        return false;
      }
      out_shape = std::vector<int64_t>{sa[0], sb[1]};
    }
    return true;
  }

  bool check_conv(const NodeIR& node, ElemType& out_dtype,
                  std::optional<std::vector<int64_t>>& out_shape) {
    out_dtype = ElemType::kI32;
    if (!check_arity(node, 2, 1)) return false;
    const auto* x = use(node, 0);
    const auto* w = use(node, 1);
    if (x == nullptr || w == nullptr) return false;
    if (x->dtype != ElemType::kI8 && x->dtype != ElemType::kU8) {
      error(node.name, "ConvInteger input must be int8/uint8");
      return false;
    }
    if (w->dtype != ElemType::kI8) {
      error(node.name, "ConvInteger weights must be int8");
      return false;
    }

    std::vector<int64_t> strides{1, 1};
    std::vector<int64_t> pads{0, 0, 0, 0};
    if (const auto* s = node.ints_attr("strides")) strides = *s;
    if (const auto* p = node.ints_attr("pads")) pads = *p;
    if (strides.size() != 2 || strides[0] < 1 || strides[1] < 1) {
      error(node.name, "ConvInteger strides must be two positive ints");
      return false;
    }
    if (pads.size() != 4 ||
        std::any_of(pads.begin(), pads.end(), [](int64_t p) { return p < 0; })) {
      error(node.name, "ConvInteger pads must be four non-negative ints");
      return false;
    }
    if (const auto* d = node.ints_attr("dilations")) {
      if (std::any_of(d->begin(), d->end(), [](int64_t v) { return v != 1; })) {
        error(node.name, "ConvInteger dilations other than 1 are unsupported");
        return false;
      }
    }
    if (const auto* group = node.int_attr("group")) {
      if (*group != 1) {
        error(node.name, "ConvInteger group other than 1 is unsupported");
        return false;
      }
    }

    if (x->shape && w->shape) {
      const auto& sx = *x->shape;
      const auto& sw = *w->shape;
      if (sx.size() != 4 || sw.size() != 4) {
        error(node.name, "ConvInteger input and weights must be rank 4");
        return false;
      }
      if (sx[1] != sw[1]) {
        error(node.name, "ConvInteger channel mismatch: input " +
                             shape_str(sx) + ", weights " + shape_str(sw));
        return false;
      }
      if (const auto* ks = node.ints_attr("kernel_shape")) {
        if (ks->size() != 2 || (*ks)[0] != sw[2] || (*ks)[1] != sw[3]) {
          error(node.name, "ConvInteger kernel_shape disagrees with weights");
          return false;
        }
      }
      const int64_t oh =
          (sx[2] + pads[0] + pads[2] - sw[2]) / strides[0] + 1;
      const int64_t ow =
          (sx[3] + pads[1] + pads[3] - sw[3]) / strides[1] + 1;
      if (sx[2] + pads[0] + pads[2] < sw[2] ||
          sx[3] + pads[1] + pads[3] < sw[3]) {
        error(node.name, "ConvInteger kernel larger than padded input");
        return false;
      }
      out_shape = std::vector<int64_t>{sx[0], sw[0], oh, ow};
    }
    return true;
  }

  bool check_binary(const NodeIR& node, ElemType& out_dtype,
                    std::optional<std::vector<int64_t>>& out_shape) {
    if (!check_arity(node, 2, 1)) return false;
    const auto* a = use(node, 0);
    const auto* b = use(node, 1);
    if (a == nullptr || b == nullptr) return false;
    if (a->dtype != b->dtype) {
      error(node.name, node.op_type + " input dtypes disagree: " +
                           elem_type_name(a->dtype) + " vs " +
                           elem_type_name(b->dtype));
      return false;
    }
    const bool int_ok = node.op_type == "Add" && a->dtype == ElemType::kI32;
    const bool float_ok =
        a->dtype == ElemType::kF32 || a->dtype == ElemType::kF16;
    if (!int_ok && !float_ok) {
      error(node.name, node.op_type + " does not accept " +
                           std::string(elem_type_name(a->dtype)) +
                           " in the supported subset");
      return false;
    }
    out_dtype = a->dtype;
    if (a->shape && b->shape) {
      auto bc = broadcast_shapes(*a->shape, *b->shape);
      if (!bc) {
        error(node.name, node.op_type + " shapes do not broadcast: " +
                             shape_str(*a->shape) + " vs " +
                             shape_str(*b->shape));
        return false;
      }
      out_shape = std::move(*bc);
    }
    return true;
  }

  bool check_cast(const NodeIR& node, ElemType& out_dtype,
                  std::optional<std::vector<int64_t>>& out_shape) {
    if (!check_arity(node, 1, 1)) return false;
    const auto* x = use(node, 0);
    if (x == nullptr) return false;
    const auto* to = node.int_attr("to");
    if (to == nullptr) {
      error(node.name, "Cast is missing the 'to' attribute");
      return false;
    }
    const auto target = elem_type_from_onnx_code(*to);
    if (!target ||
        (*target != ElemType::kF32 && *target != ElemType::kF16)) {
      error(node.name, "Cast target " + std::to_string(*to) +
                           " is outside the supported subset");
      return false;
    }
    out_dtype = *target;
    out_shape = x->shape;
    return true;
  }

  bool check_quantize_linear(const NodeIR& node, ElemType& out_dtype,
                             std::optional<std::vector<int64_t>>& out_shape) {
    out_dtype = ElemType::kI8;
    if (!check_arity(node, 3, 1)) return false;
    const auto* x = use(node, 0);
    const auto* scale = use(node, 1);
    const auto* zp = use(node, 2);
    if (x == nullptr || scale == nullptr || zp == nullptr) return false;
    if (x->dtype != ElemType::kF32 && x->dtype != ElemType::kF16) {
      error(node.name, "QuantizeLinear input must be float32/float16");
      return false;
    }
    bool ok = true;
    const QTensor* scale_init = initializer_for(node, 1);
    if (scale_init == nullptr || scale_init->dtype() != ElemType::kF32 ||
        scale_init->element_count() != 1) {
      error(node.name,
            "QuantizeLinear scale must be a float32 scalar initializer");
      ok = false;
    } else {
      const float s = scale_init->f32()[0];
      if (!(s > 0.0f) || !std::isfinite(s)) {
        error(node.name, "QuantizeLinear scale must be positive and finite");
        ok = false;
      }
    }
    const QTensor* zp_init = initializer_for(node, 2);
    if (zp_init == nullptr || zp_init->element_count() != 1 ||
        (zp_init->dtype() != ElemType::kI8 &&
         zp_init->dtype() != ElemType::kU8)) {
      error(node.name,
            "QuantizeLinear zero point must be an int8/uint8 scalar "
            "initializer");
      ok = false;
    } else {
      const int zp_value = zp_init->dtype() == ElemType::kI8
                               ? zp_init->i8()[0]
                               : static_cast<int>(zp_init->u8()[0]);
      if (zp_value != 0) {
        error(node.name,
              "QuantizeLinear zero point must be 0 (symmetric quantization "
              "only)");
        ok = false;
      }
      out_dtype = zp_init->dtype();
    }
    out_shape = x->shape;
    return ok;
  }

  bool check_unary(const NodeIR& node, ElemType& out_dtype,
                   std::optional<std::vector<int64_t>>& out_shape) {
    if (!check_arity(node, 1, 1)) return false;
    const auto* x = use(node, 0);
    if (x == nullptr) return false;
    if (node.op_type != "Relu" && x->dtype != ElemType::kF32 &&
        x->dtype != ElemType::kF16) {
      error(node.name,
            node.op_type + " input must be float32/float16 in the supported "
                           "subset");
      return false;
    }
    out_dtype = x->dtype;
    out_shape = x->shape;
    return true;
  }

  const GraphIR& g_;
  std::map<std::string, ValueState> values_;
  std::vector<Diagnostic> diags_;
};

}  // namespace detail

// Full structural validation: closed operator set, dtype flow, arities,
// attribute legality, topological order, single assignment, declared
// inputs/outputs, symmetric quantization parameters.
inline std::vector<Diagnostic> validate(const GraphIR& g) {
  return detail::GraphChecker(g).run();
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::kError;
  });
}

// Throws on the first validation error.  Unsupported operators get their own
// error code so callers can report the offending ops distinctly.
inline void require_valid(const GraphIR& g) {
  const auto diags = validate(g);
  std::vector<std::string> unsupported;
  std::ostringstream os;
  bool any = false;
  for (const auto& d : diags) {
    if (d.severity != Severity::kError) continue;
    if (any) os << "; ";
    if (!d.node.empty()) os << d.node << ": ";
    os << d.message;
    any = true;
    const std::string prefix = "unsupported operator";
    if (d.message.compare(0, prefix.size(), prefix) == 0) {
      unsupported.push_back(d.message);
    }
  }
  if (!any) return;
  throw Error(unsupported.empty() ? ErrorCode::kValidation
                                  : ErrorCode::kUnsupportedOp,
              "graph validation failed: " + os.str());
}

}  // namespace pq

#endif  // PREQUANT_GRAPH_HPP_
