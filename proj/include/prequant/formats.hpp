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
#ifndef PREQUANT_FORMATS_HPP_
#define PREQUANT_FORMATS_HPP_

// JSON document formats for everything that crosses the tool boundary:
// tensors, float models, calibration profiles, hardware descriptors, and
// reports.  Numbers are emitted with shortest-round-trip formatting, and
// (nlohmann) JSON objects keep their keys sorted, so document output is
// deterministic.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prequant/compare.hpp"
#include "prequant/error.hpp"
#include "prequant/float_model.hpp"
#include "prequant/fp16.hpp"
#include "prequant/interp.hpp"
#include "prequant/patterns.hpp"
#include "prequant/quantizer.hpp"
#include "prequant/tensor.hpp"

namespace pq {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// File helpers

inline std::string read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::kIo, "read error on '" + path + "'");
  }
  return std::move(buf).str();
}

inline void write_binary_file(const std::string& path,
                              std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIo, "write error on '" + path + "'");
  }
}

inline Json read_json_file(const std::string& path) {
  const std::string text = read_binary_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kDocument,
                "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  write_binary_file(path, j.dump(2) + "\n");
}

namespace fmt_detail {

inline const Json& field(const Json& j, const char* key,
                         const char* context) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kDocument,
                std::string(context) + " is missing the '" + key + "' field");
  }
  return *it;
}

template <typename T>
T number(const Json& j, const char* what) {
  if (!j.is_number()) {
    throw Error(ErrorCode::kDocument,
                std::string(what) + " must be a number");
  }
  return j.get<T>();
}

inline std::vector<int64_t> int_list(const Json& j, const char* what) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kDocument,
                std::string(what) + " must be an array of integers");
  }
  std::vector<int64_t> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::kDocument,
                  std::string(what) + " must contain only integers");
    }
    out.push_back(v.get<int64_t>());
  }
  return out;
}

inline std::string str(const Json& j, const char* what) {
  if (!j.is_string()) {
    throw Error(ErrorCode::kDocument,
                std::string(what) + " must be a string");
  }
  return j.get<std::string>();
}

}  // namespace fmt_detail

// ---------------------------------------------------------------------------
// Tensor documents: {"name"?, "dtype", "shape", "data"} with flat row-major
// data.  Float payloads are stored as decimal numbers (float16 widened to
// its exact decimal value and re-rounded on load).

inline Json tensor_to_json(const QTensor& t, const std::string& name = "") {
  Json j;
  if (!name.empty()) j["name"] = name;
  j["dtype"] = elem_type_name(t.dtype());
  j["shape"] = t.shape();
  Json data = Json::array();
  const auto n = static_cast<std::size_t>(t.element_count());
  switch (t.dtype()) {
    case ElemType::kI8:
      for (std::size_t i = 0; i < n; ++i) data.push_back(t.i8()[i]);
      break;
    case ElemType::kU8:
      for (std::size_t i = 0; i < n; ++i) data.push_back(t.u8()[i]);
      break;
    case ElemType::kI32:
      for (std::size_t i = 0; i < n; ++i) data.push_back(t.i32()[i]);
      break;
    case ElemType::kF32:
      for (std::size_t i = 0; i < n; ++i) {
        data.push_back(static_cast<double>(t.f32()[i]));
      }
      break;
    case ElemType::kF16:
      for (std::size_t i = 0; i < n; ++i) {
        data.push_back(static_cast<double>(from_fp16_bits(t.f16_bits()[i])));
      }
      break;
  }
  j["data"] = std::move(data);
  return j;
}

inline QTensor tensor_from_json(
    const Json& j, std::optional<ElemType> forced_dtype = std::nullopt) {
  using fmt_detail::field;
  if (!j.is_object()) {
    throw Error(ErrorCode::kDocument, "tensor document must be an object");
  }
  ElemType dtype;
  if (forced_dtype) {
    dtype = *forced_dtype;
  } else {
    const std::string name =
        fmt_detail::str(field(j, "dtype", "tensor document"), "dtype");
    const auto parsed = elem_type_from_name(name);
    if (!parsed) {
      throw Error(ErrorCode::kDocument, "unknown dtype '" + name + "'");
    }
    dtype = *parsed;
  }
  auto shape = fmt_detail::int_list(field(j, "shape", "tensor document"),
                                    "tensor shape");
  for (int64_t extent : shape) {
    if (extent < 0) {
      throw Error(ErrorCode::kDocument, "tensor shape must be non-negative");
    }
  }
  const Json& data = field(j, "data", "tensor document");
  if (!data.is_array()) {
    throw Error(ErrorCode::kDocument, "tensor data must be an array");
  }
  QTensor t(dtype, std::move(shape));
  if (static_cast<int64_t>(data.size()) != t.element_count()) {
    throw Error(ErrorCode::kDocument,
                "tensor data length " + std::to_string(data.size()) +
                    " does not match the shape (" +
                    std::to_string(t.element_count()) + " elements)");
  }
  const auto n = static_cast<std::size_t>(t.element_count());
  auto int_at = [&data](std::size_t i, int64_t lo, int64_t hi) {
    const Json& v = data[i];
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::kDocument,
                  "integer tensor data must contain only integers");
    }
    const int64_t value = v.get<int64_t>();
    if (value < lo || value > hi) {
      throw Error(ErrorCode::kDocument,
                  "tensor value " + std::to_string(value) +
                      " is outside the dtype range");
    }
    return value;
  };
  switch (dtype) {
    case ElemType::kI8:
      for (std::size_t i = 0; i < n; ++i) {
        t.i8()[i] = static_cast<std::int8_t>(int_at(i, -128, 127));
      }
      break;
    case ElemType::kU8:
      for (std::size_t i = 0; i < n; ++i) {
        t.u8()[i] = static_cast<std::uint8_t>(int_at(i, 0, 255));
      }
      break;
    case ElemType::kI32:
      for (std::size_t i = 0; i < n; ++i) {
        t.i32()[i] = static_cast<std::int32_t>(
            int_at(i, std::numeric_limits<std::int32_t>::min(),
                   std::numeric_limits<std::int32_t>::max()));
      }
      break;
    case ElemType::kF32:
      for (std::size_t i = 0; i < n; ++i) {
        t.f32()[i] = static_cast<float>(
            fmt_detail::number<double>(data[i], "tensor value"));
      }
      break;
    case ElemType::kF16:
      for (std::size_t i = 0; i < n; ++i) {
        t.f16_bits()[i] = to_fp16_bits(static_cast<float>(
            fmt_detail::number<double>(data[i], "tensor value")));
      }
      break;
  }
  return t;
}

struct NamedTensor {
  std::string name;
  QTensor tensor;
};

inline NamedTensor named_tensor_from_json(const Json& j) {
  NamedTensor nt;
  if (j.contains("name")) {
    nt.name = fmt_detail::str(j["name"], "tensor name");
  }
  nt.tensor = tensor_from_json(j);
  return nt;
}

// A tensor file is one tensor document, an array of them, or an object with
// a "tensors" array.
inline std::vector<NamedTensor> load_tensor_file(const std::string& path) {
  const Json j = read_json_file(path);
  std::vector<NamedTensor> out;
  try {
    if (j.is_array()) {
      for (const auto& item : j) out.push_back(named_tensor_from_json(item));
    } else if (j.is_object() && j.contains("tensors")) {
      for (const auto& item : j["tensors"]) {
        out.push_back(named_tensor_from_json(item));
      }
    } else {
      out.push_back(named_tensor_from_json(j));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kDocument,
                "'" + path + "': malformed tensor document: " + e.what());
  }
  if (out.empty()) {
    throw Error(ErrorCode::kDocument, "'" + path + "' contains no tensors");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Float model documents

inline Json model_to_json(const FloatModelSpec& model) {
  Json j;
  j["name"] = model.name;
  j["input"] = Json{{"name", model.input_name},
                    {"shape", model.input_shape}};
  Json layers = Json::array();
  for (const auto& layer : model.layers) {
    Json l;
    l["name"] = layer.name;
    l["kind"] = layer_kind_name(layer.kind);
    l["activation"] = activation_kind_name(layer.activation);
    Json w = tensor_to_json(layer.weights);
    w.erase("dtype");
    Json b = tensor_to_json(layer.bias);
    b.erase("dtype");
    l["weights"] = std::move(w);
    l["bias"] = std::move(b);
    if (layer.kind == LayerKind::kConv2d) {
      l["strides"] = layer.strides;
      l["pads"] = layer.pads;
    }
    if (layer.activation == ActivationKind::kTanhI8) {
      l["tanh_input_bound"] = static_cast<double>(layer.tanh_input_bound);
    }
    if (layer.y_scale) {
      l["y_scale"] = static_cast<double>(*layer.y_scale);
    }
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  return j;
}

inline FloatModelSpec model_from_json(const Json& j) {
  using fmt_detail::field;
  if (!j.is_object()) {
    throw Error(ErrorCode::kDocument, "model document must be an object");
  }
  FloatModelSpec model;
  if (j.contains("name")) model.name = fmt_detail::str(j["name"], "model name");
  const Json& input = field(j, "input", "model document");
  if (input.contains("name")) {
    model.input_name = fmt_detail::str(input["name"], "input name");
  }
  model.input_shape =
      fmt_detail::int_list(field(input, "shape", "model input"),
                           "model input shape");
  const Json& layers = field(j, "layers", "model document");
  if (!layers.is_array() || layers.empty()) {
    throw Error(ErrorCode::kDocument,
                "model document needs a non-empty 'layers' array");
  }
  for (const auto& l : layers) {
    FloatLayer layer;
    layer.name = fmt_detail::str(field(l, "name", "model layer"), "layer name");
    const std::string kind =
        fmt_detail::str(field(l, "kind", "model layer"), "layer kind");
    const auto parsed_kind = layer_kind_from_name(kind);
    if (!parsed_kind) {
      throw Error(ErrorCode::kDocument, "unknown layer kind '" + kind + "'");
    }
    layer.kind = *parsed_kind;
    if (l.contains("activation")) {
      const std::string act = fmt_detail::str(l["activation"], "activation");
      const auto parsed_act = activation_kind_from_name(act);
      if (!parsed_act) {
        throw Error(ErrorCode::kDocument, "unknown activation '" + act + "'");
      }
      layer.activation = *parsed_act;
    }
    layer.weights = tensor_from_json(field(l, "weights", "model layer"),
                                     ElemType::kF32);
    layer.bias =
        tensor_from_json(field(l, "bias", "model layer"), ElemType::kF32);
    if (l.contains("strides")) {
      layer.strides = fmt_detail::int_list(l["strides"], "strides");
    }
    if (l.contains("pads")) {
      layer.pads = fmt_detail::int_list(l["pads"], "pads");
    }
    if (l.contains("tanh_input_bound")) {
      layer.tanh_input_bound = static_cast<float>(
          fmt_detail::number<double>(l["tanh_input_bound"],
                                     "tanh_input_bound"));
    }
    if (l.contains("y_scale")) {
      layer.y_scale = static_cast<float>(
          fmt_detail::number<double>(l["y_scale"], "y_scale"));
    }
    model.layers.push_back(std::move(layer));
  }
  check_model(model);
  return model;
}

inline FloatModelSpec load_model_file(const std::string& path) {
  return model_from_json(read_json_file(path));
}

// ---------------------------------------------------------------------------
// Calibration profile documents

inline Json profile_to_json(const CalibrationProfile& profile) {
  Json abs_max = Json::object();
  for (const auto& [key, value] : profile.abs_max) {
    abs_max[key] = static_cast<double>(value);
  }
  return Json{{"abs_max", std::move(abs_max)}};
}

inline CalibrationProfile profile_from_json(const Json& j) {
  const Json& abs_max = fmt_detail::field(j, "abs_max", "calibration profile");
  if (!abs_max.is_object()) {
    throw Error(ErrorCode::kDocument, "'abs_max' must be an object");
  }
  CalibrationProfile profile;
  for (const auto& [key, value] : abs_max.items()) {
    profile.abs_max[key] = static_cast<float>(
        fmt_detail::number<double>(value, "abs_max entry"));
  }
  return profile;
}

// ---------------------------------------------------------------------------
// Digests (FNV-1a over the payload bytes, for quick descriptor diffing)

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (std::uint8_t b : bytes) {
    hash ^= b;
    hash *= 1099511628211ull;
  }
  return hash;
}

inline std::string tensor_digest(const QTensor& t) {
  const auto bytes = t.raw_bytes();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

// ---------------------------------------------------------------------------
// Hardware descriptor documents

inline Json descriptor_to_json(const HwLayerDescriptor& d) {
  Json j;
  j["name"] = d.name;
  j["kind"] = layer_kind_name(d.kind);
  j["codification"] = codification_name(d.codification);
  j["weights"] = tensor_to_json(d.weights);
  j["weights_digest"] = tensor_digest(d.weights);
  j["bias"] = tensor_to_json(d.bias);
  j["bias_digest"] = tensor_digest(d.bias);
  j["rescale"] = Json{{"multiplier", static_cast<double>(d.rescale.multiplier)},
                      {"quant_scale", d.rescale.quant_scale},
                      {"shift_bits", d.rescale.shift_bits}};
  Json act;
  act["kind"] = activation_kind_name(d.activation.kind());
  if (d.activation.kind() == ActivationKind::kTanhI8) {
    act["x_step"] = static_cast<double>(d.activation.x_step());
    act["input_bound"] = static_cast<double>(d.activation.input_bound());
    const auto lut =
        tanh_i8_lut(d.activation.x_step(), d.activation.y_scale());
    act["lut"] = std::vector<int>(lut.begin(), lut.end());
  }
  if (d.activation.has_params()) {
    act["y_scale"] = static_cast<double>(d.activation.y_scale().value());
  }
  j["activation"] = std::move(act);
  if (d.kind == LayerKind::kConv2d) {
    j["strides"] = d.strides;
    j["pads"] = d.pads;
  }
  return j;
}

inline HwLayerDescriptor descriptor_from_json(const Json& j) {
  using fmt_detail::field;
  HwLayerDescriptor d;
  d.name = fmt_detail::str(field(j, "name", "descriptor"), "descriptor name");
  const std::string kind =
      fmt_detail::str(field(j, "kind", "descriptor"), "descriptor kind");
  const auto parsed_kind = layer_kind_from_name(kind);
  if (!parsed_kind) {
    throw Error(ErrorCode::kDocument, "unknown layer kind '" + kind + "'");
  }
  d.kind = *parsed_kind;
  const std::string codif = fmt_detail::str(
      field(j, "codification", "descriptor"), "codification");
  const auto parsed_codif = codification_from_name(codif);
  if (!parsed_codif) {
    throw Error(ErrorCode::kDocument,
                "unknown codification '" + codif + "'");
  }
  d.codification = *parsed_codif;
  d.weights = tensor_from_json(field(j, "weights", "descriptor"));
  d.bias = tensor_from_json(field(j, "bias", "descriptor"));

  const Json& rescale = field(j, "rescale", "descriptor");
  const bool has_pair =
      rescale.contains("quant_scale") && rescale.contains("shift_bits");
  const bool has_mult = rescale.contains("multiplier");
  if (has_pair) {
    d.rescale.quant_scale = static_cast<std::uint32_t>(
        fmt_detail::number<std::uint64_t>(rescale["quant_scale"],
                                          "quant_scale"));
    d.rescale.shift_bits = static_cast<std::uint32_t>(
        fmt_detail::number<std::uint64_t>(rescale["shift_bits"],
                                          "shift_bits"));
    d.rescale.multiplier =
        has_mult ? static_cast<float>(fmt_detail::number<double>(
                       rescale["multiplier"], "multiplier"))
                 : static_cast<float>(
                       std::ldexp(static_cast<double>(d.rescale.quant_scale),
                                  -static_cast<int>(d.rescale.shift_bits)));
  } else if (has_mult) {
    const auto m = fmt_detail::number<double>(rescale["multiplier"],
                                              "multiplier");
    d.rescale = decompose_rescale(m);
  } else {
    throw Error(ErrorCode::kDocument,
                "descriptor rescale needs either a multiplier or a "
                "quant_scale/shift_bits pair");
  }

  const Json& act = field(j, "activation", "descriptor");
  const std::string act_kind =
      fmt_detail::str(field(act, "kind", "activation"), "activation kind");
  const auto parsed_act = activation_kind_from_name(act_kind);
  if (!parsed_act) {
    throw Error(ErrorCode::kDocument,
                "unknown activation '" + act_kind + "'");
  }
  auto y_scale = [&act]() {
    return Scale(static_cast<float>(fmt_detail::number<double>(
        fmt_detail::field(act, "y_scale", "activation"), "y_scale")));
  };
  switch (*parsed_act) {
    case ActivationKind::kNone:
      d.activation = ActivationSpec::none();
      break;
    case ActivationKind::kRelu:
      d.activation = ActivationSpec::relu();
      break;
    case ActivationKind::kTanhI8: {
      if (act.contains("x_step")) {
        d.activation = ActivationSpec::tanh_i8_from_step(
            static_cast<float>(
                fmt_detail::number<double>(act["x_step"], "x_step")),
            y_scale());
      } else {
        d.activation = ActivationSpec::tanh_i8(
            static_cast<float>(fmt_detail::number<double>(
                fmt_detail::field(act, "input_bound", "activation"),
                "input_bound")),
            y_scale());
      }
      break;
    }
    case ActivationKind::kTanhF16:
      d.activation = ActivationSpec::tanh_f16(y_scale());
      break;
    case ActivationKind::kSigmoidF16:
      d.activation = ActivationSpec::sigmoid_f16(y_scale());
      break;
  }
  if (j.contains("strides")) {
    d.strides = fmt_detail::int_list(j["strides"], "strides");
  }
  if (j.contains("pads")) d.pads = fmt_detail::int_list(j["pads"], "pads");
  check_descriptor(d);
  return d;
}

struct DescriptorDoc {
  std::string model;
  ModelInput input;
  std::vector<HwLayerDescriptor> layers;
};

inline Json descriptors_to_json(const std::string& model_name,
                                const ModelInput& input,
                                std::span<const HwLayerDescriptor> layers) {
  Json j;
  j["model"] = model_name;
  j["input"] = Json{{"name", input.name},
                    {"dtype", elem_type_name(input.dtype)},
                    {"shape", input.shape}};
  Json larr = Json::array();
  for (const auto& d : layers) larr.push_back(descriptor_to_json(d));
  j["layers"] = std::move(larr);
  return j;
}

inline DescriptorDoc descriptors_from_json(const Json& j) {
  using fmt_detail::field;
  DescriptorDoc doc;
  if (j.contains("model")) {
    doc.model = fmt_detail::str(j["model"], "model name");
  }
  const Json& input = field(j, "input", "descriptor document");
  doc.input.name =
      fmt_detail::str(field(input, "name", "descriptor input"), "input name");
  const std::string dtype = fmt_detail::str(
      field(input, "dtype", "descriptor input"), "input dtype");
  const auto parsed = elem_type_from_name(dtype);
  if (!parsed || (*parsed != ElemType::kI8 && *parsed != ElemType::kU8)) {
    throw Error(ErrorCode::kDocument,
                "descriptor input dtype must be int8 or uint8");
  }
  doc.input.dtype = *parsed;
  doc.input.shape = fmt_detail::int_list(
      field(input, "shape", "descriptor input"), "input shape");
  const Json& layers = field(j, "layers", "descriptor document");
  if (!layers.is_array() || layers.empty()) {
    throw Error(ErrorCode::kDocument,
                "descriptor document needs a non-empty 'layers' array");
  }
  for (const auto& l : layers) doc.layers.push_back(descriptor_from_json(l));
  return doc;
}

// ---------------------------------------------------------------------------
// Reports

inline Json quant_report_to_json(const QuantReport& report) {
  Json j;
  j["model"] = report.model;
  j["codification"] = report.codification;
  j["input_scale"] = static_cast<double>(report.input_scale);
  j["output_scale"] = static_cast<double>(report.output_scale);
  Json layers = Json::array();
  for (const auto& l : report.layers) {
    Json lj;
    lj["name"] = l.name;
    lj["scale_w"] = static_cast<double>(l.scale_w);
    lj["scale_x"] = static_cast<double>(l.scale_x);
    if (l.scale_y) lj["scale_y"] = static_cast<double>(*l.scale_y);
    if (l.y_scale) lj["y_scale"] = static_cast<double>(*l.y_scale);
    lj["multiplier"] = static_cast<double>(l.multiplier);
    lj["quant_scale"] = l.quant_scale;
    lj["shift_bits"] = l.shift_bits;
    lj["bias_saturated"] = l.bias_saturated;
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  return j;
}

inline Json error_report_to_json(const ErrorReport& report) {
  Json j;
  j["sample_count"] = report.sample_count;
  j["element_count"] = report.element_count;
  j["output_scale"] = report.output_scale;
  j["max_abs_error"] = report.max_abs_error;
  j["mean_abs_error"] = report.mean_abs_error;
  j["max_error_steps"] = report.max_error_steps;
  if (std::isfinite(report.sqnr_db)) {
    j["sqnr_db"] = report.sqnr_db;
  } else {
    j["sqnr_db"] = report.sqnr_db > 0 ? "inf" : "-inf";
  }
  j["quantize_saturation_count"] = report.quantize_saturation_count;
  j["inexact_cast_count"] = report.inexact_cast_count;
  return j;
}

}  // namespace pq

#endif  // PREQUANT_FORMATS_HPP_
