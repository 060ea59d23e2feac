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
#ifndef PREQUANT_ONNX_IO_HPP_
#define PREQUANT_ONNX_IO_HPP_

// Serialization of GraphIR to ONNX ModelProto bytes and back.  The protobuf
// wire codec is hand-rolled for the handful of message types the subset
// needs; field numbers follow the onnx.proto3 schema.  Serialization is
// deterministic: fields are emitted in ascending field-number order,
// repeated scalar fields are packed, and initializers come out in map
// (name-sorted) order, so equal graphs produce identical bytes.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "prequant/error.hpp"
#include "prequant/graph.hpp"
#include "prequant/tensor.hpp"

namespace pq {
namespace wire {

enum WireType : std::uint32_t {
  kVarint = 0,
  kFixed64 = 1,
  kLengthDelimited = 2,
  kFixed32 = 5,
};

class Writer {
 public:
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      out_.push_back(static_cast<char>((v & 0x7f) | 0x80));
      v >>= 7;
    }
    out_.push_back(static_cast<char>(v));
  }

  void tag(std::uint32_t field, WireType type) {
    varint((static_cast<std::uint64_t>(field) << 3) | type);
  }

  void field_varint(std::uint32_t field, std::uint64_t value) {
    tag(field, kVarint);
    varint(value);
  }

  void field_int64(std::uint32_t field, int64_t value) {
    field_varint(field, static_cast<std::uint64_t>(value));
  }

  void field_bytes(std::uint32_t field, std::string_view bytes) {
    tag(field, kLengthDelimited);
    varint(bytes.size());
    out_.append(bytes.data(), bytes.size());
  }

  void field_fixed32(std::uint32_t field, std::uint32_t value) {
    tag(field, kFixed32);
    for (int b = 0; b < 4; ++b) {
      out_.push_back(static_cast<char>((value >> (8 * b)) & 0xffu));
    }
  }

  void field_packed_int64(std::uint32_t field, std::span<const int64_t> vs) {
    if (vs.empty()) return;
    Writer payload;
    for (int64_t v : vs) payload.varint(static_cast<std::uint64_t>(v));
    field_bytes(field, payload.str());
  }

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> buf, std::size_t base_offset = 0)
      : buf_(buf), base_(base_offset) {}

  bool at_end() const { return pos_ >= buf_.size(); }
  std::size_t offset() const { return base_ + pos_; }

  std::uint64_t read_varint() {
    std::uint64_t value = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      if (pos_ >= buf_.size()) fail("truncated varint");
      const std::uint8_t byte = buf_[pos_++];
      value |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
      if ((byte & 0x80) == 0) return value;
    }
    fail("varint longer than 10 bytes");
  }

  // Returns {field_number, wire_type}.
  std::pair<std::uint32_t, std::uint32_t> read_tag() {
    const std::uint64_t key = read_varint();
    const auto field = static_cast<std::uint32_t>(key >> 3);
    const auto type = static_cast<std::uint32_t>(key & 0x7);
    if (field == 0) fail("field number 0");
    return {field, type};
  }

  std::span<const std::uint8_t> read_bytes() {
    const std::uint64_t len = read_varint();
    if (len > buf_.size() - pos_) fail("length-delimited field overruns buffer");
    auto out = buf_.subspan(pos_, len);
    pos_ += len;
    return out;
  }

  Reader message_reader() {
    const std::size_t at = offset();
    auto bytes = read_bytes();
    return Reader(bytes, at + (offset() - at - bytes.size()));
  }

  std::uint32_t read_fixed32() {
    if (buf_.size() - pos_ < 4) fail("truncated fixed32");
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
      v |= static_cast<std::uint32_t>(buf_[pos_++]) << (8 * b);
    }
    return v;
  }

  std::uint64_t read_fixed64() {
    if (buf_.size() - pos_ < 8) fail("truncated fixed64");
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
      v |= static_cast<std::uint64_t>(buf_[pos_++]) << (8 * b);
    }
    return v;
  }

  void skip(std::uint32_t wire_type) {
    switch (wire_type) {
      case kVarint: read_varint(); break;
      case kFixed64: read_fixed64(); break;
      case kLengthDelimited: read_bytes(); break;
      case kFixed32: read_fixed32(); break;
      default: fail("unsupported wire type " + std::to_string(wire_type));
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kWire,
                "malformed model: " + what + " at byte offset " +
                    std::to_string(offset()));
  }

 private:
  std::span<const std::uint8_t> buf_;
  std::size_t pos_ = 0;
  std::size_t base_ = 0;
};

}  // namespace wire

namespace onnx_detail {

// onnx.proto3 field numbers, limited to what the subset touches.
namespace fn {
// ModelProto
inline constexpr std::uint32_t kModelIrVersion = 1;
inline constexpr std::uint32_t kModelGraph = 7;
inline constexpr std::uint32_t kModelOpsetImport = 8;
// OperatorSetIdProto
inline constexpr std::uint32_t kOpsetDomain = 1;
inline constexpr std::uint32_t kOpsetVersion = 2;
// GraphProto
inline constexpr std::uint32_t kGraphNode = 1;
inline constexpr std::uint32_t kGraphName = 2;
inline constexpr std::uint32_t kGraphInitializer = 5;
inline constexpr std::uint32_t kGraphInput = 11;
inline constexpr std::uint32_t kGraphOutput = 12;
// NodeProto
inline constexpr std::uint32_t kNodeInput = 1;
inline constexpr std::uint32_t kNodeOutput = 2;
inline constexpr std::uint32_t kNodeName = 3;
inline constexpr std::uint32_t kNodeOpType = 4;
inline constexpr std::uint32_t kNodeAttribute = 5;
inline constexpr std::uint32_t kNodeDomain = 7;
// AttributeProto
inline constexpr std::uint32_t kAttrName = 1;
inline constexpr std::uint32_t kAttrF = 2;
inline constexpr std::uint32_t kAttrI = 3;
inline constexpr std::uint32_t kAttrT = 5;
inline constexpr std::uint32_t kAttrInts = 8;
inline constexpr std::uint32_t kAttrType = 20;
// TensorProto
inline constexpr std::uint32_t kTensorDims = 1;
inline constexpr std::uint32_t kTensorDataType = 2;
inline constexpr std::uint32_t kTensorFloatData = 4;
inline constexpr std::uint32_t kTensorInt32Data = 5;
inline constexpr std::uint32_t kTensorInt64Data = 7;
inline constexpr std::uint32_t kTensorName = 8;
inline constexpr std::uint32_t kTensorRawData = 9;
// ValueInfoProto
inline constexpr std::uint32_t kValueInfoName = 1;
inline constexpr std::uint32_t kValueInfoType = 2;
// TypeProto / TypeProto.Tensor / TensorShapeProto / Dimension
inline constexpr std::uint32_t kTypeTensorType = 1;
inline constexpr std::uint32_t kTensorTypeElemType = 1;
inline constexpr std::uint32_t kTensorTypeShape = 2;
inline constexpr std::uint32_t kShapeDim = 1;
inline constexpr std::uint32_t kDimValue = 1;
inline constexpr std::uint32_t kDimParam = 2;
}  // namespace fn

// AttributeProto.AttributeType values.
inline constexpr int64_t kAttrTypeFloat = 1;
inline constexpr int64_t kAttrTypeInt = 2;
inline constexpr int64_t kAttrTypeTensor = 4;
inline constexpr int64_t kAttrTypeInts = 7;

inline std::string serialize_tensor(const std::string& name,
                                    const QTensor& t) {
  wire::Writer w;
  w.field_packed_int64(fn::kTensorDims, t.shape());
  w.field_int64(fn::kTensorDataType, onnx_dtype_code(t.dtype()));
  w.field_bytes(fn::kTensorName, name);
  const auto bytes = t.raw_bytes();
  if (!bytes.empty()) {
    w.field_bytes(fn::kTensorRawData,
                  std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                   bytes.size()));
  }
  return w.take();
}

inline std::string serialize_value_info(const ValueSpec& v) {
  wire::Writer shape;
  for (int64_t extent : v.shape) {
    wire::Writer dim;
    dim.field_int64(fn::kDimValue, extent);
    shape.field_bytes(fn::kShapeDim, dim.str());
  }
  wire::Writer tensor_type;
  tensor_type.field_int64(fn::kTensorTypeElemType, onnx_dtype_code(v.dtype));
  // An empty shape message still gets emitted: it distinguishes a rank-0
  // scalar from an unknown shape.
  tensor_type.field_bytes(fn::kTensorTypeShape, shape.str());
  wire::Writer type;
  type.field_bytes(fn::kTypeTensorType, tensor_type.str());
  wire::Writer w;
  w.field_bytes(fn::kValueInfoName, v.name);
  w.field_bytes(fn::kValueInfoType, type.str());
  return w.take();
}

inline std::string serialize_attribute(const std::string& name,
                                       const AttrValue& value) {
  wire::Writer w;
  w.field_bytes(fn::kAttrName, name);
  if (const auto* f = std::get_if<float>(&value)) {
    w.field_fixed32(fn::kAttrF, std::bit_cast<std::uint32_t>(*f));
    w.field_int64(fn::kAttrType, kAttrTypeFloat);
  } else if (const auto* i = std::get_if<int64_t>(&value)) {
    w.field_int64(fn::kAttrI, *i);
    w.field_int64(fn::kAttrType, kAttrTypeInt);
  } else if (const auto* ints = std::get_if<std::vector<int64_t>>(&value)) {
    w.field_packed_int64(fn::kAttrInts, *ints);
    w.field_int64(fn::kAttrType, kAttrTypeInts);
  } else {
    const auto& t = std::get<QTensor>(value);
    w.field_bytes(fn::kAttrT, serialize_tensor(name, t));
    w.field_int64(fn::kAttrType, kAttrTypeTensor);
  }
  return w.take();
}

inline std::string serialize_node(const NodeIR& node) {
  wire::Writer w;
  for (const auto& in : node.inputs) w.field_bytes(fn::kNodeInput, in);
  for (const auto& out : node.outputs) w.field_bytes(fn::kNodeOutput, out);
  w.field_bytes(fn::kNodeName, node.name);
  w.field_bytes(fn::kNodeOpType, node.op_type);
  for (const auto& [name, value] : node.attributes) {
    w.field_bytes(fn::kNodeAttribute, serialize_attribute(name, value));
  }
  return w.take();
}

}  // namespace onnx_detail

// GraphIR -> ONNX ModelProto bytes.  The graph must validate cleanly.
inline std::string serialize(const GraphIR& g) {
  require_valid(g);

  wire::Writer graph;
  for (const auto& node : g.nodes) {
    graph.field_bytes(onnx_detail::fn::kGraphNode,
                      onnx_detail::serialize_node(node));
  }
  if (!g.name.empty()) {
    graph.field_bytes(onnx_detail::fn::kGraphName, g.name);
  }
  for (const auto& [name, tensor] : g.initializers) {
    graph.field_bytes(onnx_detail::fn::kGraphInitializer,
                      onnx_detail::serialize_tensor(name, tensor));
  }
  for (const auto& input : g.inputs) {
    graph.field_bytes(onnx_detail::fn::kGraphInput,
                      onnx_detail::serialize_value_info(input));
  }
  for (const auto& output : g.outputs) {
    graph.field_bytes(onnx_detail::fn::kGraphOutput,
                      onnx_detail::serialize_value_info(output));
  }

  wire::Writer opset;
  opset.field_int64(onnx_detail::fn::kOpsetVersion, g.opset_version);

  wire::Writer model;
  model.field_int64(onnx_detail::fn::kModelIrVersion, kIrVersion);
  model.field_bytes(onnx_detail::fn::kModelGraph, graph.str());
  model.field_bytes(onnx_detail::fn::kModelOpsetImport, opset.str());
  return model.take();
}

namespace onnx_detail {

inline std::string to_string(std::span<const std::uint8_t> bytes) {
  return std::string(reinterpret_cast<const char*>(bytes.data()),
                     bytes.size());
}

// Reads a repeated int64 field that may arrive packed or one-at-a-time.
inline void read_repeated_int64(wire::Reader& r, std::uint32_t wire_type,
                                std::vector<int64_t>& out) {
  if (wire_type == wire::kLengthDelimited) {
    wire::Reader packed = r.message_reader();
    while (!packed.at_end()) {
      out.push_back(static_cast<int64_t>(packed.read_varint()));
    }
  } else if (wire_type == wire::kVarint) {
    out.push_back(static_cast<int64_t>(r.read_varint()));
  } else {
    r.fail("unexpected wire type for repeated int64");
  }
}

inline std::pair<std::string, QTensor> parse_tensor(wire::Reader r) {
  std::string name;
  std::vector<int64_t> dims;
  std::optional<int64_t> data_type;
  std::optional<std::vector<std::uint8_t>> raw;
  std::vector<float> float_data;
  std::vector<int64_t> int_data;  // int32_data / int64_data, widened
  bool has_typed_data = false;

  while (!r.at_end()) {
    const auto [field, type] = r.read_tag();
    switch (field) {
      case fn::kTensorDims:
        read_repeated_int64(r, type, dims);
        break;
      case fn::kTensorDataType:
        data_type = static_cast<int64_t>(r.read_varint());
        break;
      case fn::kTensorName:
        name = to_string(r.read_bytes());
        break;
      case fn::kTensorRawData: {
        auto bytes = r.read_bytes();
        raw.emplace(bytes.begin(), bytes.end());
        break;
      }
      case fn::kTensorFloatData:
        has_typed_data = true;
        if (type == wire::kLengthDelimited) {
          wire::Reader packed = r.message_reader();
          while (!packed.at_end()) {
            float_data.push_back(std::bit_cast<float>(packed.read_fixed32()));
          }
        } else {
          float_data.push_back(std::bit_cast<float>(r.read_fixed32()));
        }
        break;
      case fn::kTensorInt32Data:
      case fn::kTensorInt64Data:
        has_typed_data = true;
        read_repeated_int64(r, type, int_data);
        break;
      default:
        r.skip(type);
        break;
    }
  }

  if (!data_type) r.fail("initializer '" + name + "' lacks a data type");
  const auto dtype = elem_type_from_onnx_code(*data_type);
  if (!dtype) {
    throw Error(ErrorCode::kWire,
                "initializer '" + name + "' has unsupported data type " +
                    std::to_string(*data_type));
  }

  if (raw) {
    return {name, QTensor::from_raw_bytes(*dtype, std::move(dims), *raw)};
  }

  QTensor t(*dtype, std::move(dims));
  const auto count = static_cast<std::size_t>(t.element_count());
  auto check_count = [&](std::size_t got) {
    if (got != count) {
      throw Error(ErrorCode::kWire, "initializer '" + name +
                                        "' payload has " +
                                        std::to_string(got) +
                                        " elements, shape wants " +
                                        std::to_string(count));
    }
  };
  if (!has_typed_data) {
    check_count(0);  // zero-element tensors may omit the payload entirely
    return {name, std::move(t)};
  }
  switch (*dtype) {
    case ElemType::kF32: {
      check_count(float_data.size());
      auto dst = t.f32();
      for (std::size_t i = 0; i < count; ++i) dst[i] = float_data[i];
      break;
    }
    case ElemType::kI8: {
      check_count(int_data.size());
      auto dst = t.i8();
      for (std::size_t i = 0; i < count; ++i) {
        dst[i] = static_cast<std::int8_t>(int_data[i]);
      }
      break;
    }
    case ElemType::kU8: {
      check_count(int_data.size());
      auto dst = t.u8();
      for (std::size_t i = 0; i < count; ++i) {
        dst[i] = static_cast<std::uint8_t>(int_data[i]);
      }
      break;
    }
    case ElemType::kI32: {
      check_count(int_data.size());
      auto dst = t.i32();
      for (std::size_t i = 0; i < count; ++i) {
        dst[i] = static_cast<std::int32_t>(int_data[i]);
      }
      break;
    }
    case ElemType::kF16: {
      check_count(int_data.size());
      auto dst = t.f16_bits();
      for (std::size_t i = 0; i < count; ++i) {
        dst[i] = static_cast<std::uint16_t>(int_data[i]);
      }
      break;
    }
  }
  return {name, std::move(t)};
}

inline ValueSpec parse_value_info(wire::Reader r) {
  ValueSpec spec;
  bool has_type = false;
  while (!r.at_end()) {
    const auto [field, type] = r.read_tag();
    if (field == fn::kValueInfoName) {
      spec.name = to_string(r.read_bytes());
    } else if (field == fn::kValueInfoType) {
      wire::Reader type_reader = r.message_reader();
      while (!type_reader.at_end()) {
        const auto [tf, tt] = type_reader.read_tag();
        if (tf != fn::kTypeTensorType) {
          type_reader.skip(tt);
          continue;
        }
        has_type = true;
        wire::Reader tensor_type = type_reader.message_reader();
        while (!tensor_type.at_end()) {
          const auto [ttf, ttt] = tensor_type.read_tag();
          if (ttf == fn::kTensorTypeElemType) {
            const auto code = static_cast<int64_t>(tensor_type.read_varint());
            const auto dt = elem_type_from_onnx_code(code);
            if (!dt) {
              throw Error(ErrorCode::kWire,
                          "value '" + spec.name +
                              "' has unsupported element type " +
                              std::to_string(code));
            }
            spec.dtype = *dt;
          } else if (ttf == fn::kTensorTypeShape) {
            wire::Reader shape = tensor_type.message_reader();
            while (!shape.at_end()) {
              const auto [sf, st] = shape.read_tag();
              if (sf != fn::kShapeDim) {
                shape.skip(st);
                continue;
              }
              wire::Reader dim = shape.message_reader();
              bool has_value = false;
              while (!dim.at_end()) {
                const auto [df, dt2] = dim.read_tag();
                if (df == fn::kDimValue) {
                  spec.shape.push_back(static_cast<int64_t>(dim.read_varint()));
                  has_value = true;
                } else if (df == fn::kDimParam) {
                  throw Error(ErrorCode::kWire,
                              "value '" + spec.name +
                                  "' uses a symbolic dimension; only static "
                                  "shapes are supported");
                } else {
                  dim.skip(dt2);
                }
              }
              if (!has_value) {
                throw Error(ErrorCode::kWire, "value '" + spec.name +
                                                  "' has a dimension without "
                                                  "a value");
              }
            }
          } else {
            tensor_type.skip(ttt);
          }
        }
      }
    } else {
      r.skip(type);
    }
  }
  if (!has_type) {
    throw Error(ErrorCode::kWire,
                "value '" + spec.name + "' lacks tensor type information");
  }
  return spec;
}

inline NodeIR parse_node(wire::Reader r, std::set<std::string>& unsupported) {
  NodeIR node;
  while (!r.at_end()) {
    const auto [field, type] = r.read_tag();
    switch (field) {
      case fn::kNodeInput:
        node.inputs.push_back(to_string(r.read_bytes()));
        break;
      case fn::kNodeOutput:
        node.outputs.push_back(to_string(r.read_bytes()));
        break;
      case fn::kNodeName:
        node.name = to_string(r.read_bytes());
        break;
      case fn::kNodeOpType:
        node.op_type = to_string(r.read_bytes());
        break;
      case fn::kNodeDomain: {
        const std::string domain = to_string(r.read_bytes());
        if (!domain.empty() && domain != "ai.onnx") {
          unsupported.insert(domain + "::" +
                             (node.op_type.empty() ? "?" : node.op_type));
        }
        break;
      }
      case fn::kNodeAttribute: {
        wire::Reader attr = r.message_reader();
        std::string attr_name;
        std::optional<AttrValue> value;
        std::vector<int64_t> ints;
        while (!attr.at_end()) {
          const auto [af, at] = attr.read_tag();
          switch (af) {
            case fn::kAttrName:
              attr_name = to_string(attr.read_bytes());
              break;
            case fn::kAttrF:
              value = std::bit_cast<float>(attr.read_fixed32());
              break;
            case fn::kAttrI:
              value = static_cast<int64_t>(attr.read_varint());
              break;
            case fn::kAttrT:
              value = parse_tensor(attr.message_reader()).second;
              break;
            case fn::kAttrInts:
              read_repeated_int64(attr, at, ints);
              break;
            default:
              attr.skip(at);
              break;
          }
        }
        if (!ints.empty()) value = std::move(ints);
        if (!attr_name.empty() && value) {
          node.attributes.emplace(std::move(attr_name), std::move(*value));
        }
        break;
      }
      default:
        r.skip(type);
        break;
    }
  }
  if (!is_supported_op(node.op_type)) unsupported.insert(node.op_type);
  return node;
}

inline GraphIR parse_graph(wire::Reader r, std::set<std::string>& unsupported) {
  GraphIR g;
  while (!r.at_end()) {
    const auto [field, type] = r.read_tag();
    switch (field) {
      case fn::kGraphNode:
        g.nodes.push_back(parse_node(r.message_reader(), unsupported));
        break;
      case fn::kGraphName:
        g.name = to_string(r.read_bytes());
        break;
      case fn::kGraphInitializer: {
        auto [name, tensor] = parse_tensor(r.message_reader());
        if (name.empty()) {
          throw Error(ErrorCode::kWire, "initializer without a name");
        }
        g.initializers.insert_or_assign(std::move(name), std::move(tensor));
        break;
      }
      case fn::kGraphInput:
        g.inputs.push_back(parse_value_info(r.message_reader()));
        break;
      case fn::kGraphOutput:
        g.outputs.push_back(parse_value_info(r.message_reader()));
        break;
      default:
        r.skip(type);
        break;
    }
  }
  return g;
}

}  // namespace onnx_detail

// ONNX ModelProto bytes -> GraphIR.  Unknown fields are skipped; unknown
// operators are collected and (by default) raised as one error listing every
// offending op type.  Pass reject_unsupported=false to get the IR anyway,
// e.g. for diagnostic listings.
inline GraphIR parse(std::span<const std::uint8_t> bytes,
                     bool reject_unsupported = true) {
  wire::Reader r(bytes);
  std::optional<GraphIR> graph;
  std::set<std::string> unsupported;
  std::optional<int64_t> default_opset;

  while (!r.at_end()) {
    const auto [field, type] = r.read_tag();
    switch (field) {
      case onnx_detail::fn::kModelIrVersion:
        r.read_varint();
        break;
      case onnx_detail::fn::kModelGraph:
        graph = onnx_detail::parse_graph(r.message_reader(), unsupported);
        break;
      case onnx_detail::fn::kModelOpsetImport: {
        wire::Reader opset = r.message_reader();
        std::string domain;
        std::optional<int64_t> version;
        while (!opset.at_end()) {
          const auto [of, ot] = opset.read_tag();
          if (of == onnx_detail::fn::kOpsetDomain) {
            domain = onnx_detail::to_string(opset.read_bytes());
          } else if (of == onnx_detail::fn::kOpsetVersion) {
            version = static_cast<int64_t>(opset.read_varint());
          } else {
            opset.skip(ot);
          }
        }
        if ((domain.empty() || domain == "ai.onnx") && version) {
          default_opset = *version;
        }
        break;
      }
      default:
        r.skip(type);
        break;
    }
  }

  if (!graph) {
    throw Error(ErrorCode::kWire, "model contains no graph");
  }
  if (default_opset) graph->opset_version = *default_opset;

  if (reject_unsupported && !unsupported.empty()) {
    std::ostringstream os;
    os << "model uses unsupported operators:";
    for (const auto& op : unsupported) os << ' ' << op;
    throw Error(ErrorCode::kUnsupportedOp, os.str());
  }
  return *graph;
}

inline GraphIR parse(std::string_view bytes, bool reject_unsupported = true) {
  return parse(std::span<const std::uint8_t>(
                   reinterpret_cast<const std::uint8_t*>(bytes.data()),
                   bytes.size()),
               reject_unsupported);
}

}  // namespace pq

#endif  // PREQUANT_ONNX_IO_HPP_
