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

#include <cstdint>
#include <string>
#include <vector>

#include "prequant/onnx_io.hpp"

using pq::AttrValue;
using pq::ElemType;
using pq::Error;
using pq::ErrorCode;
using pq::GraphIR;
using pq::QTensor;

namespace {

GraphIR make_valid_graph() {
  GraphIR g;
  g.name = "t";
  g.inputs = {{"x", ElemType::kI8, {1, 2}}};
  g.initializers.emplace("w", QTensor::from_i8({2, 3}, {1, 2, 3, 4, 5, 6}));
  g.initializers.emplace("b", QTensor::from_i32({3}, {1, -1, 0}));
  g.initializers.emplace("m", QTensor::scalar_f32(0.5f));
  g.initializers.emplace("s", QTensor::scalar_f32(1.0f));
  g.initializers.emplace("zp", QTensor::scalar_i8(0));
  g.nodes = {
      {.op_type = "MatMulInteger",
       .name = "mm",
       .inputs = {"x", "w"},
       .outputs = {"acc"},
       .attributes = {}},
      {.op_type = "Add",
       .name = "bias",
       .inputs = {"acc", "b"},
       .outputs = {"acc_b"},
       .attributes = {}},
      {.op_type = "Cast",
       .name = "cast",
       .inputs = {"acc_b"},
       .outputs = {"acc_f"},
       .attributes = {{"to", AttrValue(pq::onnx_dtype_code(ElemType::kF32))}}},
      {.op_type = "Mul",
       .name = "rescale",
       .inputs = {"acc_f", "m"},
       .outputs = {"scaled"},
       .attributes = {}},
      {.op_type = "QuantizeLinear",
       .name = "quant",
       .inputs = {"scaled", "s", "zp"},
       .outputs = {"y"},
       .attributes = {}},
  };
  g.outputs = {{"y", ElemType::kI8, {1, 3}}};
  return g;
}

// Wraps hand-assembled GraphProto bytes in a ModelProto.
std::string wrap_model(const std::string& graph_bytes) {
  pq::wire::Writer opset;
  opset.field_int64(pq::onnx_detail::fn::kOpsetVersion, pq::kDefaultOpset);
  pq::wire::Writer model;
  model.field_int64(pq::onnx_detail::fn::kModelIrVersion, pq::kIrVersion);
  model.field_bytes(pq::onnx_detail::fn::kModelGraph, graph_bytes);
  model.field_bytes(pq::onnx_detail::fn::kModelOpsetImport, opset.str());
  return model.take();
}

}  // namespace

TEST_CASE("serialize then parse is the identity", "[onnx_io]") {
  const GraphIR g = make_valid_graph();
  const std::string bytes = pq::serialize(g);
  const GraphIR back = pq::parse(bytes);
  REQUIRE(back == g);
}

TEST_CASE("serialization is byte-deterministic", "[onnx_io]") {
  const GraphIR g = make_valid_graph();
  const std::string a = pq::serialize(g);
  const std::string b = pq::serialize(g);
  REQUIRE(a == b);
  // A parse/serialize cycle reproduces the same bytes: field order, packed
  // encodings and map ordering are all canonical.
  REQUIRE(pq::serialize(pq::parse(a)) == a);
}

TEST_CASE("model header encodes ir_version 7 first", "[onnx_io]") {
  const std::string bytes = pq::serialize(make_valid_graph());
  REQUIRE(bytes.size() > 2);
  REQUIRE(static_cast<unsigned char>(bytes[0]) == 0x08);  // field 1, varint
  REQUIRE(static_cast<unsigned char>(bytes[1]) == 0x07);  // ir_version 7
}

TEST_CASE("serialize refuses an invalid graph", "[onnx_io]") {
  GraphIR g = make_valid_graph();
  g.nodes[0].inputs[1] = "ghost";
  REQUIRE_THROWS_AS(pq::serialize(g), Error);
}

TEST_CASE("opset version survives the round trip", "[onnx_io]") {
  GraphIR g = make_valid_graph();
  g.opset_version = 11;
  REQUIRE(pq::parse(pq::serialize(g)).opset_version == 11);
}

TEST_CASE("scalar graph inputs and outputs round-trip", "[onnx_io]") {
  GraphIR g;
  g.name = "scalar";
  g.inputs = {{"x", ElemType::kF32, {}}};
  g.initializers.emplace("s", QTensor::scalar_f32(1.0f));
  g.initializers.emplace("zp", QTensor::scalar_i8(0));
  g.nodes = {{.op_type = "QuantizeLinear",
              .name = "q",
              .inputs = {"x", "s", "zp"},
              .outputs = {"y"},
              .attributes = {}}};
  g.outputs = {{"y", ElemType::kI8, {}}};
  REQUIRE(pq::parse(pq::serialize(g)) == g);
}

TEST_CASE("unknown model-level fields are skipped", "[onnx_io]") {
  const GraphIR g = make_valid_graph();
  pq::wire::Writer w;
  // producer_name (field 2) and model_version (field 5) are not part of the
  // subset; a reader must step over them.
  w.field_bytes(2, "external-exporter");
  w.field_varint(5, 42);
  const std::string bytes = pq::serialize(g) + w.take();
  REQUIRE(pq::parse(bytes) == g);
}

TEST_CASE("unsupported operators are collected and sorted", "[onnx_io]") {
  pq::wire::Writer gemm;
  gemm.field_bytes(pq::onnx_detail::fn::kNodeOpType, "Gemm");
  pq::wire::Writer lstm;
  lstm.field_bytes(pq::onnx_detail::fn::kNodeOpType, "LSTM");
  pq::wire::Writer graph;
  graph.field_bytes(pq::onnx_detail::fn::kGraphNode, lstm.str());
  graph.field_bytes(pq::onnx_detail::fn::kGraphNode, gemm.str());
  const std::string bytes = wrap_model(graph.str());

  try {
    pq::parse(bytes);
    FAIL("expected an unsupported-operator error");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::kUnsupportedOp);
    REQUIRE(std::string(e.what()) ==
            "model uses unsupported operators: Gemm LSTM");
  }

  // Tolerant mode still yields the IR for inspection.
  const GraphIR g = pq::parse(bytes, /*reject_unsupported=*/false);
  REQUIRE(g.nodes.size() == 2);
  REQUIRE(g.nodes[0].op_type == "LSTM");
  REQUIRE(g.nodes[1].op_type == "Gemm");
}

TEST_CASE("custom-domain nodes are reported with their domain", "[onnx_io]") {
  pq::wire::Writer node;
  node.field_bytes(pq::onnx_detail::fn::kNodeOpType, "Relu");
  node.field_bytes(pq::onnx_detail::fn::kNodeDomain, "com.example");
  pq::wire::Writer graph;
  graph.field_bytes(pq::onnx_detail::fn::kGraphNode, node.str());

  try {
    pq::parse(wrap_model(graph.str()));
    FAIL("expected an unsupported-operator error");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::kUnsupportedOp);
    REQUIRE(std::string(e.what()).find("com.example::Relu") !=
            std::string::npos);
  }
}

TEST_CASE("typed fallback payloads are accepted", "[onnx_io]") {
  // Exporters may use float_data / int32_data instead of raw_data.
  pq::wire::Writer wt;
  wt.field_varint(pq::onnx_detail::fn::kTensorDims, 2);
  wt.field_varint(pq::onnx_detail::fn::kTensorDataType, 1);  // float32
  wt.field_bytes(pq::onnx_detail::fn::kTensorName, "w");
  pq::wire::Writer floats;
  floats.field_fixed32(pq::onnx_detail::fn::kTensorFloatData,
                       std::bit_cast<std::uint32_t>(1.5f));
  floats.field_fixed32(pq::onnx_detail::fn::kTensorFloatData,
                       std::bit_cast<std::uint32_t>(-2.0f));

  pq::wire::Writer it;
  it.field_varint(pq::onnx_detail::fn::kTensorDims, 2);
  it.field_varint(pq::onnx_detail::fn::kTensorDataType, 3);  // int8
  it.field_bytes(pq::onnx_detail::fn::kTensorName, "q");
  pq::wire::Writer ints;
  ints.field_varint(pq::onnx_detail::fn::kTensorInt32Data,
                    static_cast<std::uint64_t>(int64_t{-1}));
  ints.field_varint(pq::onnx_detail::fn::kTensorInt32Data, 7);

  pq::wire::Writer graph;
  graph.field_bytes(pq::onnx_detail::fn::kGraphInitializer,
                    wt.str() + floats.str());
  graph.field_bytes(pq::onnx_detail::fn::kGraphInitializer,
                    it.str() + ints.str());

  const GraphIR g = pq::parse(wrap_model(graph.str()),
                              /*reject_unsupported=*/false);
  REQUIRE(g.initializers.at("w") == QTensor::from_f32({2}, {1.5f, -2.0f}));
  REQUIRE(g.initializers.at("q") == QTensor::from_i8({2}, {-1, 7}));
}

TEST_CASE("payload size mismatches are wire errors", "[onnx_io]") {
  pq::wire::Writer wt;
  wt.field_varint(pq::onnx_detail::fn::kTensorDims, 2);
  wt.field_varint(pq::onnx_detail::fn::kTensorDataType, 1);
  wt.field_bytes(pq::onnx_detail::fn::kTensorName, "w");
  wt.field_fixed32(pq::onnx_detail::fn::kTensorFloatData,
                   std::bit_cast<std::uint32_t>(1.0f));  // one of two
  pq::wire::Writer graph;
  graph.field_bytes(pq::onnx_detail::fn::kGraphInitializer, wt.str());

  REQUIRE_THROWS_MATCHES(
      pq::parse(wrap_model(graph.str()), false), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code() == ErrorCode::kWire; }));
}

TEST_CASE("symbolic dimensions are rejected", "[onnx_io]") {
  pq::wire::Writer dim;
  dim.field_bytes(pq::onnx_detail::fn::kDimParam, "N");
  pq::wire::Writer shape;
  shape.field_bytes(pq::onnx_detail::fn::kShapeDim, dim.str());
  pq::wire::Writer tensor_type;
  tensor_type.field_varint(pq::onnx_detail::fn::kTensorTypeElemType, 3);
  tensor_type.field_bytes(pq::onnx_detail::fn::kTensorTypeShape, shape.str());
  pq::wire::Writer type;
  type.field_bytes(pq::onnx_detail::fn::kTypeTensorType, tensor_type.str());
  pq::wire::Writer vi;
  vi.field_bytes(pq::onnx_detail::fn::kValueInfoName, "x");
  vi.field_bytes(pq::onnx_detail::fn::kValueInfoType, type.str());
  pq::wire::Writer graph;
  graph.field_bytes(pq::onnx_detail::fn::kGraphInput, vi.str());

  try {
    pq::parse(wrap_model(graph.str()), false);
    FAIL("expected a wire error");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::kWire);
    REQUIRE(std::string(e.what()).find("symbolic") != std::string::npos);
  }
}

TEST_CASE("values without type information are rejected", "[onnx_io]") {
  pq::wire::Writer vi;
  vi.field_bytes(pq::onnx_detail::fn::kValueInfoName, "x");
  pq::wire::Writer graph;
  graph.field_bytes(pq::onnx_detail::fn::kGraphInput, vi.str());
  REQUIRE_THROWS_AS(pq::parse(wrap_model(graph.str()), false), Error);
}

TEST_CASE("malformed bytes fail with an offset", "[onnx_io]") {
  SECTION("truncated model") {
    std::string bytes = pq::serialize(make_valid_graph());
    bytes.resize(bytes.size() - 3);
    try {
      pq::parse(bytes);
      FAIL("expected a wire error");
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::kWire);
      REQUIRE(std::string(e.what()).find("byte offset") != std::string::npos);
    }
  }
  SECTION("garbage") {
    const std::string junk = "\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff";
    REQUIRE_THROWS_AS(pq::parse(junk), Error);
  }
  SECTION("empty input has no graph") {
    try {
      pq::parse(std::string_view(""));
      FAIL("expected a wire error");
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::kWire);
      REQUIRE(std::string(e.what()).find("no graph") != std::string::npos);
    }
  }
}

TEST_CASE("node attributes of every kind round-trip", "[onnx_io]") {
  GraphIR g;
  g.name = "conv";
  g.inputs = {{"x", ElemType::kI8, {1, 2, 4, 4}}};
  g.initializers.emplace("w", QTensor(ElemType::kI8, {3, 2, 3, 3}));
  g.nodes = {{.op_type = "ConvInteger",
              .name = "conv",
              .inputs = {"x", "w"},
              .outputs = {"acc"},
              .attributes =
                  {{"pads", AttrValue(std::vector<int64_t>{1, 1, 1, 1})},
                   {"strides", AttrValue(std::vector<int64_t>{1, 1})}}}};
  g.outputs = {{"acc", ElemType::kI32, {1, 3, 4, 4}}};

  const GraphIR back = pq::parse(pq::serialize(g));
  REQUIRE(back == g);
  const auto* pads = back.nodes[0].ints_attr("pads");
  REQUIRE(pads != nullptr);
  REQUIRE(*pads == std::vector<int64_t>{1, 1, 1, 1});
}
