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

// Regenerates the golden files under tests/data.  The single-FC model is
// small enough to evaluate by hand:
//
//   x_q = [[1, 2]], W_q = [[3, 4]] (row = output channel), b_q = [5]
//   acc = 1*3 + 2*4 + 5 = 16
//   rescale: (16 * 11184810) >> 25 = 178956960 >> 25 = 5   (floor)
//   QuantizeLinear(scale 1) -> y_q = [[5]]
//
// The expected-output fixture is written from that hand computation, not
// from the interpreter, so the files stay an independent oracle.

#include <iostream>
#include <string>

#include "prequant/prequant.hpp"

namespace {

pq::HwLayerDescriptor single_fc_descriptor() {
  pq::HwLayerDescriptor d;
  d.name = "fc0";
  d.kind = pq::LayerKind::kFullyConnected;
  d.weights = pq::QTensor::from_i8({1, 2}, {3, 4});
  d.bias = pq::QTensor::from_i32({1}, {5});
  d.rescale = pq::decompose_rescale(1.0 / 3.0);  // (11184810, 25)
  d.codification = pq::RescaleCodification::kTwoMul;
  d.activation = pq::ActivationSpec::none();
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return 1;
  }
  const std::string dir = argv[1];

  const auto descriptor = single_fc_descriptor();
  const pq::GraphIR g = pq::build_model(
      std::span(&descriptor, 1),
      pq::ModelInput{"input", pq::ElemType::kI8, {1, 2}}, "fc_single");
  pq::write_binary_file(dir + "/fc_single.onnx", pq::serialize(g));

  pq::write_json_file(
      dir + "/fc_single_input.json",
      pq::tensor_to_json(pq::QTensor::from_i8({1, 2}, {1, 2}), "input"));

  // Hand-evaluated expected output; see the header comment.
  pq::write_json_file(
      dir + "/fc_single_output.json",
      pq::tensor_to_json(pq::QTensor::from_i8({1, 1}, {5}), "fc0/out"));

  std::cout << "fixtures written to " << dir << "\n";
  return 0;
}
