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
#ifndef PREQUANT_COMPARE_HPP_
#define PREQUANT_COMPARE_HPP_

// Accuracy validation: runs the same samples through the fp32 reference and
// the quantized graph, dequantizes the graph output, and reports the error.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "prequant/error.hpp"
#include "prequant/float_model.hpp"
#include "prequant/interp.hpp"
#include "prequant/quantizer.hpp"
#include "prequant/tensor.hpp"

namespace pq {

struct ErrorReport {
  int64_t sample_count = 0;
  int64_t element_count = 0;       // outputs compared, summed over samples
  double max_abs_error = 0.0;      // in real (dequantized) units
  double mean_abs_error = 0.0;
  double max_error_steps = 0.0;    // max_abs_error / output_scale
  double sqnr_db = 0.0;            // +inf when the error is exactly zero
  double output_scale = 0.0;
  std::uint64_t quantize_saturation_count = 0;
  std::uint64_t inexact_cast_count = 0;
};

// Compares graph `g` against the float reference on the given samples.  The
// calibration profile supplies the input/output scales, which the graph
// itself does not carry.
inline ErrorReport compare(const FloatModelSpec& model, const GraphIR& g,
                           const CalibrationProfile& profile,
                           std::span<const QTensor> samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::kCalibration, "no comparison samples given");
  }
  const ScalePlan plan = plan_scales(model, profile);
  if (g.inputs.size() != 1 || g.outputs.size() != 1) {
    throw Error(ErrorCode::kValidation,
                "compare expects a single-input single-output graph");
  }
  const std::string& input_name = g.inputs[0].name;
  const Scale& output_scale = plan.output_scale();

  ErrorReport report;
  report.output_scale = static_cast<double>(output_scale.value());

  double sum_abs_err = 0.0;
  double sum_sq_err = 0.0;
  double sum_sq_signal = 0.0;
  for (const auto& sample : samples) {
    if (sample.dtype() != ElemType::kF32 ||
        sample.shape() != model.input_shape) {
      throw Error(ErrorCode::kCalibration,
                  "comparison sample does not match the model input");
    }
    const QTensor reference = run_reference(model, sample).final_output();

    const QTensor input_q =
        quantize_tensor(sample, plan.input_scale, ElemType::kI8);
    RunResult quantized = run(g, {{input_name, input_q}});
    const QTensor& output_q = quantized.outputs.at(g.outputs[0].name);
    report.quantize_saturation_count +=
        quantized.stats.quantize_saturation_count;
    report.inexact_cast_count += quantized.stats.inexact_cast_count;

    if (output_q.shape() != reference.shape()) {
      throw Error(ErrorCode::kValidation,
                  "graph output shape does not match the reference");
    }
    const QTensor output = dequantize_tensor(output_q, output_scale);
    const auto n = static_cast<std::size_t>(output.element_count());
    for (std::size_t i = 0; i < n; ++i) {
      const double got = output.f32()[i];
      const double want = reference.f32()[i];
      const double err = std::fabs(got - want);
      sum_abs_err += err;
      sum_sq_err += (got - want) * (got - want);
      sum_sq_signal += want * want;
      if (err > report.max_abs_error) report.max_abs_error = err;
    }
    report.element_count += output.element_count();
    ++report.sample_count;
  }

  report.mean_abs_error =
      report.element_count == 0
          ? 0.0
          : sum_abs_err / static_cast<double>(report.element_count);
  report.max_error_steps = report.max_abs_error / report.output_scale;
  if (sum_sq_err == 0.0) {
    report.sqnr_db = std::numeric_limits<double>::infinity();
  } else if (sum_sq_signal == 0.0) {
    report.sqnr_db = -std::numeric_limits<double>::infinity();
  } else {
    report.sqnr_db = 10.0 * std::log10(sum_sq_signal / sum_sq_err);
  }
  return report;
}

}  // namespace pq

#endif  // PREQUANT_COMPARE_HPP_
