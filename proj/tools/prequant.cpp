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

// prequant command-line tool.
//
//   quantize   float model + calibration data -> pre-quantized ONNX
//   run        execute a pre-quantized ONNX model bit-exactly
//   extract    recover hardware layer descriptors from a model
//   validate   compare a quantized model against its float reference
//   inspect    summarize a model file and report validation findings
//
// Exit codes are per-command; see the README for the full table.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prequant/prequant.hpp"

namespace {

enum class Command { kQuantize, kRun, kExtract, kValidate, kInspect };

int exit_code_for(Command cmd, pq::ErrorCode code) {
  using pq::ErrorCode;
  const bool graph_error = code == ErrorCode::kValidation ||
                           code == ErrorCode::kUnsupportedOp ||
                           code == ErrorCode::kBinding ||
                           code == ErrorCode::kPattern;
  const bool data_error = code == ErrorCode::kCalibration ||
                          code == ErrorCode::kRange ||
                          code == ErrorCode::kDomain;
  switch (cmd) {
    case Command::kQuantize:
      return data_error ? 2 : 1;
    case Command::kRun:
      if (code == ErrorCode::kOverflow) return 4;
      return graph_error ? 3 : 1;
    case Command::kExtract:
      return graph_error || code == ErrorCode::kCodification ? 5 : 1;
    case Command::kValidate:
      if (code == ErrorCode::kThreshold) return 6;
      if (data_error) return 2;
      return graph_error ? 3 : 1;
    case Command::kInspect:
      return graph_error ? 3 : 1;
  }
  return 1;
}

// Loads every tensor from every file into one flat sample list.
std::vector<pq::QTensor> load_samples(const std::vector<std::string>& paths) {
  std::vector<pq::QTensor> samples;
  for (const auto& path : paths) {
    for (auto& named : pq::load_tensor_file(path)) {
      samples.push_back(std::move(named.tensor));
    }
  }
  return samples;
}

pq::GraphIR load_graph(const std::string& path, bool reject_unsupported) {
  const std::string bytes = pq::read_binary_file(path);
  return pq::parse(bytes, reject_unsupported);
}

struct QuantizeArgs {
  std::string model_path;
  std::vector<std::string> calib_paths;
  std::string codification = "two_mul";
  std::string out_path;
  std::string report_path;
  std::string descriptors_path;
  std::string profile_path;
};

int cmd_quantize(const QuantizeArgs& args) {
  const pq::FloatModelSpec model = pq::load_model_file(args.model_path);
  const auto samples = load_samples(args.calib_paths);
  const auto codif = pq::codification_from_name(args.codification);
  if (!codif) {
    throw pq::Error(pq::ErrorCode::kUsage,
                    "unknown codification '" + args.codification + "'");
  }
  const pq::CalibrationProfile profile = pq::calibrate(model, samples);
  const pq::QuantizeResult result =
      pq::quantize_model(model, profile, *codif);
  pq::write_binary_file(args.out_path, pq::serialize(result.graph));
  if (!args.report_path.empty()) {
    pq::write_json_file(args.report_path,
                        pq::quant_report_to_json(result.report));
  }
  if (!args.descriptors_path.empty()) {
    pq::write_json_file(
        args.descriptors_path,
        pq::descriptors_to_json(model.name,
                                pq::extract_input_spec(result.graph),
                                result.descriptors));
  }
  if (!args.profile_path.empty()) {
    pq::write_json_file(args.profile_path, pq::profile_to_json(profile));
  }
  return 0;
}

struct RunArgs {
  std::string model_path;
  std::string input_path;
  std::string out_path;
  std::string stats_path;
};

int cmd_run(const RunArgs& args) {
  const pq::GraphIR g = load_graph(args.model_path, true);
  if (g.inputs.size() != 1) {
    throw pq::Error(pq::ErrorCode::kBinding,
                    "run expects a single-input model");
  }
  const auto tensors = pq::load_tensor_file(args.input_path);
  if (tensors.size() != 1) {
    throw pq::Error(pq::ErrorCode::kBinding,
                    "input file must contain exactly one tensor");
  }
  if (!tensors[0].name.empty() && tensors[0].name != g.inputs[0].name) {
    throw pq::Error(pq::ErrorCode::kBinding,
                    "input tensor is named '" + tensors[0].name +
                        "' but the model input is '" + g.inputs[0].name +
                        "'");
  }
  const pq::RunResult result =
      pq::run(g, {{g.inputs[0].name, tensors[0].tensor}});
  const auto& out_name = g.outputs[0].name;
  pq::write_json_file(
      args.out_path, pq::tensor_to_json(result.outputs.at(out_name), out_name));
  if (!args.stats_path.empty()) {
    pq::Json stats;
    stats["inexact_cast_count"] = result.stats.inexact_cast_count;
    stats["quantize_saturation_count"] =
        result.stats.quantize_saturation_count;
    pq::write_json_file(args.stats_path, stats);
  }
  return 0;
}

struct ExtractArgs {
  std::string model_path;
  std::string out_path;
};

int cmd_extract(const ExtractArgs& args) {
  const pq::GraphIR g = load_graph(args.model_path, true);
  const auto descriptors = pq::extract(g);
  pq::write_json_file(
      args.out_path,
      pq::descriptors_to_json(g.name, pq::extract_input_spec(g), descriptors));
  return 0;
}

struct ValidateArgs {
  std::string model_path;
  std::string graph_path;
  std::vector<std::string> sample_paths;
  std::vector<std::string> calib_paths;
  std::string report_path;
  double max_error_steps = 4.0;
  double min_sqnr_db = 0.0;
  bool has_min_sqnr = false;
};

int cmd_validate(const ValidateArgs& args) {
  const pq::FloatModelSpec model = pq::load_model_file(args.model_path);
  const pq::GraphIR g = load_graph(args.graph_path, true);
  const auto samples = load_samples(args.sample_paths);
  // The calibration set defaults to the validation samples themselves.
  const auto calib = args.calib_paths.empty()
                         ? samples
                         : load_samples(args.calib_paths);
  const pq::CalibrationProfile profile = pq::calibrate(model, calib);
  const pq::ErrorReport report = pq::compare(model, g, profile, samples);

  const pq::Json report_json = pq::error_report_to_json(report);
  std::cout << report_json.dump(2) << "\n";
  if (!args.report_path.empty()) {
    pq::write_json_file(args.report_path, report_json);
  }

  if (report.max_error_steps > args.max_error_steps) {
    throw pq::Error(pq::ErrorCode::kThreshold,
                    "max error of " + std::to_string(report.max_error_steps) +
                        " quantization steps exceeds the limit of " +
                        std::to_string(args.max_error_steps));
  }
  if (args.has_min_sqnr && report.sqnr_db < args.min_sqnr_db) {
    throw pq::Error(pq::ErrorCode::kThreshold,
                    "SQNR of " + std::to_string(report.sqnr_db) +
                        " dB is below the required " +
                        std::to_string(args.min_sqnr_db) + " dB");
  }
  return 0;
}

struct InspectArgs {
  std::string model_path;
};

int cmd_inspect(const InspectArgs& args) {
  const pq::GraphIR g = load_graph(args.model_path, false);

  std::cout << "model:  " << (g.name.empty() ? "(unnamed)" : g.name) << "\n";
  std::cout << "opset:  " << g.opset_version << "\n";
  auto print_values = [](const char* label,
                         const std::vector<pq::ValueSpec>& values) {
    for (const auto& v : values) {
      std::cout << label << ": " << v.name << " "
                << pq::elem_type_name(v.dtype) << " [";
      for (std::size_t i = 0; i < v.shape.size(); ++i) {
        std::cout << (i ? "," : "") << v.shape[i];
      }
      std::cout << "]\n";
    }
  };
  print_values("input ", g.inputs);
  print_values("output", g.outputs);
  std::cout << "nodes:  " << g.nodes.size() << "\n";
  std::map<std::string, int> ops;
  for (const auto& node : g.nodes) ++ops[node.op_type];
  for (const auto& [op, count] : ops) {
    std::cout << "  " << op << " x" << count << "\n";
  }
  std::cout << "initializers: " << g.initializers.size() << "\n";

  const auto diags = pq::validate(g);
  for (const auto& d : diags) {
    std::cout << (d.severity == pq::Severity::kError ? "error" : "warning")
              << (d.node.empty() ? "" : " [" + d.node + "]") << ": "
              << d.message << "\n";
  }
  if (pq::has_errors(diags)) {
    throw pq::Error(pq::ErrorCode::kValidation,
                    "model failed validation; see findings above");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pre-quantized model toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pq::kVersion);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "chatty diagnostics on stderr");

  QuantizeArgs qargs;
  auto* quantize = app.add_subcommand(
      "quantize", "quantize a float model into standard-operator ONNX");
  quantize->add_option("--model", qargs.model_path, "float model JSON")
      ->required();
  quantize
      ->add_option("--calib", qargs.calib_paths,
                   "calibration tensor file (repeatable)")
      ->required();
  quantize->add_option("--codification", qargs.codification,
                       "rescale codification: one_mul or two_mul");
  quantize->add_option("-o,--out", qargs.out_path, "output .onnx path")
      ->required();
  quantize->add_option("--report", qargs.report_path,
                       "write the quantization report JSON here");
  quantize->add_option("--descriptors", qargs.descriptors_path,
                       "write hardware descriptors JSON here");
  quantize->add_option("--profile-out", qargs.profile_path,
                       "write the calibration profile JSON here");

  RunArgs rargs;
  auto* run = app.add_subcommand("run", "execute a model on one input");
  run->add_option("--model", rargs.model_path, "model .onnx path")->required();
  run->add_option("--input", rargs.input_path, "input tensor JSON")
      ->required();
  run->add_option("-o,--out", rargs.out_path, "output tensor JSON path")
      ->required();
  run->add_option("--stats", rargs.stats_path, "write run statistics here");

  ExtractArgs eargs;
  auto* extract = app.add_subcommand(
      "extract", "recover hardware layer descriptors from a model");
  extract->add_option("--model", eargs.model_path, "model .onnx path")
      ->required();
  extract->add_option("-o,--out", eargs.out_path, "descriptor JSON path")
      ->required();

  ValidateArgs vargs;
  auto* validate = app.add_subcommand(
      "validate", "compare a quantized model against its float reference");
  validate->add_option("--model", vargs.model_path, "float model JSON")
      ->required();
  validate->add_option("--graph", vargs.graph_path, "quantized .onnx path")
      ->required();
  validate
      ->add_option("--samples", vargs.sample_paths,
                   "validation tensor file (repeatable)")
      ->required();
  validate->add_option("--calib", vargs.calib_paths,
                       "calibration tensor files (defaults to the samples)");
  validate->add_option("--max-error-steps", vargs.max_error_steps,
                       "fail above this many quantization steps of error");
  auto* sqnr_opt = validate->add_option(
      "--min-sqnr", vargs.min_sqnr_db, "fail below this SQNR in dB");
  validate->add_option("--report", vargs.report_path,
                       "also write the error report JSON here");

  InspectArgs iargs;
  auto* inspect =
      app.add_subcommand("inspect", "summarize and validate a model file");
  inspect->add_option("--model", iargs.model_path, "model .onnx path")
      ->required();

  CLI11_PARSE(app, argc, argv);

  Command cmd = Command::kInspect;
  if (quantize->parsed()) cmd = Command::kQuantize;
  else if (run->parsed()) cmd = Command::kRun;
  else if (extract->parsed()) cmd = Command::kExtract;
  else if (validate->parsed()) cmd = Command::kValidate;
  vargs.has_min_sqnr = sqnr_opt->count() > 0;

  if (verbose) {
    std::cerr << "prequant " << pq::kVersion << "\n";
  }

  try {
    switch (cmd) {
      case Command::kQuantize: return cmd_quantize(qargs);
      case Command::kRun: return cmd_run(rargs);
      case Command::kExtract: return cmd_extract(eargs);
      case Command::kValidate: return cmd_validate(vargs);
      case Command::kInspect: return cmd_inspect(iargs);
    }
  } catch (const pq::Error& e) {
    std::cerr << "error[" << pq::error_code_name(e.code()) << "]: "
              << e.what() << "\n";
    return exit_code_for(cmd, e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
