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
#ifndef PREQUANT_ERROR_HPP_
#define PREQUANT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace pq {

// Every failure raised by this library carries one of these codes so that
// callers (the CLI in particular) can map it to a process exit status
// without string matching.
enum class ErrorCode {
  kIo,            // file read/write failure
  kDocument,      // malformed JSON document or schema violation
  kWire,          // malformed protobuf bytes
  kUnsupportedOp, // operator outside the closed set
  kValidation,    // graph invariant violated
  kBinding,       // input binding mismatch at run time
  kOverflow,      // int32 accumulator overflow
  kDomain,        // NaN fed to quantization
  kRange,         // invalid scale / degenerate calibration range
  kCalibration,   // bad or missing calibration data
  kPattern,       // graph does not match any known layer pattern
  kCodification,  // rescale codification mismatch during extraction
  kThreshold,     // accuracy threshold exceeded
  kUsage,         // bad command-line arguments
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kDocument: return "document";
    case ErrorCode::kWire: return "wire";
    case ErrorCode::kUnsupportedOp: return "unsupported-op";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kBinding: return "binding";
    case ErrorCode::kOverflow: return "overflow";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kCalibration: return "calibration";
    case ErrorCode::kPattern: return "pattern";
    case ErrorCode::kCodification: return "codification";
    case ErrorCode::kThreshold: return "threshold";
    case ErrorCode::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace pq

#endif  // PREQUANT_ERROR_HPP_
