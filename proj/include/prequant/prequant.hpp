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
#ifndef PREQUANT_PREQUANT_HPP_
#define PREQUANT_PREQUANT_HPP_

// Umbrella header.

#include "prequant/compare.hpp"      // IWYU pragma: export
#include "prequant/error.hpp"        // IWYU pragma: export
#include "prequant/float_model.hpp"  // IWYU pragma: export
#include "prequant/formats.hpp"      // IWYU pragma: export
#include "prequant/fp16.hpp"         // IWYU pragma: export
#include "prequant/graph.hpp"        // IWYU pragma: export
#include "prequant/interp.hpp"       // IWYU pragma: export
#include "prequant/onnx_io.hpp"      // IWYU pragma: export
#include "prequant/patterns.hpp"     // IWYU pragma: export
#include "prequant/qmath.hpp"        // IWYU pragma: export
#include "prequant/quantizer.hpp"    // IWYU pragma: export
#include "prequant/tensor.hpp"       // IWYU pragma: export
#include "prequant/version.hpp"      // IWYU pragma: export

#endif  // PREQUANT_PREQUANT_HPP_
