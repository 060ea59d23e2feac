#!/usr/bin/env python3
# Copyright 2026 The Prequant Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Cross-checks a prequant model against an external ONNX runtime.

The toolkit's own interpreter defines the reference semantics; this script
verifies that a stock runtime, fed the very same .onnx bytes, produces the
same integers.  It cannot run inside the build sandbox (no onnxruntime
wheel there), so it is a manual step:

  1. Build the toolkit and generate a model plus its expected output:

       prequant quantize --model demo/model.json --calib demo/calib.json \
           -o /tmp/demo.onnx
       prequant run --model /tmp/demo.onnx --input demo/input_q.json \
           -o /tmp/expected.json

     (`demo/input_q.json` holds the already-quantized int8 input; any
     int8/uint8 tensor of the right shape works.)

  2. On a machine with `pip install onnxruntime numpy`, run:

       python3 scripts/cross_check_onnxruntime.py \
           --model /tmp/demo.onnx \
           --input demo/input_q.json \
           --expected /tmp/expected.json

The script exits 0 when every output element matches exactly, 1 on any
mismatch, and 2 on usage/setup problems.  Integer outputs must agree
bit-for-bit.  For float16 outputs an optional --ulp-slack N allows N units
in the last place, because runtimes do not pin the transcendental libm used
for Tanh/Sigmoid; the default is 0 (bit-exact there too).
"""

import argparse
import json
import sys

DTYPE_MAP = {
    "int8": "int8",
    "uint8": "uint8",
    "int32": "int32",
    "float32": "float32",
    "float16": "float16",
}


def load_tensor(path):
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    if isinstance(doc, list):
        if len(doc) != 1:
            raise SystemExit(f"{path}: expected exactly one tensor document")
        doc = doc[0]
    if isinstance(doc, dict) and "tensors" in doc:
        tensors = doc["tensors"]
        if len(tensors) != 1:
            raise SystemExit(f"{path}: expected exactly one tensor document")
        doc = tensors[0]
    for key in ("dtype", "shape", "data"):
        if key not in doc:
            raise SystemExit(f"{path}: tensor document is missing '{key}'")
    if doc["dtype"] not in DTYPE_MAP:
        raise SystemExit(f"{path}: unsupported dtype '{doc['dtype']}'")
    import numpy as np

    arr = np.array(doc["data"], dtype=DTYPE_MAP[doc["dtype"]])
    return doc.get("name", ""), arr.reshape(doc["shape"])


def main():
    parser = argparse.ArgumentParser(
        description="compare onnxruntime output against a prequant run")
    parser.add_argument("--model", required=True, help=".onnx file")
    parser.add_argument("--input", required=True, help="input tensor JSON")
    parser.add_argument("--expected", required=True,
                        help="expected output tensor JSON (from `prequant run`)")
    parser.add_argument("--ulp-slack", type=int, default=0,
                        help="allowed ULP difference for float16 outputs")
    args = parser.parse_args()

    try:
        import numpy as np
        import onnxruntime as ort
    except ImportError as e:
        print(f"setup error: {e}; install with `pip install onnxruntime numpy`",
              file=sys.stderr)
        return 2

    _, input_arr = load_tensor(args.input)
    expected_name, expected = load_tensor(args.expected)

    session = ort.InferenceSession(args.model,
                                   providers=["CPUExecutionProvider"])
    model_inputs = session.get_inputs()
    if len(model_inputs) != 1:
        print("setup error: model must have exactly one input", file=sys.stderr)
        return 2
    outputs = session.run(None, {model_inputs[0].name: input_arr})
    output_names = [o.name for o in session.get_outputs()]
    if expected_name and expected_name in output_names:
        got = outputs[output_names.index(expected_name)]
    else:
        got = outputs[0]

    if got.shape != expected.shape:
        print(f"FAIL: output shape {got.shape} != expected {expected.shape}")
        return 1
    if got.dtype != expected.dtype:
        print(f"FAIL: output dtype {got.dtype} != expected {expected.dtype}")
        return 1

    if expected.dtype == np.float16:
        gi = got.view(np.uint16).astype(np.int32)
        ei = expected.view(np.uint16).astype(np.int32)
        diff = np.abs(gi - ei)
        bad = diff > args.ulp_slack
    else:
        bad = got != expected
        diff = np.abs(got.astype(np.int64) - expected.astype(np.int64))

    if bad.any():
        count = int(bad.sum())
        worst = int(diff.max())
        idx = np.unravel_index(int(np.argmax(diff)), diff.shape)
        print(f"FAIL: {count}/{expected.size} elements differ, "
              f"worst |diff| {worst} at {idx} "
              f"(got {got[idx]}, expected {expected[idx]})")
        return 1

    print(f"PASS: {expected.size} output elements match "
          f"({expected.dtype}, ulp slack {args.ulp_slack})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
