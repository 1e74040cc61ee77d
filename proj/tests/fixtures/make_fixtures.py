# Copyright 2026 The qscope Authors. All Rights Reserved.
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
"""Regenerates the checked-in graph, config, platform and sweep fixtures.

Run from this directory: python3 make_fixtures.py
"""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent
ACC = 32


class Builder:
    def __init__(self):
        self.nodes = []
        self.edges = []
        self.inputs = []
        self.outputs = []

    def node(self, id_, kind, attrs=None):
        n = {"id": id_, "kind": kind}
        if attrs is not None:
            n["attrs"] = attrs
        self.nodes.append(n)
        return id_

    def edge(self, src, dst, dims, bits):
        self.edges.append({"src": src, "dst": dst, "dims": list(dims), "bit_width": bits})
        idx = len(self.edges) - 1
        if src == "@input":
            self.inputs.append(idx)
        if dst == "@output":
            self.outputs.append(idx)

    def doc(self):
        return {"format_version": 1, "nodes": self.nodes, "edges": self.edges,
                "inputs": self.inputs, "outputs": self.outputs}


def conv_attrs(c_in, c_out, k, h_in, stride=1, padding=0, depthwise=False):
    h_out = (h_in + 2 * padding - k) // stride + 1
    return {"c_in": c_in, "c_out": c_out, "k_h": k, "k_w": k, "h_in": h_in, "w_in": h_in,
            "h_out": h_out, "w_out": h_out, "stride": stride, "padding": padding,
            "depthwise": depthwise}


def conv_relu_quant(b, prefix, src, attrs, in_bits):
    conv = b.node(prefix, "Conv", attrs)
    b.edge(src, conv, (attrs["h_in"], attrs["w_in"], attrs["c_in"]), in_bits)
    out = (attrs["h_out"], attrs["w_out"], attrs["c_out"])
    relu = b.node(prefix + "_relu", "Act")
    b.edge(conv, relu, out, ACC)
    quant = b.node(prefix + "_quant", "Quant")
    b.edge(relu, quant, out, ACC)
    return quant, out


# Depthwise-separable blocks (c_in, c_out, stride) on a 32x32x3 input.
BLOCKS = [(32, 64, 1), (64, 128, 2), (128, 128, 1), (128, 256, 2), (256, 256, 1),
          (256, 512, 2), (512, 512, 1), (512, 512, 1), (512, 512, 1), (512, 512, 1)]


def mobilenet():
    b = Builder()
    src, shape = conv_relu_quant(b, "pilot", "@input", conv_attrs(3, 32, 3, 32, 1, 1), 8)
    for i, (c_in, c_out, stride) in enumerate(BLOCKS, start=1):
        h = shape[0]
        src, shape = conv_relu_quant(b, f"b{i}_dw", src,
                                     conv_attrs(c_in, c_in, 3, h, stride, 1, True), 8)
        src, shape = conv_relu_quant(b, f"b{i}_pw", src, conv_attrs(c_in, c_out, 1, shape[0]), 8)
    pool = b.node("pool", "MaxPool", {"k_h": shape[0], "k_w": shape[1]})
    b.edge(src, pool, shape, 8)
    fc = b.node("classifier", "Gemm", {"c_in": 512, "c_out": 10})
    b.edge(pool, fc, (1, 1, 512), 8)
    q = b.node("classifier_quant", "Quant")
    b.edge(fc, q, (10,), ACC)
    b.edge(q, "@output", (10,), 8)
    return b.doc()


def small_chain():
    b = Builder()
    conv = b.node("Conv_0", "Conv", conv_attrs(3, 8, 3, 6))
    b.edge("@input", conv, (6, 6, 3), 8)
    q0 = b.node("Quant_0", "Quant")
    b.edge(conv, q0, (4, 4, 8), ACC)
    act = b.node("Relu_0", "Act")
    b.edge(q0, act, (4, 4, 8), 8)
    fc = b.node("Gemm_0", "Gemm", {"c_in": 128, "c_out": 10})
    b.edge(act, fc, (4, 4, 8), 8)
    q1 = b.node("Quant_1", "Quant")
    b.edge(fc, q1, (10,), ACC)
    b.edge(q1, "@output", (10,), 8)
    return b.doc()


def matmul_graph():
    b = Builder()
    q = b.node("Quant_0", "Quant")
    b.edge("@input", q, (16,), ACC)
    mm = b.node("MatMul_0", "MatMul", {"c_in": 16, "c_out": 8})
    b.edge(q, mm, (16,), 8)
    relu = b.node("Relu_0", "Act")
    b.edge(mm, relu, (8,), ACC)
    b.edge(relu, "@output", (8,), ACC)
    return b.doc()


def cyclic_graph():
    doc = matmul_graph()
    doc["edges"].append({"src": "Relu_0", "dst": "Quant_0", "dims": [8], "bit_width": ACC})
    return doc


def entry(impl, bits=None):
    lines = [f"  implementation: {impl}"]
    if bits is not None:
        lines.append(f"  bit_width: {bits}")
    return lines


def case_config(block_plan, classifier, header):
    """block_plan: {block index: (impl, bits)} for blocks 1..10."""
    out = [f"# {header}", "defaults:", "  Quant:", "    implementation: thresholds",
           "    bit_width: 8", "pilot:"]
    out += entry("im2col", 8)
    out += ["pilot_quant:"] + entry("thresholds", 8)
    for i in range(1, 11):
        impl, bits = block_plan[i]
        for part in ("dw", "pw"):
            out += [f"b{i}_{part}:"] + entry(impl, bits)
            out += [f"b{i}_{part}_quant:"] + entry("thresholds", bits)
    out += ["classifier:"] + entry(*classifier)
    return "\n".join(out) + "\n"


def plans():
    case1 = {i: ("im2col", 8) for i in range(1, 11)}
    case2 = {i: ("im2col", 4) for i in range(1, 8)}
    case2.update({i: ("lut", 4) for i in (8, 9, 10)})
    case3 = {1: ("im2col", 8)}
    case3.update({i: ("im2col", 4) for i in range(2, 6)})
    case3.update({i: ("lut", 4) for i in range(6, 10)})
    case3[10] = ("lut", 2)
    return {
        "case1": (case1, ("gemm", 8), "all layers int8"),
        "case2": (case2, ("gemm", 8), "int4 blocks, table lookup on blocks 8-10"),
        "case3": (case3, ("lut", 4), "mixed int8/int4/int2 with table lookup from block 6"),
    }


MATMUL_CONFIG = """\
    Quant_0:
        implementation: thresholds
        bit_width: 8
    MatMul_0:
        filter_wise: True
        implementation: LUT
        bit_width: 8
    Relu_0:
      implementation: comparator
    ...
"""

SMALL_CHAIN_CONFIG = """\
defaults:
  Conv:
    implementation: im2col
    bit_width: 8
  Gemm:
    implementation: gemm
    bit_width: 8
  Quant:
    implementation: dyadic
    bit_width: 8
"""


def dump(name, doc):
    (HERE / name).write_text(json.dumps(doc, indent=2) + "\n")


def main():
    dump("mobilenet_v1_32.json", mobilenet())
    dump("small_chain.json", small_chain())
    dump("matmul_graph.json", matmul_graph())
    dump("cyclic.json", cyclic_graph())
    (HERE / "matmul_config.yaml").write_text(MATMUL_CONFIG)
    (HERE / "small_chain_defaults.yaml").write_text(SMALL_CHAIN_CONFIG)
    for name, (plan, classifier, header) in plans().items():
        (HERE / f"{name}.yaml").write_text(case_config(plan, classifier, header))
    dump("platform_8core.json", {"num_cores": 8, "num_banks": 16, "l1_bytes": "64 kB",
                                 "l2_bytes": "512 kB"})
    dump("platform_tiny.json", {"num_cores": 2, "num_banks": 4, "l1_bytes": 1024,
                                "l2_bytes": 2048})
    variants = [{"label": "case1", "impl_config_path": "case1.yaml", "accuracy": 0.83},
                {"label": "case2", "impl_config_path": "case2.yaml", "accuracy": 0.77},
                {"label": "case3", "impl_config_path": "case3.yaml", "accuracy": 0.78}]
    dump("sweep_grid.json", {"graph": "mobilenet_v1_32.json", "platform": "platform_8core.json",
                             "cores": [2, 4, 8], "l2_kb": [256, 320, 512],
                             "variants": variants})
    dump("sweep_single.json", {"graph": "mobilenet_v1_32.json",
                               "platform": "platform_8core.json", "cores": [8],
                               "l2_kb": [512], "variants": variants[1:2]})
    (HERE / "sweep_malformed.json").write_text('{"cores": [2, 4], "l2_kb": 256,\n')


if __name__ == "__main__":
    main()
