#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes the model corpus (corpus/*.gph) with seeded weights.

Every weight is a multiple of 1/64 so the decimal text is exact in f32.
Re-running the script reproduces the committed files byte for byte.
"""
import argparse
import pathlib

import numpy as np


def literal(values):
    return ",".join(repr(float(v)) for v in values)


def weights(rng, shape, span=16):
    return rng.integers(-span, span + 1, size=int(np.prod(shape))) / 64.0


def const(name, shape, values):
    dims = ",".join(str(d) for d in shape)
    return f"const {name} f32[{dims}] = {literal(values)}"


def classifier_body(rng, in_channels):
    bias_a = weights(rng, (1, 10), span=4)
    lines = [
        const("k1", (8, in_channels, 3, 3), weights(rng, (8, in_channels, 3, 3))),
        const("k2", (16, 8, 3, 3), weights(rng, (16, 8, 3, 3))),
        const("w", (16, 10), weights(rng, (16, 10))),
        "# bias = bias_a + bias_b is exactly zero and folds to a constant at compile time",
        const("bias_a", (1, 10), bias_a),
        const("bias_b", (1, 10), -bias_a),
        "c1 = conv2d(x, k1) {stride=1,pad=1}",
        "r1 = relu(c1)",
        "p1 = maxpool2d(r1) {kernel=2,stride=2}",
        "c2 = conv2d(p1, k2) {stride=1,pad=1}",
        "r2 = relu(c2)",
        "g = globalavgpool(r2)",
        "logits = matmul(g, w)",
        "bias = add(bias_a, bias_b)",
        "scores = add(logits, bias)",
        "probs = softmax(scores) {axis=-1}",
        "# not reachable from any output; removed by dce",
        "unused = relu(bias_a)",
        "output probs",
    ]
    return lines


def tiny_classifier(rng):
    return ["# tiny-classifier: 10-way image classifier",
            "input x f32[1,3,32,32]"] + classifier_body(rng, 3)


def tiny_video(rng):
    return ["# tiny-video: 16 RGB frames stacked into 48 channels",
            "input x f32[1,48,32,32]"] + classifier_body(rng, 48)


def tiny_segmenter(rng):
    return [
        "# tiny-segmenter: 5-class per-pixel labelling, spatial size preserved",
        "input x f32[1,3,32,32]",
        const("k1", (8, 3, 3, 3), weights(rng, (8, 3, 3, 3))),
        const("k2", (8, 8, 3, 3), weights(rng, (8, 8, 3, 3))),
        const("k3", (5, 8, 1, 1), weights(rng, (5, 8, 1, 1))),
        "c1 = conv2d(x, k1) {stride=1,pad=1}",
        "r1 = relu(c1)",
        "c2 = conv2d(r1, k2) {stride=1,pad=1}",
        "r2 = relu(c2)",
        "logits = conv2d(r2, k3)",
        "output logits",
    ]


MODELS = {
    "tiny-classifier": (tiny_classifier, 101),
    "tiny-segmenter": (tiny_segmenter, 202),
    "tiny-video": (tiny_video, 303),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "corpus"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, (build, seed) in MODELS.items():
        rng = np.random.default_rng(seed)
        text = "\n".join(build(rng)) + "\n"
        (out / f"{name}.gph").write_text(text)
        print(f"wrote {out / name}.gph")


if __name__ == "__main__":
    main()
