#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Golden inputs/outputs for the corpus, from an independent numpy evaluator.

The evaluator parses the textual graph format itself and evaluates it in
float32 with the documented per-element operation order (accumulate from
zero in tap order, skip padded taps, ascending sums). Softmax uses a
float64 exp rounded to float32, so golden softmax values may differ from
the C++ interpreter by an ulp; tests compare those within a small ulp bound.

File format: u32 count, then `count` tensors in the wire tensor encoding
(u8 dtype, u8 ndim, u64 dims, raw little-endian payload).
"""
import argparse
import pathlib
import struct

import numpy as np

F32, I64 = 1, 2


def parse_graph(text):
    nodes, inputs, outputs = {}, [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("input "):
            _, name, spec = line.split(None, 2)
            inputs.append((name, spec_shape(spec)))
        elif line.startswith("const "):
            head, values = line.split("=", 1)
            _, name, spec = head.split(None, 2)
            arr = np.array([float(v) for v in values.split(",")], dtype=np.float32)
            nodes[name] = ("const", arr.reshape(spec_shape(spec.strip())))
        elif line.startswith("output "):
            outputs.append(line.split()[1])
        else:
            name, rhs = [s.strip() for s in line.split("=", 1)]
            kind, rest = rhs.split("(", 1)
            args, attrs_text = rest.split(")", 1)
            attrs = {}
            attrs_text = attrs_text.strip()
            if attrs_text:
                for kv in attrs_text.strip("{}").split(","):
                    k, v = kv.split("=")
                    attrs[k.strip()] = int(v)
            nodes[name] = (kind.strip(), [a.strip() for a in args.split(",")], attrs)
    return nodes, inputs, outputs


def spec_shape(spec):
    dims = spec[spec.index("[") + 1:spec.index("]")]
    return tuple(int(d) for d in dims.split(","))


def conv2d(x, k, stride, pad):
    n, c, h, w = x.shape
    o, _, kh, kw = k.shape
    oh = (h + 2 * pad - kh) // stride + 1
    ow = (w + 2 * pad - kw) // stride + 1
    out = np.zeros((n, o, oh, ow), dtype=np.float32)
    oy = np.arange(oh) * stride - pad
    ox = np.arange(ow) * stride - pad
    for ci in range(c):
        for ky in range(kh):
            iy = oy + ky
            vy = (iy >= 0) & (iy < h)
            for kx in range(kw):
                ix = ox + kx
                vx = (ix >= 0) & (ix < w)
                valid = vy[:, None] & vx[None, :]
                patch = x[:, ci][:, np.clip(iy, 0, h - 1)][:, :, np.clip(ix, 0, w - 1)]
                for oc in range(o):
                    prod = (k[oc, ci, ky, kx] * patch).astype(np.float32)
                    out[:, oc] = np.where(valid[None], out[:, oc] + prod, out[:, oc])
    return out


def maxpool(x, kernel, stride, pad):
    n, c, h, w = x.shape
    oh = (h + 2 * pad - kernel) // stride + 1
    ow = (w + 2 * pad - kernel) // stride + 1
    out = np.full((n, c, oh, ow), -np.inf, dtype=np.float32)
    oy = np.arange(oh) * stride - pad
    ox = np.arange(ow) * stride - pad
    for ky in range(kernel):
        iy = oy + ky
        vy = (iy >= 0) & (iy < h)
        for kx in range(kernel):
            ix = ox + kx
            vx = (ix >= 0) & (ix < w)
            valid = vy[:, None] & vx[None, :]
            patch = x[:, :, np.clip(iy, 0, h - 1)][:, :, :, np.clip(ix, 0, w - 1)]
            out = np.where(valid[None, None] & (patch > out), patch, out)
    return out


def matmul(a, b):
    a2 = a.reshape(a.shape[0], -1)
    out = np.zeros((a2.shape[0], b.shape[1]), dtype=np.float32)
    for t in range(a2.shape[1]):
        out = out + (a2[:, t:t + 1] * b[t:t + 1, :]).astype(np.float32)
    return out


def gap(x):
    n, c, h, w = x.shape
    flat = x.reshape(n, c, h * w)
    acc = np.zeros((n, c), dtype=np.float32)
    for i in range(h * w):
        acc = acc + flat[:, :, i]
    return (acc / np.float32(h * w)).astype(np.float32).reshape(n, c, 1, 1)


def softmax(x, axis):
    axis = axis % x.ndim
    m = np.max(x, axis=axis, keepdims=True)
    e = np.exp((x - m).astype(np.float64)).astype(np.float32)
    moved = np.moveaxis(e, axis, -1)
    acc = np.zeros(moved.shape[:-1], dtype=np.float32)
    for i in range(moved.shape[-1]):
        acc = acc + moved[..., i]
    return (e / np.expand_dims(acc, axis)).astype(np.float32)


def relu(x):
    return np.where(x < 0, np.float32(0), x).astype(np.float32)


def evaluate(graph, feeds):
    nodes, inputs, outputs = graph
    memo = dict(feeds)

    def value(name):
        if name in memo:
            return memo[name]
        node = nodes[name]
        if node[0] == "const":
            memo[name] = node[1]
            return node[1]
        kind, args, attrs = node
        vals = [value(a) for a in args]
        if kind == "conv2d":
            r = conv2d(vals[0], vals[1], attrs.get("stride", 1), attrs.get("pad", 0))
        elif kind == "relu":
            r = relu(vals[0])
        elif kind == "maxpool2d":
            r = maxpool(vals[0], attrs["kernel"], attrs.get("stride", 1), attrs.get("pad", 0))
        elif kind == "globalavgpool":
            r = gap(vals[0])
        elif kind == "matmul":
            r = matmul(vals[0], vals[1])
        elif kind == "add":
            r = (vals[0] + vals[1]).astype(np.float32)
        elif kind == "softmax":
            r = softmax(vals[0], attrs.get("axis", -1))
        elif kind == "argmax_top1":
            r = np.argmax(vals[0], axis=-1).astype(np.int64)
        else:
            raise ValueError(kind)
        memo[name] = r
        return r

    return [value(o) for o in outputs]


def encode(arrays):
    out = bytearray(struct.pack("<I", len(arrays)))
    for a in arrays:
        code = F32 if a.dtype == np.float32 else I64
        out += struct.pack("<BB", code, a.ndim)
        for d in a.shape:
            out += struct.pack("<Q", d)
        out += a.astype("<f4" if code == F32 else "<i8").tobytes()
    return bytes(out)


def seeded_input(shape, seed):
    # Values are multiples of 1/256 in [-2, 2] so the payload is exact.
    rng = np.random.default_rng(seed)
    return (rng.integers(-512, 513, size=shape) / 256.0).astype(np.float32)


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default=str(root / "corpus"))
    ap.add_argument("--out", default=str(root / "tests" / "golden" / "corpus"))
    ap.add_argument("--count", type=int, default=2)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for path in sorted(pathlib.Path(args.corpus).glob("*.gph")):
        graph = parse_graph(path.read_text())
        (in_name, shape), = graph[1]
        ins, outs = [], []
        for i in range(args.count):
            x = seeded_input(shape, 1000 + i)
            ins.append(x)
            outs.extend(evaluate(graph, {in_name: x}))
        (out / f"{path.stem}.inputs.bin").write_bytes(encode(ins))
        (out / f"{path.stem}.outputs.bin").write_bytes(encode(outs))
        print(f"{path.stem}: {len(ins)} inputs, {len(outs)} outputs")


if __name__ == "__main__":
    main()
