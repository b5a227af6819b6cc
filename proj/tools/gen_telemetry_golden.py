#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes a seeded 1,000-frame latency stream and its summary, computed independently."""
import math
import pathlib
import sys
from fractions import Fraction

import numpy as np

STAGES = ["acquire", "preprocess", "serialize", "network", "inference",
          "deserialize", "postprocess", "publish"]


def make_stream(n, seed):
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        comps = [
            int(rng.integers(2000, 4000)),      # acquire
            int(rng.integers(300, 900)),        # preprocess
            int(rng.integers(0, 200)),          # serialize
            int(rng.integers(0, 40000)),        # network
            int(rng.integers(5000, 120000)),    # inference
            int(rng.integers(0, 200)),          # deserialize
            int(rng.integers(10, 80)),          # postprocess
            int(rng.integers(1, 30)),           # publish
        ]
        e2e = sum(comps) + int(rng.integers(0, 1500))
        rows.append(comps + [e2e])
    return rows


def nearest_rank(sorted_vals, p):
    rank = max(1, math.ceil(p * len(sorted_vals) / 100))
    return sorted_vals[rank - 1]


def summary_csv(rows):
    n = len(rows)
    names = STAGES + ["end_to_end"]
    fps = Fraction(n * 1_000_000, sum(r[-1] for r in rows))
    fps_text = "%.6f" % float(fps)
    means = [sum(r[i] for r in rows) / n for i in range(len(names))]
    out = ["stage,frames,mean_us,p50_us,p95_us,max_us,share_pct,fps"]
    for i, name in enumerate(names):
        col = sorted(r[i] for r in rows)
        share = means[i] / means[-1] * 100.0
        out.append("%s,%d,%.3f,%d,%d,%d,%.3f,%s" % (
            name, n, means[i], nearest_rank(col, 50), nearest_rank(col, 95), col[-1], share, fps_text))
    return "\n".join(out) + "\n"


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = make_stream(1000, 2024)
    header = ",".join(s + "_us" for s in STAGES + ["end_to_end"])
    (out / "stream.csv").write_text(header + "\n" + "\n".join(",".join(map(str, r)) for r in rows) + "\n")
    (out / "summary.csv").write_text(summary_csv(rows))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/golden/telemetry")
