#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes golden wire frames with struct packing, independent of the C++ encoder."""
import hashlib
import pathlib
import struct
import sys

F32, I64, U8 = 1, 2, 3
FMT = {F32: "f", I64: "q", U8: "B"}


def tensor(dtype, dims, values):
    out = struct.pack("<BB", dtype, len(dims))
    out += b"".join(struct.pack("<Q", d) for d in dims)
    out += struct.pack("<%d%s" % (len(values), FMT[dtype]), *values)
    return out


def frame(msg_type, request_id, body):
    return b"GOWP" + struct.pack("<HBQI", 1, msg_type, request_id, len(body)) + body


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plan_hash = bytes(range(32))
    frames = {
        "ping": frame(4, 0x0102030405060708, b""),
        "pong": frame(5, 0x0102030405060708, b""),
        "infer_request": frame(1, 7, plan_hash + struct.pack("<H", 1) + tensor(F32, [1, 2], [1.0, 2.0])),
        "infer_request_empty": frame(1, 8, plan_hash + struct.pack("<H", 0)),
        "infer_response": frame(
            2,
            7,
            struct.pack("<H", 2)
            + tensor(I64, [1], [3])
            + tensor(F32, [2], [0.5, -0.25])
            + struct.pack("<QQQ", 1234, 56, 78),
        ),
        "error": frame(3, 9, struct.pack("<H", 3) + "unknown plan".encode("utf-8")),
        "list_plans_request": frame(6, 10, b""),
        "list_plans_response": frame(
            7, 11, struct.pack("<I", 2) + hashlib.sha256(b"a").digest() + hashlib.sha256(b"b").digest()
        ),
    }
    for name, data in frames.items():
        (out / (name + ".bin")).write_bytes(data)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/golden/wire")
