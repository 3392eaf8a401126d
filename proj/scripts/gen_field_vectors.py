#!/usr/bin/env python3
"""Generates tests/vectors/field_ops.json: exact expected values for base and
scalar field arithmetic, computed with Python big integers."""

import hashlib
import json
from pathlib import Path

P = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB
R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001


def h(tag, i):
    return int.from_bytes(hashlib.sha256(f"{tag}-{i}".encode()).digest(), "big")


def fp_hex(v):
    return f"{v:096x}"


def fr_hex(v):
    return f"{v:064x}"


def main():
    cases = {"fp": [], "fr": [], "fp_wide": [], "fr_wide": []}
    for i in range(8):
        a = h("fp-a", i) * h("fp-a2", i) % P
        b = h("fp-b", i) * h("fp-b2", i) % P
        cases["fp"].append({
            "a": fp_hex(a),
            "b": fp_hex(b),
            "add": fp_hex((a + b) % P),
            "sub": fp_hex((a - b) % P),
            "mul": fp_hex(a * b % P),
            "inv": fp_hex(pow(a, P - 2, P)),
            "square": fp_hex(a * a % P),
        })
        a = h("fr-a", i) % R
        b = h("fr-b", i) % R
        cases["fr"].append({
            "a": fr_hex(a),
            "b": fr_hex(b),
            "add": fr_hex((a + b) % R),
            "sub": fr_hex((a - b) % R),
            "mul": fr_hex(a * b % R),
            "inv": fr_hex(pow(a, R - 2, R)),
        })
    for i in range(8):
        wide = hashlib.sha256(f"wide-{i}".encode()).digest() + hashlib.sha256(
            f"wide2-{i}".encode()).digest()
        v = int.from_bytes(wide, "big")
        hi, lo = v >> 256, v & ((1 << 256) - 1)
        cases["fp_wide"].append({
            "in": wide.hex(),
            "out": fp_hex((hi * (1 << 256) + lo) % P),
        })
        cases["fr_wide"].append({
            "in": wide.hex(),
            "out": fr_hex((hi * (1 << 256) + lo) % R),
        })
    out = Path(__file__).resolve().parent.parent / "tests" / "vectors" / "field_ops.json"
    out.write_text(json.dumps(cases, indent=1) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
