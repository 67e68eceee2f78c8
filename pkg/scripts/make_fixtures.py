"""Regenerate the bundled spec files in src/polytree/fixtures/."""

import cmath
import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "polytree" / "fixtures"


def pair(z):
    z = complex(z)
    return [z.real, z.imag]


def spec(name, polygon, maps):
    return {
        "name": name,
        "polygon": [pair(v) for v in polygon],
        "maps": [{"a": pair(a), "b": pair(b), "conjugate": c} for a, b, c in maps],
    }


def ex22(r=0.5, name="ex22"):
    # S1 = r z fixes A1; S2 = c z + 1 walks A1->A2->A3->A4 and S1(A3) = S2(A4) forces c^2 = r - 1
    c = 1j * math.sqrt(1 - r)
    polygon = [0, 1, 1 + c, 1 + c + c * c]
    return spec(name, polygon, [(r, 0, False), (c, 1, False)])


def hata():
    polygon = [0, 0.625 - 0.25j, 0.75 - 0.25j, 1, 0.5 + 0.5j, 0.25 + 0.5j, 0.1875 + 0.4375j]
    return spec("hata", polygon, [((1 + 1j) / 2, 0, True), (0.5, 0.5, True)])


def ex24():
    # kite A, B, C, D with angles 30, 110, 110, 110 degrees, diagonal AC = 1
    t15, t55 = math.tan(math.radians(15)), math.tan(math.radians(55))
    bx = t55 / (t15 + t55)
    by = bx * t15
    A, B, C, D = 0, complex(bx, -by), 1, complex(bx, by)
    big = 0.698  # S1 fixes A
    tip = 0.112  # C-kite pointing left, its far vertex at 1 - tip
    side = 0.13  # C-kites along CD and CB
    stub = 0.096  # kites hanging off S1(C)
    maps = [
        (big, A, False),
        (1 - big, big * D, False),
        (1 - big, big * B, False),
        (-(1 - tip - big), 1 - tip, False),
        (side * cmath.exp(1j * math.radians(140)), C, False),
        (-tip, C, False),
        (side * cmath.exp(-1j * math.radians(140)), C, False),
        (1j * stub, big, False),
        (-1j * stub, big, False),
    ]
    return spec("ex24", [A, B, C, D], maps)


def zipper():
    apex = 0.5 + 0.3j
    return spec("zipper", [0, 1, apex], [(apex, 0, True), (apex.conjugate(), 1 - apex.conjugate(), True)])


def overlap():
    doc = ex22()
    doc["name"] = "overlap"
    doc["maps"][1] = {"a": [0.5, 0.0], "b": [0.25, 0.0], "conjugate": False}
    return doc


def disjoint():
    return spec("disjoint", [0, 1, 1 + 1j, 1j], [(0.25, 0, False), (0.25, 0.75 + 0.75j, False)])


def dump(doc):
    lines = ["{", f'  "name": {json.dumps(doc["name"])},', '  "polygon": [']
    lines += [f"    {json.dumps(v)}," for v in doc["polygon"]]
    lines[-1] = lines[-1].rstrip(",")
    lines += ["  ],", '  "maps": [']
    lines += [f"    {json.dumps(m)}," for m in doc["maps"]]
    lines[-1] = lines[-1].rstrip(",")
    lines += ["  ]", "}", ""]
    return "\n".join(lines)


if __name__ == "__main__":
    docs = [ex22(), ex22(0.25, "ex22_variant"), hata(), ex24(), zipper(), overlap(), disjoint()]
    for doc in docs:
        (OUT / f"{doc['name']}.json").write_text(dump(doc), encoding="utf-8")
        print("wrote", doc["name"])
