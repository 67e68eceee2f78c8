"""Independent reference computations used to derive frozen test values.

Nothing here calls into the library's geometry beyond plain data access, so a
bug in a library routine cannot also hide in its oracle.
"""

from __future__ import annotations

import math

import numpy as np


def affine_matrix(a: complex, b: complex, conjugate: bool) -> np.ndarray:
    """3x3 homogeneous matrix of z -> a z + b (or a conj(z) + b)."""
    m = np.array([[a.real, -a.imag], [a.imag, a.real]])
    if conjugate:
        m = m @ np.diag([1.0, -1.0])
    out = np.eye(3)
    out[:2, :2] = m
    out[:2, 2] = [b.real, b.imag]
    return out


def apply_matrix(mat: np.ndarray, p: complex) -> complex:
    x, y, _ = mat @ np.array([p.real, p.imag, 1.0])
    return complex(x, y)


def fixed_point_linear(a: complex, b: complex, conjugate: bool) -> complex:
    """Solve z = S(z) as a real 2x2 linear system."""
    mat = affine_matrix(a, b, conjugate)
    x, y = np.linalg.solve(np.eye(2) - mat[:2, :2], mat[:2, 2])
    return complex(x, y)


def hata_vertices() -> list[complex]:
    """Vertices of the Hata polygon from its labelling A1=S1(A1), A4=S2(A4), ...."""
    s1 = ((1 + 1j) / 2, 0j, True)
    s2 = (0.5 + 0j, 0.5 + 0j, True)
    m1, m2 = affine_matrix(*s1), affine_matrix(*s2)
    a1 = fixed_point_linear(*s1)
    a4 = fixed_point_linear(*s2)
    a5 = apply_matrix(m1, a4)
    a3 = apply_matrix(m2, a5)
    a6 = apply_matrix(m1, a3)
    a2 = apply_matrix(m2, a6)
    a7 = apply_matrix(m1, a2)
    return [a1, a2, a3, a4, a5, a6, a7]


def sampled_boundary(vertices, per_edge: int) -> np.ndarray:
    vs = np.array(vertices, dtype=complex)
    t = np.linspace(0.0, 1.0, per_edge, endpoint=False)
    return np.concatenate([a + (b - a) * t for a, b in zip(vs, np.roll(vs, -1))])


def sampled_point_distance(p: complex, vertices, samples: int = 10_000) -> float:
    """Distance to a convex polygon's boundary by dense sampling (p assumed outside)."""
    pts = sampled_boundary(vertices, max(2, samples // len(vertices)))
    return float(np.abs(pts - p).min())


def sampled_polygon_distance(v1, v2, samples: int = 10_000) -> float:
    a = sampled_boundary(v1, max(2, samples // len(v1)))
    b = sampled_boundary(v2, max(2, samples // len(v2)))
    return float(np.abs(a[:, None] - b[None, :]).min())


def angle_between(u: complex, v: complex) -> float:
    """Angle in [0, pi] via the dot product formula."""
    c = (u.real * v.real + u.imag * v.imag) / (abs(u) * abs(v))
    return math.acos(max(-1.0, min(1.0, c)))


def brute_fiber_count(cells, vertex: complex, tol: float) -> int:
    """Number of cells having ``vertex`` among their corners."""
    return sum(1 for c in cells if min(abs(v - vertex) for v in c.polygon.vertices) <= tol)


def ratio_beta(ratios, ratios2) -> tuple[float, float]:
    b = min(math.log(r2) / math.log(r) for r, r2 in zip(ratios, ratios2))
    bp = min(math.log(r) / math.log(r2) for r, r2 in zip(ratios, ratios2))
    return b, bp
