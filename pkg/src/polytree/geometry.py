"""Plane primitives: points, similarities and convex polygons.

Points are Python ``complex`` numbers ``x + iy``.  Anything accepted by
:func:`as_point` (a complex, a real, or an ``(x, y)`` pair) can be passed where
a point is expected.

Every predicate takes an absolute tolerance ``tol``.  The owning
:class:`~polytree.system.PolygonalTreeSystem` derives it from its relative
epsilon and the diameter of ``P`` so that all predicates agree with each other.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_EPSILON_REL = 1e-9


class GeometryError(ValueError):
    """Raised for invalid geometric input (non-finite, non-convex, ...)."""


def as_point(p) -> complex:
    """Coerce ``p`` to a finite complex point."""
    if isinstance(p, (complex, float, int, np.number)):
        z = complex(p)
    else:
        x, y = p
        z = complex(float(x), float(y))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise GeometryError(f"non-finite point {p!r}")
    return z


def xy(p: complex) -> tuple[float, float]:
    return (p.real, p.imag)


def cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def dot(u: complex, v: complex) -> float:
    return u.real * v.real + u.imag * v.imag


# ---------------------------------------------------------------------------
# Similarities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Similarity:
    """Plane similarity ``z -> a*z + b`` (or ``a*conj(z) + b`` when ``conjugate``)."""

    a: complex
    b: complex
    conjugate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))
        object.__setattr__(self, "conjugate", bool(self.conjugate))
        if self.a == 0:
            raise GeometryError("similarity coefficient a must be non-zero")

    @property
    def ratio(self) -> float:
        return abs(self.a)

    def __call__(self, p) -> complex:
        return apply(self, p)

    def apply_array(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return self.a * (np.conj(z) if self.conjugate else z) + self.b

    def inverse(self) -> Similarity:
        # z = a*w + b  ->  w = (z - b)/a ;  z = a*conj(w) + b  ->  w = conj((z - b)/a)
        if self.conjugate:
            return Similarity(1 / self.a.conjugate(), -(self.b / self.a).conjugate(), True)
        return Similarity(1 / self.a, -self.b / self.a, False)

    def fixed_point(self) -> complex:
        """The unique fixed point; requires a contraction."""
        if self.ratio >= 1:
            raise GeometryError("fixed point requested for a non-contraction")
        if not self.conjugate:
            return self.b / (1 - self.a)
        # x = a*conj(x) + b, solved as a real 2x2 system
        ar, ai = self.a.real, self.a.imag
        m = np.array([[1 - ar, -ai], [-ai, 1 + ar]])
        x, y = np.linalg.solve(m, [self.b.real, self.b.imag])
        return complex(x, y)

    @classmethod
    def identity(cls) -> Similarity:
        return cls(1.0, 0.0, False)

    @classmethod
    def from_points(cls, p0, p1, q0, q1, conjugate: bool = False) -> Similarity:
        """The similarity with the given orientation sending p0->q0 and p1->q1."""
        p0, p1, q0, q1 = map(as_point, (p0, p1, q0, q1))
        if conjugate:
            p0, p1 = p0.conjugate(), p1.conjugate()
        a = (q1 - q0) / (p1 - p0)
        return cls(a, q0 - a * p0, conjugate)


def apply(s: Similarity, p) -> complex:
    z = as_point(p)
    return s.a * (z.conjugate() if s.conjugate else z) + s.b


def compose(s: Similarity, t: Similarity) -> Similarity:
    """``s o t``: apply ``t`` first, then ``s``."""
    # s(t(z)) with t(z) = a2*w + b2, w = z or conj(z)
    a1, b1, a2, b2 = s.a, s.b, t.a, t.b
    if s.conjugate:
        a2, b2 = a2.conjugate(), b2.conjugate()
    return Similarity(a1 * a2, a1 * b2 + b1, s.conjugate != t.conjugate)


def compose_word(maps: Sequence[Similarity], word: Iterable[int]) -> Similarity:
    """``S_{j1} o S_{j2} o ... o S_{jk}`` for a 1-based word ``j1 j2 ... jk``."""
    out = Similarity.identity()
    for j in word:
        out = compose(out, maps[j - 1])
    return out


# ---------------------------------------------------------------------------
# Convex polygons
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices."""

    vertices: tuple[complex, ...]

    def __init__(self, vertices, *, check: bool = True, tol: float | None = None):
        verts = tuple(as_point(v) for v in vertices)
        object.__setattr__(self, "vertices", verts)
        if check:
            self._check(tol)

    def _check(self, tol: float | None) -> None:
        n = len(self.vertices)
        if n < 3:
            raise GeometryError(f"a polygon needs at least 3 vertices, got {n}")
        if tol is None:
            tol = DEFAULT_EPSILON_REL * self.diameter
        for k in range(n):
            if abs(self.vertices[k] - self.vertices[(k + 1) % n]) <= tol:
                raise GeometryError(f"repeated vertex at index {k}")
        for k in range(n):
            u = self.vertices[k] - self.vertices[k - 1]
            v = self.vertices[(k + 1) % n] - self.vertices[k]
            # turning must be a strict left turn; scale-free via the edge lengths
            if cross(u, v) <= tol * (abs(u) + abs(v)):
                raise GeometryError(
                    f"polygon is not strictly convex and counterclockwise at vertex {k}"
                )

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=complex)

    @property
    def diameter(self) -> float:
        z = self.array
        return float(np.abs(z[:, None] - z[None, :]).max())

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)

    @property
    def centroid(self) -> complex:
        return complex(np.mean(self.array))

    def edges(self):
        n = self.n
        for k in range(n):
            yield self.vertices[k], self.vertices[(k + 1) % n]

    def vertex_index(self, p, tol: float) -> int | None:
        """Index of the vertex within ``tol`` of ``p`` (None if there is none)."""
        p = as_point(p)
        for k, v in enumerate(self.vertices):
            if abs(v - p) <= tol:
                return k
        return None

    def signed_distances(self, p) -> np.ndarray:
        """Signed distance of ``p`` to each edge line; positive means inside."""
        p = as_point(p)
        out = np.empty(self.n)
        for k, (a, b) in enumerate(self.edges()):
            out[k] = cross(b - a, p - a) / abs(b - a)
        return out

    def contains_point(self, p, tol: float = 0.0) -> bool:
        return bool(self.signed_distances(p).min() >= -tol)


def polygon_area(vertices: Sequence[complex]) -> float:
    n = len(vertices)
    if n < 3:
        return 0.0
    return 0.5 * sum(cross(vertices[k], vertices[(k + 1) % n]) for k in range(n))


def map_polygon(s: Similarity, poly: ConvexPolygon) -> ConvexPolygon:
    """Image of ``poly``; conjugate maps get their vertex order reversed.

    The image of vertex 0 stays at index 0, so for conjugate maps the vertex at
    output index ``k`` is the image of input vertex ``-k mod n``.
    """
    img = [apply(s, v) for v in poly.vertices]
    if s.conjugate:
        img = [img[0]] + img[:0:-1]
    return ConvexPolygon(img, check=False)


def contains(outer: ConvexPolygon, inner: ConvexPolygon, tol: float | None = None) -> bool:
    if tol is None:
        tol = DEFAULT_EPSILON_REL * outer.diameter
    return all(outer.contains_point(v, tol) for v in inner.vertices)


def point_segment_distance(p: complex, a: complex, b: complex) -> float:
    d = b - a
    t = dot(p - a, d) / dot(d, d)
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def point_polygon_distance(p, poly: ConvexPolygon) -> float:
    """Distance from ``p`` to the closed region bounded by ``poly``."""
    p = as_point(p)
    if poly.contains_point(p):
        return 0.0
    return min(point_segment_distance(p, a, b) for a, b in poly.edges())


def _segments_cross(a: complex, b: complex, c: complex, d: complex) -> bool:
    d1 = cross(b - a, c - a)
    d2 = cross(b - a, d - a)
    d3 = cross(d - c, a - c)
    d4 = cross(d - c, b - c)
    return d1 * d2 < 0 and d3 * d4 < 0


def polygon_distance(p1: ConvexPolygon, p2: ConvexPolygon) -> float:
    """Euclidean distance between the two closed convex regions."""
    if any(p2.contains_point(v) for v in p1.vertices) or any(
        p1.contains_point(v) for v in p2.vertices
    ):
        return 0.0
    for a, b in p1.edges():
        for c, d in p2.edges():
            if _segments_cross(a, b, c, d):
                return 0.0
    best = math.inf
    for v in p1.vertices:
        for c, d in p2.edges():
            best = min(best, point_segment_distance(v, c, d))
    for v in p2.vertices:
        for a, b in p1.edges():
            best = min(best, point_segment_distance(v, a, b))
    return best


def clip(subject: Sequence[complex], clipper: ConvexPolygon) -> list[complex]:
    """Sutherland-Hodgman clipping of a convex point list by the half-planes of ``clipper``."""
    out = list(subject)
    for a, b in clipper.edges():
        if not out:
            break
        e = b - a
        inp, out = out, []
        for k in range(len(inp)):
            cur, prev = inp[k], inp[k - 1]
            dc, dp = cross(e, cur - a), cross(e, prev - a)
            if dc >= 0:
                if dp < 0:
                    out.append(prev + (cur - prev) * (dp / (dp - dc)))
                out.append(cur)
            elif dp >= 0:
                out.append(prev + (cur - prev) * (dp / (dp - dc)))
    return out


def _diameter(points: Sequence[complex]) -> float:
    if len(points) < 2:
        return 0.0
    z = np.array(points, dtype=complex)
    return float(np.abs(z[:, None] - z[None, :]).max())


class Contact(enum.Enum):
    EMPTY = "empty"
    SHARED_VERTEX = "shared_vertex"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class IntersectionClass:
    tag: Contact
    point: complex | None = None

    def __bool__(self) -> bool:
        return self.tag is not Contact.EMPTY


def intersection_class(p1: ConvexPolygon, p2: ConvexPolygon, tol: float | None = None) -> IntersectionClass:
    """Classify ``p1 & p2`` as empty, a single common vertex, or anything else (overlap).

    A single-point touch that is not a vertex of both polygons is an overlap.
    """
    if tol is None:
        tol = DEFAULT_EPSILON_REL * max(p1.diameter, p2.diameter)
    region = clip(p1.vertices, p2)
    if _diameter(region) > tol:
        return IntersectionClass(Contact.OVERLAP)
    if polygon_distance(p1, p2) > tol:
        return IntersectionClass(Contact.EMPTY)
    touch = list(region)
    touch += [v for v in p1.vertices if point_polygon_distance(v, p2) <= tol]
    touch += [v for v in p2.vertices if point_polygon_distance(v, p1) <= tol]
    if not touch or _diameter(touch) > tol:
        return IntersectionClass(Contact.OVERLAP)
    i1 = p1.vertex_index(touch[0], tol)
    i2 = p2.vertex_index(touch[0], tol)
    if i1 is None or i2 is None:
        return IntersectionClass(Contact.OVERLAP)
    return IntersectionClass(Contact.SHARED_VERTEX, p1.vertices[i1])


def interiors_overlap(p1: ConvexPolygon, p2: ConvexPolygon, tol: float) -> bool:
    """True when the open interiors meet (the clipped region has positive area)."""
    region = clip(p1.vertices, p2)
    return abs(polygon_area(region)) > tol * max(p1.diameter, p2.diameter)


def vertex_angle(poly: ConvexPolygon, k: int) -> float:
    """Interior angle (radians) at the 0-based vertex ``k``."""
    if not 0 <= k < poly.n:
        raise IndexError(f"vertex index {k} out of range for {poly.n}-gon")
    v = poly.vertices[k]
    u = poly.vertices[k - 1] - v
    w = poly.vertices[(k + 1) % poly.n] - v
    return abs(cmath.phase(w / u))


def direction_angle(u: complex, v: complex) -> float:
    """Unsigned angle in [0, pi] between two direction vectors."""
    return abs(cmath.phase(v / u))
