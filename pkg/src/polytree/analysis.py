"""Metric constants, order caps and the bounded-turning estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from .attractor import address_of, cell, vertex_fiber
from .geometry import Contact, direction_angle, point_polygon_distance, polygon_distance, vertex_angle
from .maintree import (
    CombinatorialTree,
    SkeletonTree,
    combinatorial_main_tree,
    skeleton_tree,
)
from .system import AxiomError, PolygonalTreeSystem, _pair_classes, contact_graph


def snapped_ceil(x: float, rel: float = 1e-9) -> int:
    """Ceiling that treats values within rounding noise of an integer as that integer."""
    r = round(x)
    if abs(x - r) <= rel * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


# ---------------------------------------------------------------------------
# Separation and contact angle
# ---------------------------------------------------------------------------


def compute_rho(sys: PolygonalTreeSystem) -> float:
    """Smallest gap between a vertex of P and a piece avoiding it, or between disjoint pieces."""
    tol = sys.tol
    best = math.inf
    for a in sys.vertices:
        for poly in sys.subpolygons:
            if not poly.contains_point(a, tol):
                best = min(best, point_polygon_distance(a, poly))
    subs = sys.subpolygons
    for i, j, cls in _pair_classes(sys):
        if cls.tag is Contact.EMPTY:
            best = min(best, polygon_distance(subs[i - 1], subs[j - 1]))
    return best


def _sides_at(poly, z: complex, tol: float) -> list[complex]:
    k = poly.vertex_index(z, tol)
    v = poly.vertices[k]
    return [poly.vertices[k - 1] - v, poly.vertices[(k + 1) % poly.n] - v]


def compute_alpha(sys: PolygonalTreeSystem) -> float:
    """Smallest angle between sides of two pieces meeting at a shared vertex."""
    cg = contact_graph(sys)
    if not cg.contacts:
        raise AxiomError("no two pieces share a vertex")
    tol = sys.tol
    best = math.pi
    for c, z in enumerate(cg.contacts):
        for i, j in combinations(cg.polygons_at(c), 2):
            for u in _sides_at(sys.subpolygons[i - 1], z, tol):
                for w in _sides_at(sys.subpolygons[j - 1], z, tol):
                    best = min(best, direction_angle(u, w))
    return best


def bt_formula(diam: float, rho: float, alpha: float) -> float:
    return diam / (rho * math.sin(alpha / 2))


def bt_constant(sys: PolygonalTreeSystem) -> float:
    return bt_formula(sys.diam, compute_rho(sys), compute_alpha(sys))


def vertex_angles(sys: PolygonalTreeSystem) -> list[float]:
    return [vertex_angle(sys.polygon, k) for k in range(sys.n)]


@dataclass(frozen=True)
class MetricConstants:
    rho: float
    alpha: float
    theta_min: float
    theta_max: float
    q: float
    diamP: float

    @property
    def bt_constant(self) -> float:
        return bt_formula(self.diamP, self.rho, self.alpha)


def metric_constants(sys: PolygonalTreeSystem) -> MetricConstants:
    th = vertex_angles(sys)
    return MetricConstants(compute_rho(sys), compute_alpha(sys), min(th), max(th), sys.q, sys.diam)


# ---------------------------------------------------------------------------
# Empirical bounded turning
# ---------------------------------------------------------------------------


def path_diameter(points: np.ndarray) -> float:
    """Largest distance between two of the given complex points."""
    if len(points) < 2:
        return 0.0
    xy = np.column_stack([points.real, points.imag])
    if len(xy) > 512:
        try:
            xy = xy[ConvexHull(xy).vertices]
        except QhullError:
            # degenerate hull: the points lie on a line, so project onto it
            far = points[np.argmax(np.abs(points - points[0]))] - points[0]
            t = (points * np.conj(far / abs(far))).real
            return float(t.max() - t.min())
    return float(pdist(xy).max())


@dataclass(frozen=True)
class EmpiricalBT:
    max_ratio: float
    witness: tuple[complex, complex]
    samples: int

    def to_dict(self) -> dict:
        a, b = self.witness
        return {
            "max_ratio": self.max_ratio,
            "witness": [[a.real, a.imag], [b.real, b.imag]],
            "samples": self.samples,
        }


def empirical_bt(
    sys: PolygonalTreeSystem,
    depth: int,
    samples: int = 1000,
    seed: int = 0,
    skeleton: SkeletonTree | None = None,
) -> EmpiricalBT:
    """Largest ratio diam(path)/distance over random pairs of skeleton nodes."""
    sk = skeleton or skeleton_tree(sys, depth)
    pts = sk.points
    if len(pts) < 2:
        raise ValueError("skeleton has fewer than two nodes")
    rng = np.random.default_rng(seed)
    best, witness = 0.0, (complex(pts[0]), complex(pts[0]))
    done = 0
    attempts = 0
    while done < samples:
        attempts += 1
        if attempts > 100 * samples:
            raise RuntimeError("could not draw enough non-degenerate pairs")
        a, b = (int(x) for x in rng.integers(0, len(pts), size=2))
        d = abs(pts[a] - pts[b])
        if d <= sys.tol:
            continue  # degenerate pair, draw again
        ratio = path_diameter(pts[sk.path(a, b)]) / d
        if ratio > best:
            best, witness = ratio, (complex(pts[a]), complex(pts[b]))
        done += 1
    return EmpiricalBT(best, witness, samples)


# ---------------------------------------------------------------------------
# Orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexOrder:
    vertex: int
    fiber_count: int
    skeleton_degree: int
    order_in_K: int  # sum of main-tree orders over the cells meeting at the vertex
    cap: int

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "fiber_count": self.fiber_count,
            "skeleton_degree": self.skeleton_degree,
            "order_in_K": self.order_in_K,
            "cap": self.cap,
        }


@dataclass
class OrderReport:
    n: int
    theta_min: float
    theta_max: float
    cap_single: int
    cap_vertex: int
    cap_cutpoint: int
    depth: int
    vertices: list[VertexOrder] = field(default_factory=list)
    max_skeleton_degree: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "depth": self.depth,
            "theta_min_rad": self.theta_min,
            "theta_max_rad": self.theta_max,
            "caps": {"single": self.cap_single, "vertex": self.cap_vertex, "cutpoint": self.cap_cutpoint},
            "max_skeleton_degree": self.max_skeleton_degree,
            "vertices": [v.to_dict() for v in self.vertices],
        }


def order_caps(n: int, theta_min: float, theta_max: float) -> tuple[int, int, int]:
    """``(n-1, (n-1)(ceil(max/min)-1), (n-1)(ceil(2pi/min)-1))``."""
    return (
        n - 1,
        (n - 1) * (snapped_ceil(theta_max / theta_min) - 1),
        (n - 1) * (snapped_ceil(2 * math.pi / theta_min) - 1),
    )


def order_bounds(
    sys: PolygonalTreeSystem, depth: int = 4, skeleton: SkeletonTree | None = None
) -> OrderReport:
    th = vertex_angles(sys)
    single, per_vertex, cut = order_caps(sys.n, min(th), max(th))
    base = combinatorial_main_tree(sys)
    sk = skeleton or skeleton_tree(sys, depth, base=base)
    degrees = sk.degrees
    rows = []
    for i in range(1, sys.n + 1):
        fiber = vertex_fiber(sys, i, depth)
        k_order = sum(base.degree(b.end_vertex - 1) for b in fiber.branches)
        cap = single if fiber.count == 1 else per_vertex
        rows.append(VertexOrder(i, fiber.count, degrees[sk.vertex_nodes[i]], k_order, cap))
    return OrderReport(
        sys.n, min(th), max(th), single, per_vertex, cut, sk.depth, rows, max(degrees, default=0)
    )


def point_order_estimate(
    sys: PolygonalTreeSystem, p, depth: int, base: CombinatorialTree | None = None
) -> int | None:
    """Order of ``p`` in K when ``p`` is a vertex of every depth-``depth`` cell containing it.

    Each such cell meets the rest of K only through its vertices, so the order
    is the sum of the main-tree orders of the corresponding vertices.  Returns
    None when ``p`` lies inside some cell rather than at one of its vertices.
    """
    base = base or combinatorial_main_tree(sys)
    total = 0
    words = address_of(sys, p, depth)
    if not words:
        return None
    for word in sorted(words):
        c = cell(sys, word)
        k = c.polygon.vertex_index(p, sys.tol)
        if k is None:
            return None
        l = c.similarity.inverse()(p)
        j = sys.vertex_index(l)
        if j is None:
            return None
        total += base.degree(j - 1)
    return total


def metrics_report(
    sys: PolygonalTreeSystem, depth: int = 8, samples: int = 1000, seed: int = 0
) -> dict:
    mc = metric_constants(sys)
    single, per_vertex, cut = order_caps(sys.n, mc.theta_min, mc.theta_max)
    emp = empirical_bt(sys, depth, samples, seed)
    return {
        "name": sys.name,
        "rho": mc.rho,
        "alpha_rad": mc.alpha,
        "theta_min_rad": mc.theta_min,
        "theta_max_rad": mc.theta_max,
        "q": mc.q,
        "diamP": mc.diamP,
        "bt_constant": mc.bt_constant,
        "caps": {"single": single, "vertex": per_vertex, "cutpoint": cut},
        "empirical": {"depth": depth, "seed": seed, **emp.to_dict()},
    }
