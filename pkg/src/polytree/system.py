"""Polygonal tree systems: spec-file parsing, D1-D4 validation, contact graphs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Any, Mapping

import jsonschema
import networkx as nx

from .geometry import (
    DEFAULT_EPSILON_REL,
    Contact,
    ConvexPolygon,
    GeometryError,
    Similarity,
    _diameter,
    clip,
    compose,
    contains,
    interiors_overlap,
    intersection_class,
    map_polygon,
)


class SpecError(ValueError):
    """A spec document could not be turned into a system.

    ``path`` is the JSON path of the offending field (e.g. ``maps/1/a``).
    """

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class AxiomError(ValueError):
    """An operation needs an axiom that the system does not satisfy."""


@dataclass(frozen=True)
class PolygonalTreeSystem:
    polygon: ConvexPolygon
    maps: tuple[Similarity, ...]
    epsilon_rel: float = DEFAULT_EPSILON_REL
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))

    # -- sizes and symbols ---------------------------------------------------
    @property
    def n(self) -> int:
        return self.polygon.n

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def vertices(self) -> tuple[complex, ...]:
        return self.polygon.vertices

    def vertex(self, i: int) -> complex:
        """``A_i`` for a 1-based index."""
        return self.polygon.vertices[i - 1]

    @cached_property
    def diam(self) -> float:
        return self.polygon.diameter

    @property
    def tol(self) -> float:
        """Absolute coincidence tolerance shared by every predicate."""
        return self.epsilon_rel * self.diam

    @property
    def q(self) -> float:
        return max(s.ratio for s in self.maps)

    @cached_property
    def subpolygons(self) -> tuple[ConvexPolygon, ...]:
        return tuple(map_polygon(s, self.polygon) for s in self.maps)

    def vertex_preimage(self, k: int, p) -> int | None:
        """1-based ``l`` with ``S_k(A_l) == p`` within tolerance, else None."""
        s = self.maps[k - 1]
        for l, v in enumerate(self.vertices, start=1):
            if abs(s(v) - p) <= self.tol:
                return l
        return None

    def vertex_index(self, p) -> int | None:
        """1-based index of the vertex of ``P`` at ``p`` (None if ``p`` is not a vertex)."""
        k = self.polygon.vertex_index(p, self.tol)
        return None if k is None else k + 1

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "polygon": [[v.real, v.imag] for v in self.vertices],
            "maps": [
                {"a": [s.a.real, s.a.imag], "b": [s.b.real, s.b.imag], "conjugate": s.conjugate}
                for s in self.maps
            ],
            "epsilon_rel": self.epsilon_rel,
        }


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _schema(name: str) -> dict:
    return json.loads(resources.files("polytree.schemas").joinpath(name).read_text("utf-8"))


def parse_system(doc: str | bytes | Mapping[str, Any]) -> PolygonalTreeSystem:
    """Build an (unvalidated) system from a spec document or its JSON text."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON: {exc}") from exc
    if isinstance(doc, Mapping) and isinstance(doc.get("maps"), list) and len(doc["maps"]) < 2:
        raise SpecError("m ≥ 2 required", "maps")
    try:
        jsonschema.validate(doc, _schema("spec.schema.json"))
    except jsonschema.ValidationError as exc:
        raise SpecError(exc.message, "/".join(str(p) for p in exc.absolute_path)) from exc

    eps = float(doc.get("epsilon_rel", DEFAULT_EPSILON_REL))
    try:
        probe = ConvexPolygon(doc["polygon"], check=False)
        polygon = ConvexPolygon(doc["polygon"], tol=eps * probe.diameter)
    except GeometryError as exc:
        raise SpecError(str(exc), "polygon") from exc

    maps = []
    for k, entry in enumerate(doc["maps"]):
        try:
            s = Similarity(complex(*entry["a"]), complex(*entry["b"]), entry.get("conjugate", False))
        except GeometryError as exc:
            raise SpecError(str(exc), f"maps/{k}") from exc
        if not s.ratio < 1:
            raise SpecError(f"map is not a contraction (ratio {s.ratio:g})", f"maps/{k}/a")
        maps.append(s)
    return PolygonalTreeSystem(polygon, tuple(maps), eps, doc.get("name", ""))


def load_system(path: str | Path) -> PolygonalTreeSystem:
    return parse_system(Path(path).read_text(encoding="utf-8"))


def fixture_path(name: str) -> Path:
    """Path of a bundled spec file (``ex22``, ``hata``, ``ex24``, ...)."""
    return Path(str(resources.files("polytree.fixtures").joinpath(f"{name}.json")))


def load_fixture(name: str) -> PolygonalTreeSystem:
    return load_system(fixture_path(name))


# ---------------------------------------------------------------------------
# Contact structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContactGraph:
    """Bipartite graph of subpolygons (1..m) and their shared vertices."""

    m: int
    contacts: tuple[complex, ...]
    edges: tuple[tuple[int, int], ...]  # (polygon index, contact index)

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(("P", i) for i in range(1, self.m + 1))
        g.add_nodes_from(("c", c) for c in range(len(self.contacts)))
        g.add_edges_from((("P", i), ("c", c)) for i, c in self.edges)
        return g

    def polygons_at(self, c: int) -> list[int]:
        return sorted(i for i, cc in self.edges if cc == c)

    def contact_index(self, p, tol: float) -> int | None:
        for c, z in enumerate(self.contacts):
            if abs(z - p) <= tol:
                return c
        return None

    @property
    def is_connected(self) -> bool:
        return nx.is_connected(self.graph)

    @property
    def is_tree(self) -> bool:
        return nx.is_tree(self.graph)

    @property
    def polygons_connected(self) -> bool:
        g = self.graph
        start = ("P", 1)
        reach = nx.node_connected_component(g, start)
        return all(("P", i) in reach for i in range(1, self.m + 1))


def _pair_classes(sys: PolygonalTreeSystem):
    subs = sys.subpolygons
    for i, j in combinations(range(sys.m), 2):
        yield i + 1, j + 1, intersection_class(subs[i], subs[j], sys.tol)


def contact_graph(sys: PolygonalTreeSystem) -> ContactGraph:
    """Contact graph of the first-level subpolygons; requires D2."""
    points: list[complex] = []
    for i, j, cls in _pair_classes(sys):
        if cls.tag is Contact.OVERLAP:
            raise AxiomError(f"subpolygons {i} and {j} overlap; D2 must hold first")
        if cls.tag is Contact.SHARED_VERTEX and all(abs(cls.point - z) > sys.tol for z in points):
            points.append(cls.point)
    points.sort(key=lambda z: (z.real, z.imag))
    edges = []
    for c, z in enumerate(points):
        for k, poly in enumerate(sys.subpolygons, start=1):
            if poly.vertex_index(z, sys.tol) is not None:
                edges.append((k, c))
    edges.sort()
    return ContactGraph(sys.m, tuple(points), tuple(edges))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class Violation:
    axiom: str
    message: str
    maps: tuple[int, ...] = ()
    vertex: int | None = None
    witness: list[complex] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "message": self.message,
            "maps": list(self.maps),
            "vertex": self.vertex,
            "witness": [[z.real, z.imag] for z in self.witness],
        }


@dataclass
class ValidationReport:
    d1_ok: bool
    d2_ok: bool
    d3_ok: bool
    d4_ok: bool
    osc_ok: bool
    one_point_ok: bool
    violations: list[Violation]

    @property
    def accepted(self) -> bool:
        return self.d1_ok and self.d2_ok and self.d3_ok and self.d4_ok

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "d1_ok": self.d1_ok,
            "d2_ok": self.d2_ok,
            "d3_ok": self.d3_ok,
            "d4_ok": self.d4_ok,
            "osc_ok": self.osc_ok,
            "one_point_ok": self.one_point_ok,
            "violations": [v.to_dict() for v in self.violations],
        }


def validate(sys: PolygonalTreeSystem) -> ValidationReport:
    tol = sys.tol
    subs = sys.subpolygons
    found: list[Violation] = []

    d1 = True
    for k, poly in enumerate(subs, start=1):
        if not contains(sys.polygon, poly, tol):
            d1 = False
            outside = [v for v in poly.vertices if not sys.polygon.contains_point(v, tol)]
            found.append(Violation("D1", f"P_{k} is not contained in P", (k,), witness=outside))

    d2 = True
    one_point = True
    osc = d1
    for i, j, cls in _pair_classes(sys):
        if cls.tag is Contact.OVERLAP:
            d2 = False
            region = clip(subs[i - 1].vertices, subs[j - 1])
            found.append(
                Violation("D2", f"P_{i} and P_{j} meet in more than a common vertex", (i, j), witness=region)
            )
            if _diameter(region) > tol:
                one_point = False
            if interiors_overlap(subs[i - 1], subs[j - 1], tol):
                osc = False

    d3 = True
    for idx, a in enumerate(sys.vertices, start=1):
        if not any(poly.contains_point(a, tol) for poly in subs):
            d3 = False
            found.append(Violation("D3", f"vertex A_{idx} lies in no subpolygon", vertex=idx, witness=[a]))

    d4 = False
    if d2:
        g = contact_graph(sys)
        if not g.is_connected:
            found.append(Violation("D4", "union of subpolygons is disconnected"))
        elif not g.is_tree:
            cycle = nx.find_cycle(g.graph)
            polys = tuple(sorted({node[1] for edge in cycle for node in edge if node[0] == "P"}))
            found.append(Violation("D4", "union of subpolygons encloses a hole", polys))
        else:
            d4 = True
    else:
        found.append(Violation("D4", "contractibility is only decided once D2 holds"))

    found.sort(key=lambda v: (v.axiom, v.maps, v.vertex or 0))
    return ValidationReport(d1, d2, d3, d4, osc, one_point, found)


def compose_systems(sys: PolygonalTreeSystem, sys2: PolygonalTreeSystem) -> PolygonalTreeSystem:
    """The system of all ``S_i o S'_j`` in lexicographic ``(i, j)`` order."""
    if sys.n != sys2.n or any(abs(a - b) > sys.tol for a, b in zip(sys.vertices, sys2.vertices)):
        raise AxiomError("systems are attached to different polygons")
    maps = tuple(compose(s, t) for s in sys.maps for t in sys2.maps)
    name = f"{sys.name}*{sys2.name}" if sys.name or sys2.name else ""
    return PolygonalTreeSystem(sys.polygon, maps, sys.epsilon_rel, name)


def require_valid(sys: PolygonalTreeSystem) -> None:
    report = validate(sys)
    if not report.accepted:
        first = report.violations[0]
        raise AxiomError(f"not a polygonal tree system ({first.axiom}: {first.message})")
