"""Hutchinson refinement of ``P`` into address-labelled cells.

Addresses are tuples of 1-based map indices; ``(j1, j2, ..., jk)`` labels the
cell ``S_j1 o S_j2 o ... o S_jk (P)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .geometry import ConvexPolygon, Similarity, as_point, compose, map_polygon
from .system import PolygonalTreeSystem, contact_graph

DEFAULT_CELL_BUDGET = 2_000_000

Address = tuple[int, ...]


class BudgetExceeded(ValueError):
    pass


def format_address(word: Address, m: int = 9) -> str:
    if m <= 9:
        return "".join(str(j) for j in word)
    return ".".join(str(j) for j in word)


@dataclass(frozen=True)
class Cell:
    address: Address
    similarity: Similarity
    polygon: ConvexPolygon

    @property
    def depth(self) -> int:
        return len(self.address)

    @property
    def ratio(self) -> float:
        return self.similarity.ratio


def check_budget(sys: PolygonalTreeSystem, depth: int, budget: int = DEFAULT_CELL_BUDGET) -> None:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if sys.m ** depth > budget:
        raise BudgetExceeded(f"{sys.m}^{depth} cells exceed the budget of {budget}")


def refine(sys: PolygonalTreeSystem, depth: int, budget: int = DEFAULT_CELL_BUDGET) -> list[Cell]:
    """All ``m**depth`` cells of depth ``depth`` in lexicographic address order."""
    check_budget(sys, depth, budget)
    level = [((), Similarity.identity())]
    for _ in range(depth):
        level = [
            (word + (k,), compose(s, t))
            for word, s in level
            for k, t in enumerate(sys.maps, start=1)
        ]
    return [Cell(word, s, map_polygon(s, sys.polygon)) for word, s in level]


def cell(sys: PolygonalTreeSystem, word: Address) -> Cell:
    s = Similarity.identity()
    for k in word:
        s = compose(s, sys.maps[k - 1])
    return Cell(tuple(word), s, map_polygon(s, sys.polygon))


def address_of(sys: PolygonalTreeSystem, p, depth: int) -> set[Address]:
    """Depth-``depth`` addresses of every cell containing ``p`` (closed, within tolerance).

    An empty result means ``p`` is not in the ``depth``-th refinement and hence
    not in the attractor.
    """
    p = as_point(p)
    tol = sys.tol
    if not sys.polygon.contains_point(p, tol):
        return set()
    found: set[Address] = set()
    stack = [((), Similarity.identity())]
    while stack:
        word, s = stack.pop()
        if len(word) == depth:
            found.add(word)
            continue
        for k, t in enumerate(sys.maps, start=1):
            st = compose(s, t)
            if map_polygon(st, sys.polygon).contains_point(p, tol):
                stack.append((word + (k,), st))
    return found


def vertex_graph(sys: PolygonalTreeSystem) -> dict[int, list[tuple[int, int]]]:
    """For each vertex ``l``: the pairs ``(k, l')`` with ``S_k(A_l') = A_l``."""
    out: dict[int, list[tuple[int, int]]] = {l: [] for l in range(1, sys.n + 1)}
    for k in range(1, sys.m + 1):
        for lp in range(1, sys.n + 1):
            l = sys.vertex_index(sys.maps[k - 1](sys.vertex(lp)))
            if l is not None:
                out[l].append((k, lp))
    return out


@dataclass(frozen=True)
class FiberBranch:
    """One nested chain of cells shrinking to a vertex.

    ``word`` is the depth-k address and ``vertices`` the preimage vertex indices
    after each letter (``A_i = S_word[:t](A_vertices[t])``).  When a preimage
    vertex repeats, ``prefix`` and ``period`` give the eventually periodic
    infinite address.
    """

    word: Address
    vertices: tuple[int, ...]
    prefix: Address | None
    period: Address | None

    @property
    def end_vertex(self) -> int:
        return self.vertices[-1]


@dataclass(frozen=True)
class VertexFiber:
    vertex: int
    depth: int
    branches: tuple[FiberBranch, ...]

    @property
    def count(self) -> int:
        return len(self.branches)

    @property
    def addresses(self) -> list[Address]:
        return [b.word for b in self.branches]


def _periodic(word: Address, verts: tuple[int, ...]):
    seen: dict[int, int] = {}
    for t, v in enumerate(verts):
        if v in seen:
            s = seen[v]
            return word[:s], word[s:t]
        seen[v] = t
    return None, None


def vertex_fiber(sys: PolygonalTreeSystem, i: int, depth: int) -> VertexFiber:
    """Nested cell chains of length ``depth`` containing the vertex ``A_i``.

    A cell ``S_j(P)`` contains the vertex ``A_i`` only as one of its own
    vertices, so the chains are walks in the vertex graph of :func:`vertex_graph`.
    """
    graph = vertex_graph(sys)
    walks = [((), (i,))]
    for _ in range(depth):
        walks = [
            (word + (k,), verts + (lp,))
            for word, verts in walks
            for k, lp in graph[verts[-1]]
        ]
    walks.sort()
    branches = tuple(FiberBranch(w, v, *_periodic(w, v)) for w, v in walks)
    return VertexFiber(i, depth, branches)


def connectivity_check(sys: PolygonalTreeSystem) -> bool:
    """True iff the first-level pieces form a connected family (checked on polygons)."""
    return contact_graph(sys).polygons_connected


def cells_to_csv(cells: list[Cell], m: int = 9) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for c in cells:
        row = [format_address(c.address, m)]
        for v in c.polygon.vertices:
            row += [repr(v.real), repr(v.imag)]
        writer.writerow(row)
    return buf.getvalue()
