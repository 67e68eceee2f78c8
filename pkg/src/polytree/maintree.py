"""Chains, the multizipper of vertex-to-vertex arcs, and the main tree.

The arcs between vertices of ``P`` satisfy a graph-directed recursion: the arc
from ``A_i`` to ``A_j`` runs through the unique chain of first-level pieces
joining them, and inside the ``k``-th link it is the image of another
vertex-to-vertex arc.  :func:`build_multizipper` records that recursion and
:func:`arc_polyline` unrolls it.

The main tree is the union of all those arcs.  Its branch points are medians of
vertex triples; :func:`combinatorial_main_tree` locates them exactly (each is
either a contact point pushed forward by finitely many maps, or the fixed point
of a composed map) and :func:`skeleton_tree` glues scaled copies of that tree
into every cell visited by the unrolled arcs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property, cmp_to_key
from itertools import combinations

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from .attractor import Address
from .geometry import Similarity, compose, compose_word
from .system import AxiomError, ContactGraph, PolygonalTreeSystem, contact_graph

Pair = tuple[int, int]


class SkeletonError(RuntimeError):
    """Welding the skeleton produced a cycle (tolerance too coarse or invalid system)."""


# ---------------------------------------------------------------------------
# Chains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    i: int
    j: int
    links: tuple[int, ...]
    contacts: tuple[complex, ...]  # z_0 = A_i, ..., z_m = A_j

    @property
    def length(self) -> int:
        return len(self.links)


class _Contacts:
    """Contact tree of a validated system plus where each vertex attaches to it."""

    def __init__(self, sys: PolygonalTreeSystem, cg: ContactGraph | None = None):
        self.sys = sys
        self.cg = cg or contact_graph(sys)
        if not self.cg.is_tree:
            raise AxiomError("the contact graph is not a tree (D4 fails); chains are not unique")
        self.graph = self.cg.graph
        self.start = {i: self._start(i) for i in range(1, sys.n + 1)}

    def _start(self, i: int):
        a = self.sys.vertex(i)
        c = self.cg.contact_index(a, self.sys.tol)
        if c is not None:
            return ("c", c)
        for k, poly in enumerate(self.sys.subpolygons, start=1):
            if poly.vertex_index(a, self.sys.tol) is not None:
                return ("P", k)
        raise AxiomError(f"vertex A_{i} lies in no subpolygon (D3 fails)")

    def path(self, i: int, j: int) -> list:
        return nx.shortest_path(self.graph, self.start[i], self.start[j])

    def point(self, node) -> complex:
        return self.cg.contacts[node[1]]


def find_chain(sys: PolygonalTreeSystem, i: int, j: int, _contacts: _Contacts | None = None) -> Chain:
    """The unique chain of first-level pieces joining ``A_i`` and ``A_j``."""
    if i == j:
        raise ValueError("a chain needs two distinct vertices")
    ctx = _contacts or _Contacts(sys)
    path = ctx.path(i, j)
    links = tuple(node[1] for node in path if node[0] == "P")
    inner = [ctx.point(node) for node in path[1:-1] if node[0] == "c"]
    return Chain(i, j, links, (sys.vertex(i), *inner, sys.vertex(j)))


# ---------------------------------------------------------------------------
# Multizipper
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZipperEntry:
    """``S_map(A_u) = start`` and ``S_map(A_v) = end``."""

    map_index: int
    u: int
    v: int
    start: complex
    end: complex

    def reversed(self) -> ZipperEntry:
        return ZipperEntry(self.map_index, self.v, self.u, self.end, self.start)


@dataclass(frozen=True)
class Multizipper:
    """Arc recursion keyed by unordered vertex pairs stored as ``(i, j)`` with ``i < j``."""

    nodes: dict[Pair, tuple[ZipperEntry, ...]]

    def entries(self, i: int, j: int) -> tuple[ZipperEntry, ...]:
        if i < j:
            return self.nodes[(i, j)]
        return tuple(e.reversed() for e in reversed(self.nodes[(j, i)]))

    def node_points(self, i: int, j: int) -> list[complex]:
        es = self.entries(i, j)
        return [es[0].start] + [e.end for e in es]


def build_multizipper(sys: PolygonalTreeSystem) -> Multizipper:
    ctx = _Contacts(sys)
    nodes: dict[Pair, tuple[ZipperEntry, ...]] = {}
    todo = sorted(combinations(range(1, sys.n + 1), 2))
    while todo:
        i, j = todo.pop(0)
        if (i, j) in nodes:
            continue
        chain = find_chain(sys, i, j, ctx)
        entries = []
        for t, k in enumerate(chain.links):
            z0, z1 = chain.contacts[t], chain.contacts[t + 1]
            u, v = sys.vertex_preimage(k, z0), sys.vertex_preimage(k, z1)
            if u is None or v is None:
                raise AxiomError(f"node point of arc ({i},{j}) in P_{k} is not a vertex image")
            entries.append(ZipperEntry(k, u, v, z0, z1))
            key = (min(u, v), max(u, v))
            if key not in nodes and key not in todo:
                todo.append(key)
        nodes[(i, j)] = tuple(entries)
    return Multizipper(dict(sorted(nodes.items())))


@dataclass(frozen=True)
class ArcPiece:
    """A depth-``len(address)`` piece of an arc: ``similarity`` maps the arc ``(u, v)`` onto it."""

    address: Address
    similarity: Similarity
    u: int
    v: int


def unroll(sys: PolygonalTreeSystem, zipper: Multizipper, i: int, j: int, depth: int) -> list[ArcPiece]:
    """Pieces of the arc from ``A_i`` to ``A_j`` after ``depth + 1`` substitutions, in arc order."""
    pieces = [ArcPiece((), Similarity.identity(), i, j)]
    for _ in range(depth + 1):
        pieces = [
            ArcPiece(p.address + (e.map_index,), compose(p.similarity, sys.maps[e.map_index - 1]), e.u, e.v)
            for p in pieces
            for e in zipper.entries(p.u, p.v)
        ]
    return pieces


def arc_polyline(
    sys: PolygonalTreeSystem, i: int, j: int, depth: int, zipper: Multizipper | None = None
) -> list[complex]:
    """Points along the arc from ``A_i`` to ``A_j``; depth 0 gives the chain's node points."""
    if i > j:
        return arc_polyline(sys, j, i, depth, zipper)[::-1]
    zipper = zipper or build_multizipper(sys)
    pieces = unroll(sys, zipper, i, j, depth)
    pts = [sys.vertex(i)] + [p.similarity(sys.vertex(p.v)) for p in pieces]
    pts[-1] = sys.vertex(j)
    return pts


# ---------------------------------------------------------------------------
# Exact branch points of the main tree
# ---------------------------------------------------------------------------

Triple = frozenset


def _median_step(sys: PolygonalTreeSystem, ctx: _Contacts, triple: Triple):
    """One level of the median recursion.

    Returns ``("point", z)`` when the three arcs meet at a contact point, or
    ``("map", k, triple')`` when they meet inside ``P_k``; then the median is
    ``S_k`` of the median of ``triple'``.
    """
    a, b, c = sorted(triple)
    pab, pbc, pac = ctx.path(a, b), ctx.path(b, c), ctx.path(a, c)
    common = set(pab) & set(pbc) & set(pac)
    if len(common) != 1:
        raise AxiomError("contact graph paths do not meet in a single node")
    (med,) = common
    if med[0] == "c":
        return ("point", ctx.point(med))
    k = med[1]
    pre = []
    for x, path in ((a, pab), (b, pbc), (c, pac[::-1])):
        if ctx.start[x] == med:
            z = sys.vertex(x)
        else:
            p = nx.shortest_path(ctx.graph, ctx.start[x], med)
            z = ctx.point(p[-2])
        u = sys.vertex_preimage(k, z)
        if u is None:
            raise AxiomError(f"entry point into P_{k} is not a vertex image")
        pre.append(u)
    nxt = Triple(pre)
    if len(nxt) != 3:
        raise AxiomError("two arcs enter a piece through the same vertex")
    return ("map", k, nxt)


def median(sys: PolygonalTreeSystem, triple, _ctx: _Contacts | None = None) -> complex:
    """The point where the arcs between three distinct vertices meet."""
    ctx = _ctx or _Contacts(sys)
    t = Triple(triple)
    seen = {t: 0}
    letters: list[int] = []
    while True:
        step = _median_step(sys, ctx, t)
        if step[0] == "point":
            z = step[1]
            break
        _, k, t = step
        letters.append(k)
        if t in seen:
            r = seen[t]
            z = compose_word(sys.maps, letters[r:]).fixed_point()
            letters = letters[:r]
            break
        seen[t] = len(letters)
    return compose_word(sys.maps, letters)(z)


@dataclass(frozen=True)
class CombinatorialTree:
    """The main tree as a finite tree: vertices of ``P`` plus its exact branch points.

    Node ``i - 1`` is the vertex ``A_i``.  Edges stand for sub-arcs of the main
    tree between consecutive nodes.
    """

    points: tuple[complex, ...]
    edges: tuple[tuple[int, int], ...]
    n: int

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.points)))
        g.add_edges_from(self.edges)
        return g

    def degree(self, node: int) -> int:
        return self.graph.degree[node]

    def span(self, vertices) -> tuple[list[int], list[tuple[int, int]]]:
        """Nodes and edges of the smallest subtree containing the given 1-based vertices."""
        vs = sorted(vertices)
        nodes = {vs[0] - 1}
        edges = set()
        for a in vs[1:]:
            path = nx.shortest_path(self.graph, vs[0] - 1, a - 1)
            nodes.update(path)
            edges.update((min(x, y), max(x, y)) for x, y in zip(path, path[1:]))
        return sorted(nodes), sorted(edges)


def combinatorial_main_tree(sys: PolygonalTreeSystem) -> CombinatorialTree:
    ctx = _Contacts(sys)
    tol = sys.tol
    points = list(sys.vertices)

    def node_of(z: complex) -> int:
        for idx, p in enumerate(points):
            if abs(p - z) <= tol:
                return idx
        points.append(z)
        return len(points) - 1

    med: dict[Triple, int] = {}
    for t in combinations(range(1, sys.n + 1), 3):
        med[Triple(t)] = node_of(median(sys, t, ctx))

    edges = set()
    for i, j in combinations(range(1, sys.n + 1), 2):
        ends = (i - 1, j - 1)
        inner: dict[int, int] = {}
        for k in range(1, sys.n + 1):
            if k in (i, j):
                continue
            x = med[Triple((i, j, k))]
            if x not in ends:
                inner.setdefault(x, k)

        def before(x: int, y: int, i=i, inner=inner) -> int:
            # walking from A_i, the branch towards k leaves first iff it is the median of (i, k, l)
            return -1 if med[Triple((i, inner[x], inner[y]))] == x else 1

        seq = [i - 1] + sorted(inner, key=cmp_to_key(before)) + [j - 1]
        edges.update((min(x, y), max(x, y)) for x, y in zip(seq, seq[1:]))

    tree = CombinatorialTree(tuple(points), tuple(sorted(edges)), sys.n)
    if not nx.is_tree(tree.graph):
        raise SkeletonError("branch points of the main tree do not form a tree")
    return tree


# ---------------------------------------------------------------------------
# Skeleton
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkeletonEdge:
    a: int
    b: int
    address: Address
    local: tuple[int, int]  # edge of the combinatorial tree it is the image of


@dataclass
class SkeletonTree:
    depth: int
    points: np.ndarray  # complex, one per node
    edges: list[SkeletonEdge]
    vertex_nodes: dict[int, int]  # 1-based vertex of P -> node
    provisional: set[int] = field(default_factory=set)

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.points)))
        g.add_edges_from((e.a, e.b) for e in self.edges)
        return g

    @property
    def degrees(self) -> list[int]:
        g = self.graph
        return [g.degree[v] for v in range(len(self.points))]

    @property
    def leaves(self) -> list[int]:
        return [v for v, d in enumerate(self.degrees) if d == 1]

    @cached_property
    def _rooted(self) -> tuple[list[int], list[int]]:
        parent = [-1] * len(self.points)
        level = [0] * len(self.points)
        for u, v in nx.bfs_edges(self.graph, 0):
            parent[v] = u
            level[v] = level[u] + 1
        return parent, level

    def path(self, a: int, b: int) -> list[int]:
        """Node sequence of the unique path from ``a`` to ``b``."""
        parent, level = self._rooted
        head, tail = [a], [b]
        while level[head[-1]] > level[tail[-1]]:
            head.append(parent[head[-1]])
        while level[tail[-1]] > level[head[-1]]:
            tail.append(parent[tail[-1]])
        while head[-1] != tail[-1]:
            head.append(parent[head[-1]])
            tail.append(parent[tail[-1]])
        return head + tail[-2::-1]

    def node_at(self, p, tol: float) -> int | None:
        d = np.abs(self.points - complex(p))
        k = int(np.argmin(d))
        return k if d[k] <= tol else None

    def to_dict(self, ramification: list | None = None) -> dict:
        out = {
            "depth": self.depth,
            "nodes": [[z.real, z.imag] for z in self.points.tolist()],
            "edges": [[e.a, e.b] for e in self.edges],
            "degrees": self.degrees,
            "provisional": [v in self.provisional for v in range(len(self.points))],
            "vertices": {str(i): v for i, v in sorted(self.vertex_nodes.items())},
        }
        if ramification is not None:
            out["ramification_points"] = [r.to_dict() for r in ramification]
        return out


def _weld(points: list[complex], tol: float) -> tuple[np.ndarray, list[int]]:
    """Merge points closer than ``tol``; node ids follow lexicographic point order."""
    z = np.array(points, dtype=complex)
    parent = list(range(len(z)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree = cKDTree(np.column_stack([z.real, z.imag]))
    for a, b in sorted(tree.query_pairs(r=tol)):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(a) for a in range(len(z))}, key=lambda r: (z[r].real, z[r].imag))
    ids = {r: k for k, r in enumerate(roots)}
    return z[roots], [ids[find(a)] for a in range(len(z))]


def skeleton_tree(
    sys: PolygonalTreeSystem,
    depth: int,
    zipper: Multizipper | None = None,
    base: CombinatorialTree | None = None,
) -> SkeletonTree:
    """Finite tree approximating the main tree at refinement ``depth``.

    Every cell visited by the unrolled arcs contributes the image of the part of
    the combinatorial main tree spanned by the vertices the arcs use there.
    """
    zipper = zipper or build_multizipper(sys)
    base = base or combinatorial_main_tree(sys)
    used: dict[Address, tuple[Similarity, set[int]]] = {}
    for i, j in combinations(range(1, sys.n + 1), 2):
        for piece in unroll(sys, zipper, i, j, depth):
            entry = used.setdefault(piece.address, (piece.similarity, set()))
            entry[1].update((piece.u, piece.v))

    raw_points: list[complex] = []
    raw_edges: list[tuple[int, int, Address, tuple[int, int]]] = []
    span_cache: dict[frozenset, tuple] = {}
    for address in sorted(used):
        s, verts = used[address]
        key = frozenset(verts)
        if key not in span_cache:
            span_cache[key] = base.span(verts)
        nodes, edges = span_cache[key]
        offset = len(raw_points)
        local = {v: offset + t for t, v in enumerate(nodes)}
        raw_points.extend(s.apply_array(np.array([base.points[v] for v in nodes])).tolist())
        raw_edges.extend((local[x], local[y], address, (x, y)) for x, y in edges)

    pts, ids = _weld(raw_points, sys.tol)
    seen = set()
    edges = []
    for a, b, address, loc in raw_edges:
        a, b = sorted((ids[a], ids[b]))
        if a == b or (a, b) in seen:
            continue
        seen.add((a, b))
        edges.append(SkeletonEdge(a, b, address, loc))
    edges.sort(key=lambda e: (e.a, e.b))

    vertex_nodes = {}
    for i in range(1, sys.n + 1):
        k = int(np.argmin(np.abs(pts - sys.vertex(i))))
        vertex_nodes[i] = k
    sk = SkeletonTree(depth, pts, edges, vertex_nodes)
    if not nx.is_tree(sk.graph):
        cyc = nx.cycle_basis(sk.graph)
        raise SkeletonError(f"welded skeleton at depth {depth} has {len(cyc)} independent cycle(s)")
    vset = set(vertex_nodes.values())
    sk.provisional = {v for v in sk.leaves if v not in vset}
    return sk


@dataclass(frozen=True)
class RamificationPoint:
    point: complex
    degree: int
    provisional: bool

    def to_dict(self) -> dict:
        return {"point": [self.point.real, self.point.imag], "degree": self.degree, "provisional": self.provisional}


def main_ramification_points(
    sys: PolygonalTreeSystem, depth: int, skeleton: SkeletonTree | None = None
) -> list[RamificationPoint]:
    """Skeleton nodes of degree >= 3, flagged provisional unless the degree agrees one level deeper."""
    zipper = build_multizipper(sys)
    base = combinatorial_main_tree(sys)
    sk = skeleton or skeleton_tree(sys, depth, zipper, base)
    finer = skeleton_tree(sys, depth + 1, zipper, base)
    fdeg = finer.degrees
    out = []
    for v, d in enumerate(sk.degrees):
        if d < 3:
            continue
        w = finer.node_at(sk.points[v], sys.tol)
        stable = w is not None and fdeg[w] == d
        out.append(RamificationPoint(complex(sk.points[v]), d, not stable))
    return out


def vertex_order_in_tree(sys: PolygonalTreeSystem, base: CombinatorialTree | None = None) -> dict[int, int]:
    """Order of each vertex ``A_i`` in the main tree."""
    base = base or combinatorial_main_tree(sys)
    return {i: base.degree(i - 1) for i in range(1, sys.n + 1)}


def arc_pieces_by_link(
    sys: PolygonalTreeSystem, i: int, j: int, depth: int, zipper: Multizipper | None = None
) -> list[list[complex]]:
    """Polyline of the arc split by first-level link: one point list per chain link."""
    zipper = zipper or build_multizipper(sys)
    groups: dict[int, list[ArcPiece]] = defaultdict(list)
    order: list[int] = []
    for piece in unroll(sys, zipper, i, j, depth):
        k = piece.address[0]
        if not groups[k]:
            order.append(k)
        groups[k].append(piece)
    out = []
    for k in order:
        ps = groups[k]
        out.append([ps[0].similarity(sys.vertex(ps[0].u))] + [p.similarity(sys.vertex(p.v)) for p in ps])
    return out
