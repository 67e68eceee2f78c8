"""Combinatorial equivalence of two systems and the conjugacy it induces.

Two systems on polygons with the same number of vertices and the same number
of maps are equivalent when the same maps send the same vertices to the same
vertices and the same pairs of vertex images coincide.  Their attractors are
then conjugate by a bi-Hölder homeomorphism ``phi`` with ``phi o S_i = S'_i o phi``,
evaluated here through finite addresses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .analysis import compute_alpha, compute_rho
from .attractor import Address, address_of, cell
from .geometry import as_point, compose_word
from .system import PolygonalTreeSystem


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class IncidenceSignature:
    vertex_maps: frozenset[tuple[int, int, int]]
    contacts: frozenset[tuple[int, int, int, int]]

    def relabel(self, perm: tuple[int, ...]) -> IncidenceSignature:
        """Rename vertex ``perm[i-1]`` to ``i`` (``perm`` lists new-to-old labels)."""
        back = {old: new for new, old in enumerate(perm, start=1)}
        return IncidenceSignature(
            frozenset((k, back[i], back[j]) for k, i, j in self.vertex_maps),
            frozenset((k1, back[i], k2, back[j]) for k1, i, k2, j in self.contacts),
        )

    def to_dict(self) -> dict:
        return {
            "vertex_maps": [list(t) for t in sorted(self.vertex_maps)],
            "contacts": [list(t) for t in sorted(self.contacts)],
        }


def signature(sys: PolygonalTreeSystem) -> IncidenceSignature:
    tol = sys.tol
    images = {
        (k, i): sys.maps[k - 1](sys.vertex(i)) for k in range(1, sys.m + 1) for i in range(1, sys.n + 1)
    }
    vmaps = set()
    for (k, i), z in images.items():
        j = sys.vertex_index(z)
        if j is not None:
            vmaps.add((k, i, j))
    contacts = set()
    for k1, k2 in combinations(range(1, sys.m + 1), 2):
        for i in range(1, sys.n + 1):
            for j in range(1, sys.n + 1):
                if abs(images[(k1, i)] - images[(k2, j)]) <= tol:
                    contacts.add((k1, i, k2, j))
    return IncidenceSignature(frozenset(vmaps), frozenset(contacts))


@dataclass
class EquivalenceResult:
    equivalent: bool
    missing: list[tuple] = field(default_factory=list)  # in the first signature only
    extra: list[tuple] = field(default_factory=list)  # in the second signature only
    permutation: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "missing": [list(t) for t in self.missing],
            "extra": [list(t) for t in self.extra],
            "permutation": None if self.permutation is None else list(self.permutation),
        }


def _diff(a: IncidenceSignature, b: IncidenceSignature) -> tuple[list, list]:
    missing = sorted(a.vertex_maps - b.vertex_maps) + sorted(a.contacts - b.contacts)
    extra = sorted(b.vertex_maps - a.vertex_maps) + sorted(b.contacts - a.contacts)
    return missing, extra


MAX_PERMUTATION_N = 9


def check_equivalence(
    sys: PolygonalTreeSystem, sys2: PolygonalTreeSystem, search_permutations: bool = False
) -> EquivalenceResult:
    """Compare signatures index by index, optionally over all vertex relabelings of ``sys2``.

    With ``search_permutations`` the lexicographically smallest matching
    relabeling wins; ``permutation[i-1]`` is the vertex of ``sys2`` playing the
    role of ``A_i``.
    """
    if sys.n != sys2.n or sys.m != sys2.m:
        raise MorphismError(f"size mismatch: (n, m) = ({sys.n}, {sys.m}) vs ({sys2.n}, {sys2.m})")
    a, b = signature(sys), signature(sys2)
    missing, extra = _diff(a, b)
    identity = tuple(range(1, sys.n + 1))
    if not missing and not extra:
        return EquivalenceResult(True, permutation=identity if search_permutations else None)
    if search_permutations:
        if sys.n > MAX_PERMUTATION_N:
            raise MorphismError(f"permutation search is limited to n <= {MAX_PERMUTATION_N}")
        for perm in permutations(identity):
            if b.relabel(perm) == a:
                return EquivalenceResult(True, permutation=perm)
    return EquivalenceResult(False, missing, extra)


# ---------------------------------------------------------------------------
# Conjugacy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugatePoint:
    point: complex
    bound: float
    address: Address

    def to_dict(self) -> dict:
        return {
            "point": [self.point.real, self.point.imag],
            "error_bound": self.bound,
            "address": list(self.address),
        }


def conjugate_point(
    sys: PolygonalTreeSystem,
    sys2: PolygonalTreeSystem,
    p,
    depth: int,
    permutation: tuple[int, ...] | None = None,
) -> ConjugatePoint:
    """Image of ``p`` under the conjugacy, read off a depth-``depth`` address.

    The lexicographically smallest address of ``p`` is used.  If ``p`` is the
    image of a vertex under that address the answer is exact up to rounding;
    otherwise it is the image of the centroid of ``P'``.
    """
    p = as_point(p)
    words = address_of(sys, p, depth)
    if not words:
        raise MorphismError(f"point {p} is not in the depth-{depth} refinement, so not in the attractor")
    word = min(words)
    pre = cell(sys, word).similarity.inverse()(p)
    l = sys.vertex_index(pre)
    s2 = compose_word(sys2.maps, word)
    if l is not None:
        target = sys2.vertex(permutation[l - 1] if permutation else l)
    else:
        target = sys2.polygon.centroid
    return ConjugatePoint(s2(target), conjugacy_bound(sys2, depth), word)


def conjugacy_bound(sys2: PolygonalTreeSystem, depth: int) -> float:
    return sys2.q**depth * sys2.diam


@dataclass(frozen=True)
class HolderCertificate:
    beta: float
    beta_prime: float
    forward_constant: float  # d(x', y') <= forward_constant * d(x, y) ** beta
    backward_constant: float  # d(x, y) <= backward_constant * d(x', y') ** beta_prime
    rho: float
    rho_prime: float
    alpha: float
    alpha_prime: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def holder_exponents(ratios, ratios2) -> tuple[float, float]:
    beta = min(math.log(r2) / math.log(r) for r, r2 in zip(ratios, ratios2))
    beta_prime = min(math.log(r) / math.log(r2) for r, r2 in zip(ratios, ratios2))
    return beta, beta_prime


def holder_certificate(
    sys: PolygonalTreeSystem, sys2: PolygonalTreeSystem, require_equivalent: bool = True
) -> HolderCertificate:
    if require_equivalent and not check_equivalence(sys, sys2).equivalent:
        raise MorphismError("systems are not combinatorially equivalent")
    beta, beta_prime = holder_exponents([s.ratio for s in sys.maps], [s.ratio for s in sys2.maps])
    rho, rho2 = compute_rho(sys), compute_rho(sys2)
    alpha, alpha2 = compute_alpha(sys), compute_alpha(sys2)
    fwd = 2 * sys2.diam / (rho * math.sin(alpha / 2)) ** beta
    bwd = 2 * sys.diam / (rho2 * math.sin(alpha2 / 2)) ** beta_prime
    return HolderCertificate(beta, beta_prime, fwd, bwd, rho, rho2, alpha, alpha2)


@dataclass(frozen=True)
class ConjugacyResiduals:
    depth: int
    samples: int
    max_residual: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.max_residual <= 2 * self.bound

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "bound": self.bound,
            "within_twice_bound": self.ok,
        }


def conjugacy_residuals(
    sys: PolygonalTreeSystem,
    sys2: PolygonalTreeSystem,
    points,
    depth: int,
    permutation: tuple[int, ...] | None = None,
) -> ConjugacyResiduals:
    """Largest ``|phi(S_i p) - S'_i phi(p)|`` over the given points and all maps."""
    worst = 0.0
    pts = list(points)
    for p in pts:
        fp = conjugate_point(sys, sys2, p, depth, permutation).point
        for s, s2 in zip(sys.maps, sys2.maps):
            lhs = conjugate_point(sys, sys2, s(p), depth, permutation).point
            worst = max(worst, abs(lhs - s2(fp)))
    return ConjugacyResiduals(depth, len(pts), worst, conjugacy_bound(sys2, depth))


def sample_points(points: np.ndarray, count: int, seed: int) -> list[complex]:
    """``count`` distinct entries drawn with a seeded generator (all of them if fewer)."""
    rng = np.random.default_rng(seed)
    k = min(count, len(points))
    return [complex(points[i]) for i in sorted(rng.choice(len(points), size=k, replace=False))]
