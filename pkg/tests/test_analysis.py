import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SQRT2
from oracles import angle_between, sampled_point_distance, sampled_polygon_distance
from polytree.analysis import (
    bt_constant,
    bt_formula,
    compute_alpha,
    compute_rho,
    empirical_bt,
    metric_constants,
    order_bounds,
    order_caps,
    path_diameter,
    point_order_estimate,
    snapped_ceil,
)
from polytree.geometry import Contact
from polytree.maintree import skeleton_tree
from polytree.system import AxiomError, _pair_classes, load_fixture, parse_system

VALID = ["ex22", "ex22_variant", "hata", "ex24", "zipper"]


def transformed(sys, a: complex, b: complex):
    """The same system seen through z -> a z + b."""
    doc = sys.to_dict()
    doc["polygon"] = [[(a * complex(*v) + b).real, (a * complex(*v) + b).imag] for v in doc["polygon"]]
    maps = []
    for s in sys.maps:
        # conjugating S by T(z) = a z + b keeps the reflection flag
        if s.conjugate:
            na = a * s.a / a.conjugate()
            nb = a * s.b + b - na * b.conjugate()
        else:
            na = s.a
            nb = a * s.b + b - s.a * b
        maps.append({"a": [na.real, na.imag], "b": [nb.real, nb.imag], "conjugate": s.conjugate})
    doc["maps"] = maps
    return parse_system(doc)


def rho_oracle(s) -> float:
    best = math.inf
    for a in s.vertices:
        for poly in s.subpolygons:
            if not poly.contains_point(a, s.tol):
                best = min(best, sampled_point_distance(a, poly.vertices, 10_000))
    for i, j, cls in _pair_classes(s):
        if cls.tag is Contact.EMPTY:
            best = min(best, sampled_polygon_distance(s.subpolygons[i - 1].vertices, s.subpolygons[j - 1].vertices, 4000))
    return best


@pytest.mark.parametrize("name", VALID)
def test_rho_matches_sampling(name):
    s = load_fixture(name)
    rho = compute_rho(s)
    assert 0 < rho <= s.diam
    assert rho == pytest.approx(rho_oracle(s), rel=1e-6)


def test_rho_frozen_values(ex22, hata, ex24):
    assert compute_rho(ex22) == pytest.approx(1 / (2 * SQRT2), rel=1e-12)
    assert compute_rho(hata) == pytest.approx(3 / (8 * SQRT2), rel=1e-12)
    # the ex24 fixture is governed by a gap between two disjoint pieces (P_2 and P_8)
    assert compute_rho(ex24) == pytest.approx(0.030846893030571546, rel=1e-9)


def test_rho_gap_dominates():
    g = 0.05
    s = parse_system(
        {
            "polygon": [[0, 0], [1, 0], [1, 1], [0, 1]],
            "maps": [
                {"a": [0.5, 0], "b": [0, 0]},
                {"a": [0.5, 0], "b": [0.5, 0.5]},
                {"a": [0.2, 0], "b": [0.5 + g, 0.3 - g]},
            ],
        }
    )
    assert compute_rho(s) == pytest.approx(g, rel=1e-12)


def test_alpha_examples(ex22, hata):
    assert compute_alpha(ex22) == pytest.approx(math.acos(1 / math.sqrt(3)), rel=1e-12)
    # oracle by explicit side vectors at the contact point 0.5 of Hata
    p1, p2 = hata.subpolygons
    k1, k2 = p1.vertex_index(0.5, 1e-12), p2.vertex_index(0.5, 1e-12)
    sides1 = [p1.vertices[k1 - 1] - 0.5, p1.vertices[(k1 + 1) % 7] - 0.5]
    sides2 = [p2.vertices[k2 - 1] - 0.5, p2.vertices[(k2 + 1) % 7] - 0.5]
    want = min(angle_between(u, v) for u in sides1 for v in sides2)
    assert compute_alpha(hata) == pytest.approx(want, rel=1e-12)


def test_alpha_perpendicular_squares():
    s = parse_system(
        {
            "polygon": [[0, 0], [1, 0], [1, 1], [0, 1]],
            "maps": [{"a": [0.5, 0], "b": [0, 0]}, {"a": [0.5, 0], "b": [0.5, 0.5]}],
        }
    )
    assert compute_alpha(s) == pytest.approx(math.pi / 2)


def test_alpha_needs_contacts():
    with pytest.raises(AxiomError):
        compute_alpha(load_fixture("disjoint"))


def test_bt_formula_synthetic():
    assert bt_formula(1, 0.25, math.pi / 2) == pytest.approx(5.656854249492381)


@given(st.floats(0.2, 5), st.floats(-math.pi, math.pi), st.floats(-3, 3), st.floats(-3, 3))
def test_constants_are_similarity_invariant(scale, phase, bx, by):
    s = load_fixture("hata")
    a = scale * complex(math.cos(phase), math.sin(phase))
    t = transformed(s, a, complex(bx, by))
    assert compute_alpha(t) == pytest.approx(compute_alpha(s), rel=1e-7)
    assert compute_rho(t) == pytest.approx(scale * compute_rho(s), rel=1e-7)
    assert bt_constant(t) == pytest.approx(bt_constant(s), rel=1e-7)
    assert order_bounds(t, 2).to_dict()["caps"] == order_bounds(s, 2).to_dict()["caps"]


@pytest.mark.parametrize("name", VALID)
def test_bt_constant_at_least_one(name):
    assert bt_constant(load_fixture(name)) >= 1


def test_path_diameter():
    z = np.array([0, 1, 1 + 1j, 0.5j])
    assert path_diameter(z) == pytest.approx(SQRT2)
    line = np.linspace(0, 1, 700) * (3 + 4j)
    assert path_diameter(line) == pytest.approx(5)
    blob = np.exp(1j * np.linspace(0, 2 * np.pi, 900, endpoint=False))
    assert path_diameter(blob) == pytest.approx(2, rel=1e-5)


def test_empirical_bt_straight_arc(ex22):
    # the arc from A1 to A3 is the straight diagonal, so ratios along it are 1
    sk = skeleton_tree(ex22, 4)
    a, b = sk.vertex_nodes[1], sk.vertex_nodes[3]
    path = sk.path(a, b)
    pts = sk.points[path]
    assert path_diameter(pts) / abs(pts[0] - pts[-1]) == pytest.approx(1)


@pytest.mark.parametrize("name", ["ex22", "hata", "zipper"])
def test_empirical_bt_below_constant(name):
    s = load_fixture(name)
    emp = empirical_bt(s, 6, samples=300, seed=1)
    assert 1 - 1e-12 <= emp.max_ratio <= bt_constant(s)


def test_empirical_bt_deterministic(hata):
    a = empirical_bt(hata, 5, samples=200, seed=7)
    b = empirical_bt(hata, 5, samples=200, seed=7)
    assert a == b


def test_ratio_to_vertex_bound(hata):
    # from a vertex A: diam(path) / dist <= diamP/rho, with slack for truncation
    s = hata
    d = 6
    sk = skeleton_tree(s, d)
    rho = compute_rho(s)
    for i, a in sk.vertex_nodes.items():
        for x in range(len(sk.points)):
            dist = abs(sk.points[x] - sk.points[a])
            if dist <= s.tol:
                continue
            ratio = path_diameter(sk.points[sk.path(a, x)]) / dist
            assert ratio <= s.diam / rho * (1 + s.q ** d * s.diam / dist)


def test_snapped_ceil():
    assert snapped_ceil(2 * math.pi / (math.pi / 6)) == 12
    assert snapped_ceil(12.000000000000002) == 12
    assert snapped_ceil(11.5) == 12
    assert snapped_ceil(3.0001) == 4


def test_order_caps():
    assert order_caps(4, math.radians(30), math.radians(110)) == (3, 9, 33)
    assert order_caps(4, math.pi / 2, math.pi / 2) == (3, 0, 9)


def test_order_bounds_ex24(ex24):
    rep = order_bounds(ex24, 4)
    assert rep.cap_cutpoint == 33 and rep.cap_vertex == 9 and rep.cap_single == 3
    rows = {v.vertex: v for v in rep.vertices}
    assert rows[1].skeleton_degree == 3 and rows[1].fiber_count == 1
    assert rows[3].fiber_count == 3 and rows[3].skeleton_degree == 1
    assert rows[3].order_in_K == 9  # order of C in the whole dendrite


def test_order_bounds_ex22(ex22):
    rep = order_bounds(ex22, 4)
    assert (rep.cap_single, rep.cap_cutpoint) == (3, 18)


@pytest.mark.parametrize("name", VALID)
def test_orders_within_caps(name):
    rep = order_bounds(load_fixture(name), 5)
    assert rep.max_skeleton_degree <= rep.cap_cutpoint
    for v in rep.vertices:
        assert v.skeleton_degree <= v.cap
        if v.fiber_count == 1:
            assert v.skeleton_degree <= rep.n - 1
        assert v.order_in_K <= rep.cap_cutpoint


def test_point_order_estimate(ex24):
    assert point_order_estimate(ex24, 1, 3) == 9
    assert point_order_estimate(ex24, 0, 3) == 3
    # a point inside a cell rather than at a corner
    assert point_order_estimate(ex24, 0.35, 2) is None


def test_metric_constants_bundle(hata):
    mc = metric_constants(hata)
    assert mc.bt_constant == pytest.approx(bt_constant(hata))
    assert mc.q == pytest.approx(1 / SQRT2) and mc.diamP == pytest.approx(1)
    assert mc.theta_min <= mc.theta_max
