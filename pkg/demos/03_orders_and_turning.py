"""Order caps, vertex orders and the bounded-turning constant for the ex24 and Hata fixtures."""

import math

from polytree.analysis import empirical_bt, metric_constants, order_bounds
from polytree.system import load_fixture

for name in ("ex24", "hata"):
    s = load_fixture(name)
    mc = metric_constants(s)
    print(f"== {name}")
    print(f"rho={mc.rho:.6f} alpha={math.degrees(mc.alpha):.3f} deg "
          f"theta in [{math.degrees(mc.theta_min):.1f}, {math.degrees(mc.theta_max):.1f}] deg")
    rep = order_bounds(s, depth=5)
    print(f"caps: single={rep.cap_single} vertex={rep.cap_vertex} cut point={rep.cap_cutpoint}")
    for v in rep.vertices:
        print(f"  A{v.vertex}: {v.fiber_count} cell chain(s), order in main tree {v.skeleton_degree}, "
              f"order in K {v.order_in_K} (cap {v.cap})")
    emp = empirical_bt(s, 8, samples=1000, seed=1)
    print(f"turning: sampled max {emp.max_ratio:.4f}, guaranteed bound {mc.bt_constant:.4f}")
