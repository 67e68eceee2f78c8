"""Two combinatorially equal systems and the Hölder conjugacy between their attractors."""

from polytree.maintree import skeleton_tree
from polytree.morphism import (
    check_equivalence,
    conjugacy_residuals,
    conjugate_point,
    holder_certificate,
    sample_points,
    signature,
)
from polytree.system import load_fixture

a, b = load_fixture("ex22"), load_fixture("ex22_variant")
print("ratios:", [round(s.ratio, 6) for s in a.maps], "vs", [round(s.ratio, 6) for s in b.maps])
print("signature:", signature(a).to_dict())
print("equivalent:", check_equivalence(a, b).equivalent)

cert = holder_certificate(a, b)
print(f"exponents beta={cert.beta:.6f} beta'={cert.beta_prime:.6f}")

contact = a.maps[0](a.vertex(3))
img = conjugate_point(a, b, contact, 12)
print(f"contact point {contact:.6f} maps to {img.point:.6f} (error <= {img.bound:.3e})")

pts = sample_points(skeleton_tree(a, 6).points, 100, seed=0)
res = conjugacy_residuals(a, b, pts, 12)
print(f"phi(S_i p) vs S'_i(phi p): worst {res.max_residual:.3e}, allowed {2 * res.bound:.3e}")
