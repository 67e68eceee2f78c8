"""Arcs between vertices, the exact branch points of the main tree, and a rendered figure.

Writes hata.svg and ex24.svg next to this script.
"""

from pathlib import Path

from polytree.maintree import (
    build_multizipper,
    combinatorial_main_tree,
    find_chain,
    main_ramification_points,
    skeleton_tree,
)
from polytree.render import RenderOptions, render_svg
from polytree.system import load_fixture

here = Path(__file__).parent
hata = load_fixture("hata")

chain = find_chain(hata, 2, 7)
print("chain from A2 to A7 runs through pieces", chain.links, "touching at", chain.contacts[1:-1])

zipper = build_multizipper(hata)
print(f"multizipper: {len(zipper.nodes)} vertex pairs")
for (i, j), entries in list(zipper.nodes.items())[:3]:
    print(f"  arc {i}-{j}:", ", ".join(f"S{e.map_index}(arc {e.u}-{e.v})" for e in entries))

# branch points are found exactly, no refinement involved
base = combinatorial_main_tree(hata)
print("branch points:", [complex(round(z.real, 12), round(z.imag, 12)) for z in base.points[hata.n:]])

for d in (2, 5, 8):
    sk = skeleton_tree(hata, d)
    print(f"depth {d}: {len(sk.points)} nodes, {len(sk.leaves)} leaves, max degree {max(sk.degrees)}")

for name, depth in (("hata", 10), ("ex24", 5)):
    s = load_fixture(name)
    sk = skeleton_tree(s, 6)
    ram = main_ramification_points(s, 6, sk)
    svg = render_svg(s, RenderOptions(depth=depth), sk, ram)
    (here / f"{name}.svg").write_text(svg)
    print(f"wrote {name}.svg with {len(ram)} main ramification point(s)")
