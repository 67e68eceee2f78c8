"""Check the tree-system axioms on the bundled specs, including two broken ones."""

from polytree.system import contact_graph, load_fixture, validate

for name in ["ex22", "hata", "ex24", "zipper", "overlap", "disjoint"]:
    s = load_fixture(name)
    r = validate(s)
    flags = " ".join(f"{k}={'y' if getattr(r, k + '_ok') else 'n'}" for k in ("d1", "d2", "d3", "d4"))
    print(f"{name:9s} n={s.n} m={s.m}  {flags}  accepted={r.accepted}")
    for v in r.violations:
        print(f"           {v.axiom}: {v.message}")

# in an accepted system the pieces and their shared corners form a tree
cg = contact_graph(load_fixture("ex24"))
print("\nex24 contact points:", len(cg.contacts), "edges:", len(cg.edges), "tree:", cg.is_tree)
