"""Command-line interface: ``polytree <command> SPEC [SPEC2] [options]``.

Exit codes: 0 success, 1 the system or request fails a domain check,
2 usage, I/O or parse errors.  A spec argument of the form ``fixture:NAME``
loads one of the bundled specs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys as _sys
from pathlib import Path

from . import analysis, maintree, morphism
from .attractor import BudgetExceeded
from .render import RenderOptions, render_svg
from .system import AxiomError, PolygonalTreeSystem, SpecError, load_fixture, load_system, require_valid, validate

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(arg: str) -> PolygonalTreeSystem:
    try:
        if arg.startswith("fixture:"):
            return load_fixture(arg.split(":", 1)[1])
        return load_system(arg)
    except (OSError, FileNotFoundError) as exc:
        raise UsageError(f"cannot read {arg}: {exc}") from exc
    except SpecError as exc:
        raise UsageError(f"invalid spec {arg}: {exc}") from exc


def _clean(obj):
    """Replace non-finite floats (not representable in JSON) by null."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}") from exc
    else:
        _sys.stdout.write(text)


def _parse_point(text: str) -> complex:
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--point expects X,Y, got {text!r}") from exc
    return complex(x, y)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    report = validate(_load(args.spec))
    _emit(dumps(report.to_dict()), args.out)
    return EXIT_OK if report.accepted else EXIT_DOMAIN


def _valid(arg: str) -> PolygonalTreeSystem:
    s = _load(arg)
    require_valid(s)
    return s


def cmd_render(args) -> int:
    s = _valid(args.spec)
    opts = RenderOptions(
        depth=args.depth,
        width=args.width,
        height=args.height,
        show_cells=not args.no_cells,
        show_tree=not args.no_tree,
        show_ramification=not args.no_tree,
    )
    tree = ramification = None
    if opts.show_tree:
        tdepth = args.tree_depth if args.tree_depth is not None else min(args.depth, 6)
        tree = maintree.skeleton_tree(s, tdepth)
        ramification = maintree.main_ramification_points(s, tdepth, tree)
    _emit(render_svg(s, opts, tree, ramification), args.out)
    return EXIT_OK


def cmd_tree(args) -> int:
    s = _valid(args.spec)
    sk = maintree.skeleton_tree(s, args.depth)
    ram = maintree.main_ramification_points(s, args.depth, sk)
    for r in ram:
        if r.provisional:
            v = sk.node_at(r.point, s.tol)
            sk.provisional.add(v)
    _emit(dumps({"name": s.name, **sk.to_dict(ram)}), args.out)
    return EXIT_OK


def cmd_orders(args) -> int:
    s = _valid(args.spec)
    report = analysis.order_bounds(s, args.depth)
    _emit(dumps({"name": s.name, **report.to_dict()}), args.out)
    return EXIT_OK


def cmd_metrics(args) -> int:
    s = _valid(args.spec)
    _emit(dumps(analysis.metrics_report(s, args.depth, args.samples, args.seed)), args.out)
    return EXIT_OK


def cmd_morphism(args) -> int:
    a, b = _valid(args.spec), _valid(args.spec2)
    eq = morphism.check_equivalence(a, b, args.search_permutations)
    out: dict = {"equivalent": eq.equivalent, **eq.to_dict()}
    if eq.equivalent:
        cert = morphism.holder_certificate(a, b, require_equivalent=False)
        out.update(cert.to_dict())
        sk = maintree.skeleton_tree(a, min(args.depth, 6))
        pts = morphism.sample_points(sk.points, args.samples, args.seed)
        res = morphism.conjugacy_residuals(a, b, pts, args.depth, eq.permutation)
        out["residuals"] = res.to_dict()
    _emit(dumps(out), args.out)
    return EXIT_OK if eq.equivalent else EXIT_DOMAIN


def cmd_map_point(args) -> int:
    a, b = _valid(args.spec), _valid(args.spec2)
    eq = morphism.check_equivalence(a, b, args.search_permutations)
    if not eq.equivalent:
        _emit(dumps({"equivalent": False, **eq.to_dict()}), args.out)
        return EXIT_DOMAIN
    res = morphism.conjugate_point(a, b, _parse_point(args.point), args.depth, eq.permutation)
    _emit(dumps({"input": [args.point_value.real, args.point_value.imag], "depth": args.depth, **res.to_dict()}), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polytree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, depth: int, two_specs: bool = False):
        sp.add_argument("spec", help="spec file (JSON) or fixture:NAME")
        if two_specs:
            sp.add_argument("spec2", help="second spec file or fixture:NAME")
        sp.add_argument("--depth", type=int, default=depth)
        sp.add_argument("--out", help="write here instead of standard output")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=1000)
        sp.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
        sp.add_argument("--search-permutations", action="store_true")
        return sp

    common(sub.add_parser("validate", help="check the tree-system axioms"), 0).set_defaults(func=cmd_validate)
    r = common(sub.add_parser("render", help="SVG of the refinement and main tree"), 6)
    r.add_argument("--width", type=int, default=800)
    r.add_argument("--height", type=int, default=800)
    r.add_argument("--tree-depth", type=int)
    r.add_argument("--no-tree", action="store_true")
    r.add_argument("--no-cells", action="store_true")
    r.set_defaults(func=cmd_render)
    common(sub.add_parser("tree", help="main tree skeleton as JSON"), 4).set_defaults(func=cmd_tree)
    common(sub.add_parser("orders", help="order caps and vertex orders"), 4).set_defaults(func=cmd_orders)
    common(sub.add_parser("metrics", help="separation, contact angle, bounded turning"), 8).set_defaults(
        func=cmd_metrics
    )
    m = common(sub.add_parser("morphism", help="equivalence and Hölder exponents"), 12, two_specs=True)
    m.set_defaults(func=cmd_morphism, samples=100)
    mp = common(sub.add_parser("map-point", help="image of a point under the conjugacy"), 12, two_specs=True)
    mp.add_argument("--point", required=True, help="X,Y")
    mp.set_defaults(func=cmd_map_point)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "map-point":
            args.point_value = _parse_point(args.point)
        if args.depth < 0:
            raise UsageError("--depth must be non-negative")
        return args.func(args)
    except UsageError as exc:
        print(f"polytree: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    except (AxiomError, BudgetExceeded, morphism.MorphismError, maintree.SkeletonError) as exc:
        print(f"polytree: {exc}", file=_sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"polytree: {exc}", file=_sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    _sys.exit(main())
