"""Hand-written SVG output for refinements and main trees."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .attractor import refine
from .maintree import RamificationPoint, SkeletonTree
from .system import PolygonalTreeSystem

MIN_SIZE = 64


@dataclass(frozen=True)
class RenderOptions:
    depth: int = 6
    width: int = 800
    height: int = 800
    cell_fill: str = "#8fb3d9"
    cell_stroke: str = "#2b4c7e"
    cell_stroke_width: float = 0.5
    tree_stroke: str = "#c0392b"
    tree_stroke_width: float = 1.5
    marker_fill: str = "#ffffff"
    marker_stroke: str = "#000000"
    marker_radius: float = 5.0
    show_cells: bool = True
    show_tree: bool = True
    show_ramification: bool = True

    def __post_init__(self):
        if self.width < MIN_SIZE or self.height < MIN_SIZE:
            raise ValueError(f"width and height must be at least {MIN_SIZE} pixels")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")


def _num(x: float) -> str:
    s = f"{x:.10g}"
    return "0" if s == "-0" else s


def _xy(z: complex) -> str:
    # y is flipped so the picture has the usual mathematical orientation
    return f"{_num(z.real)} {_num(-z.imag)}"


def render_svg(
    sys: PolygonalTreeSystem,
    options: RenderOptions,
    tree: SkeletonTree | None = None,
    ramification: list[RamificationPoint] | None = None,
) -> str:
    xs = [v.real for v in sys.vertices]
    ys = [v.imag for v in sys.vertices]
    w, h = max(xs) - min(xs), max(ys) - min(ys)
    margin = 0.05 * max(w, h)
    box = (min(xs) - margin, -max(ys) - margin, w + 2 * margin, h + 2 * margin)
    # pixel widths are converted into viewBox units
    unit = max(box[2] / options.width, box[3] / options.height)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{options.width}" height="{options.height}" '
        f'viewBox="{" ".join(_num(v) for v in box)}">',
    ]
    if sys.name:
        out.append(f"<title>{escape(sys.name)}</title>")
    if options.show_cells:
        out.append(
            f'<g id="cells" fill="{options.cell_fill}" stroke="{options.cell_stroke}" '
            f'stroke-width="{_num(options.cell_stroke_width * unit)}" stroke-linejoin="round">'
        )
        for c in refine(sys, options.depth):
            d = "M" + " L".join(_xy(v) for v in c.polygon.vertices) + " Z"
            out.append(f'<path d="{d}"/>')
        out.append("</g>")
    else:
        d = "M" + " L".join(_xy(v) for v in sys.vertices) + " Z"
        out.append(f'<path id="outline" d="{d}" fill="none" stroke="{options.cell_stroke}" '
                   f'stroke-width="{_num(options.cell_stroke_width * unit)}"/>')
    if options.show_tree and tree is not None:
        pts = tree.points
        d = " ".join(f"M{_xy(complex(pts[e.a]))} L{_xy(complex(pts[e.b]))}" for e in tree.edges)
        out.append(
            f'<path id="main-tree" d="{d}" fill="none" stroke="{options.tree_stroke}" '
            f'stroke-width="{_num(options.tree_stroke_width * unit)}" stroke-linecap="round"/>'
        )
    if options.show_ramification and ramification:
        out.append(
            f'<g id="ramification" fill="{options.marker_fill}" stroke="{options.marker_stroke}" '
            f'stroke-width="{_num(unit)}">'
        )
        r = _num(options.marker_radius * unit)
        for rp in ramification:
            z = rp.point
            out.append(f'<circle cx="{_num(z.real)}" cy="{_num(-z.imag)}" r="{r}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
