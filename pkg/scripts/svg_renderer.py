"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
SVG rendering of fronts, graph fronts and surgery diagrams

The front plane is drawn with y to the right and z up. At a crossing the
strand with the larger slope passes behind and is drawn with a short break.
Cusps get a small open circle, diagram vertices a dot.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from jinja2 import Environment, FileSystemLoader, select_autoescape

from scripts.front_model import FrontDiagram, FrontPoint, crossings
from scripts.path_utils import get_templates_dir

logger = logging.getLogger(__name__)

PALETTE = ("#1f3b73", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#117a65", "#5d6d7e")


@dataclass(frozen=True)
class RenderStyle:
    """Sizes are in SVG pixels"""

    scale: float = 40.0
    max_size: float = 1600.0
    margin: float = 24.0
    stroke_width: float = 1.5
    cusp_size: float = 2.5
    break_length: float = 6.0
    vertex_radius: float = 3.5
    vertex_color: str = "#000000"
    shade_ribbon: bool = False
    shade_color: str = "#9fb3c8"
    shade_opacity: float = 0.25
    label_position: str = "right"  # "right" | "left"
    font_family: str = "Helvetica, Arial, sans-serif"
    font_size: int = 11


def _fmt(value: float) -> str:
    return f"{value:.3f}".rstrip("0").rstrip(".")


class _Canvas:
    """Maps exact front coordinates to SVG pixels"""

    def __init__(self, diagram: FrontDiagram, style: RenderStyle):
        points = [p for s in diagram.strands for p in s.points] + [v.position for v in diagram.vertices]
        self.style = style
        if not points:
            self.y0 = self.z1 = Fraction(0)
            self.scale = style.scale
            self.width = self.height = 2 * style.margin
            return
        self.y0 = min(p.y for p in points)
        self.z1 = max(p.z for p in points)
        span_y = float(max(p.y for p in points) - self.y0)
        span_z = float(self.z1 - min(p.z for p in points))
        span = max(span_y, span_z, 1e-9)
        self.scale = min(style.scale, style.max_size / span)
        self.width = span_y * self.scale + 2 * style.margin
        self.height = span_z * self.scale + 2 * style.margin

    def xy(self, p: FrontPoint) -> Tuple[float, float]:
        return (
            self.style.margin + float(p.y - self.y0) * self.scale,
            self.style.margin + float(self.z1 - p.z) * self.scale,
        )


def _under_breaks(diagram: FrontDiagram) -> Dict[Tuple[int, int], List[Fraction]]:
    """Edge parameters (0..1) where an edge passes under another strand"""
    breaks: Dict[Tuple[int, int], List[Fraction]] = {}
    for c in crossings(diagram):
        strand = diagram.strands[c.under.strand]
        a, b = strand.edge(c.under.index)
        t = (c.point.y - a.y) / (b.y - a.y)
        breaks.setdefault((c.under.strand, c.under.index), []).append(t)
    return breaks


def _edge_pieces(a, b, ts: Sequence[Fraction], gap: float) -> List[List[Tuple[float, float]]]:
    """Split a pixel segment a -> b around the parameters ts, leaving `gap` pixels open at each"""
    length = max(((b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2) ** 0.5, 1e-9)
    half = min(gap / 2 / length, 0.45)

    def at(t: float) -> Tuple[float, float]:
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))

    pieces = []
    start = 0.0
    for t in sorted(float(t) for t in ts):
        stop = max(start, t - half)
        pieces.append([at(start), at(stop)])
        start = min(1.0, t + half)
    pieces.append([at(start), at(1.0)])
    return pieces


def _strand_pieces(diagram: FrontDiagram, k: int, canvas: _Canvas, breaks) -> List[List[Tuple[float, float]]]:
    """Polylines of one strand, merged between breaks"""
    strand = diagram.strands[k]
    polylines: List[List[Tuple[float, float]]] = []
    current: List[Tuple[float, float]] = []
    for i, (a, b) in enumerate(strand.edges()):
        pa, pb = canvas.xy(a), canvas.xy(b)
        ts = breaks.get((k, i), [])
        pieces = _edge_pieces(pa, pb, ts, canvas.style.break_length) if ts else [[pa, pb]]
        first, rest = pieces[0], pieces[1:]
        if current and current[-1] == first[0]:
            current.append(first[1])
        else:
            if current:
                polylines.append(current)
            current = list(first)
        for piece in rest:
            polylines.append(current)
            current = list(piece)
    if current:
        polylines.append(current)
    return polylines


def _points_attr(points: Sequence[Tuple[float, float]]) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


def render_svg(
    diagram: FrontDiagram,
    style: Optional[RenderStyle] = None,
    labels: Optional[Sequence[str]] = None,
    title: Optional[str] = None,
) -> bytes:
    """
    Render a front diagram to SVG

    Args:
        diagram: strands and optional graph vertices
        style: sizes and colors
        labels: one label per strand (e.g. surgery coefficients), drawn at the
            strand's rightmost or leftmost point
        title: optional <title> element

    Returns:
        UTF-8 encoded SVG document; element order follows strand order
    """
    style = style or RenderStyle()
    canvas = _Canvas(diagram, style)
    breaks = _under_breaks(diagram)

    fills, pieces, cusps, text = [], [], [], []
    for k, strand in enumerate(diagram.strands):
        color = PALETTE[k % len(PALETTE)]
        if style.shade_ribbon and strand.closed:
            fills.append(_points_attr([canvas.xy(p) for p in strand.points]))
        for polyline in _strand_pieces(diagram, k, canvas, breaks):
            pieces.append({"points": _points_attr(polyline), "color": color})
        for i in sorted(strand.cusps):
            x, y = canvas.xy(strand.points[i])
            cusps.append({"x": _fmt(x), "y": _fmt(y), "color": color})
        if labels and k < len(labels) and labels[k] and strand.points:
            right = style.label_position == "right"
            anchor_point = (max if right else min)(strand.points, key=lambda p: (p.y, p.z))
            x, y = canvas.xy(anchor_point)
            text.append(
                {
                    "x": _fmt(x + (6 if right else -6)),
                    "y": _fmt(y),
                    "anchor": "start" if right else "end",
                    "color": color,
                    "text": labels[k],
                }
            )
    vertices = []
    for v in diagram.vertices:
        x, y = canvas.xy(v.position)
        vertices.append({"x": _fmt(x), "y": _fmt(y)})

    env = Environment(
        loader=FileSystemLoader(str(get_templates_dir())),
        autoescape=select_autoescape(enabled_extensions=("j2",), default_for_string=True),
        keep_trailing_newline=True,
    )
    svg = env.get_template("front.svg.j2").render(
        width=_fmt(canvas.width),
        height=_fmt(canvas.height),
        title=title,
        style=style,
        fills=fills,
        pieces=pieces,
        cusps=cusps,
        vertices=vertices,
        labels=text,
    )
    logger.debug(f"rendered {len(diagram.strands)} strand(s), {sum(len(v) for v in breaks.values())} break(s)")
    return svg.encode("utf-8")
