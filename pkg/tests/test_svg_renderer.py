"""
Tests for svg_renderer
"""

import xml.etree.ElementTree as ET

from conftest import P
from scripts.front_model import DiagramVertex, FrontDiagram, FrontStrand
from scripts.svg_renderer import PALETTE, RenderStyle, render_svg

SVG = "{http://www.w3.org/2000/svg}"


def _parse(svg: bytes) -> ET.Element:
    return ET.fromstring(svg)


def _crossing_pair() -> FrontDiagram:
    rising = FrontStrand((P(0, 0), P(2, 2)))
    falling = FrontStrand((P(0, 2), P(2, 0)))
    return FrontDiagram((rising, falling))


def test_empty_diagram_is_valid_svg():
    root = _parse(render_svg(FrontDiagram()))
    assert root.tag == f"{SVG}svg"
    assert root.attrib["width"] == "48"
    assert list(root) == []


def test_under_strand_is_broken_at_the_crossing():
    root = _parse(render_svg(_crossing_pair()))
    lines = root.findall(f"{SVG}polyline")
    assert len(lines) == 3
    colors = [line.attrib["stroke"] for line in lines]
    assert colors.count(PALETTE[0]) == 2
    assert colors.count(PALETTE[1]) == 1


def test_break_length_opens_a_gap():
    style = RenderStyle(scale=10, margin=0, break_length=4)
    root = _parse(render_svg(_crossing_pair(), style))
    first, second = root.findall(f"{SVG}polyline")[:2]
    end = first.attrib["points"].split()[-1]
    start = second.attrib["points"].split()[0]
    assert end != start


def test_unknot_cusps_are_circled(unknot):
    root = _parse(render_svg(FrontDiagram((unknot,))))
    assert len(root.findall(f"{SVG}circle")) == len(unknot.cusps) == 2


def test_vertices_are_drawn():
    strand = FrontStrand((P(0, 0), P(1, 1), P(2, 0)))
    diagram = FrontDiagram((strand,), (DiagramVertex(P(0, 0)), DiagramVertex(P(2, 0))))
    root = _parse(render_svg(diagram))
    fills = [c.attrib["fill"] for c in root.findall(f"{SVG}circle")]
    assert fills.count(RenderStyle().vertex_color) == 2


def test_labels_and_title_are_escaped(unknot):
    svg = render_svg(FrontDiagram((unknot,)), labels=["<a>"], title="K & L")
    assert b"&lt;a&gt;" in svg
    assert b"K &amp; L" in svg
    root = _parse(svg)
    assert root.find(f"{SVG}text").text == "<a>"


def test_left_labels_anchor_at_end(unknot):
    root = _parse(render_svg(FrontDiagram((unknot,)), RenderStyle(label_position="left"), labels=["-1"]))
    assert root.find(f"{SVG}text").attrib["text-anchor"] == "end"


def test_shading_fills_closed_strands(unknot, stabilized_unknot):
    diagram = FrontDiagram((unknot, stabilized_unknot))
    plain = _parse(render_svg(diagram))
    shaded = _parse(render_svg(diagram, RenderStyle(shade_ribbon=True)))
    assert plain.findall(f"{SVG}polygon") == []
    assert len(shaded.findall(f"{SVG}polygon")) == 2


def test_large_fronts_are_scaled_down():
    strand = FrontStrand((P(0, 0), P(1000, 1)))
    root = _parse(render_svg(FrontDiagram((strand,)), RenderStyle(max_size=500, margin=0)))
    assert float(root.attrib["width"]) == 500
