"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Legendrian graph fronts

A graph front is a set of open front strands (the edges) whose ends sit on
declared vertices. The cyclic order of edge ends at a vertex is read off the
front: ends leaving to the left by decreasing slope, then ends leaving to the
right by increasing slope. This is the counterclockwise order of the edge
directions in the contact plane.

The layout part splits every edge into two vertex collars and a core, and
picks the gap interval of the core used by the realizer.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from scripts.errors import DegenerateExtent, GapNotFound, GenericityError, SchemaError, ValencyOneVertex
from scripts.front_model import (
    Crossing,
    DiagramVertex,
    FrontDiagram,
    FrontPoint,
    FrontStrand,
    StrandEnd,
    check_generic,
    crossings,
    end_incidence,
    point_from_doc,
    point_to_doc,
)
from scripts.schemas import GraphDocument, GraphEdgeDoc, GraphVertexDoc, load_document, to_document
from scripts.utils import format_rational

logger = logging.getLogger(__name__)

SOURCE = "source"
TARGET = "target"
LEFT = "left"
RIGHT = "right"

# Collar fraction of an end segment
MAX_COLLAR = Fraction(1, 4)


@dataclass(frozen=True)
class EndIncidence:
    edge: int
    end: str
    slope: Fraction
    side: str


@dataclass(frozen=True)
class GraphVertex:
    id: int
    position: FrontPoint
    incident_ends: Tuple[EndIncidence, ...] = ()

    @property
    def valency(self) -> int:
        return len(self.incident_ends)

    def arcs(self) -> List[Tuple[int, str]]:
        return [(inc.edge, inc.end) for inc in self.incident_ends]


@dataclass(frozen=True)
class GraphEdge:
    id: int
    source: int
    target: int
    front: FrontStrand

    def end_point(self, end: str) -> FrontPoint:
        return self.front.points[0] if end == SOURCE else self.front.points[-1]

    def end_neighbour(self, end: str) -> FrontPoint:
        return self.front.points[1] if end == SOURCE else self.front.points[-2]

    def vertex_of(self, end: str) -> int:
        return self.source if end == SOURCE else self.target

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class LegendrianGraphFront:
    vertices: Tuple[GraphVertex, ...]
    edges: Tuple[GraphEdge, ...]
    name: Optional[str] = None
    _vertex_index: Dict[int, int] = field(init=False, repr=False, compare=False, hash=False)
    _edge_index: Dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "_vertex_index", {v.id: i for i, v in enumerate(self.vertices)})
        object.__setattr__(self, "_edge_index", {e.id: i for i, e in enumerate(self.edges)})

    def vertex(self, vid: int) -> GraphVertex:
        return self.vertices[self._vertex_index[vid]]

    def edge(self, eid: int) -> GraphEdge:
        return self.edges[self._edge_index[eid]]

    def edge_position(self, eid: int) -> int:
        """Index of the edge's strand in `diagram()`"""
        return self._edge_index[eid]

    def edge_ids(self) -> List[int]:
        return sorted(self._edge_index)

    def end_vertex(self, eid: int, end: str) -> int:
        return self.edge(eid).vertex_of(end)

    def incidence(self, eid: int, end: str) -> EndIncidence:
        for inc in self.vertex(self.end_vertex(eid, end)).incident_ends:
            if inc.edge == eid and inc.end == end:
                return inc
        raise KeyError((eid, end))

    def diagram(self) -> FrontDiagram:
        return graph_diagram(self)


def cyclic_order(ends: Iterable[EndIncidence]) -> Tuple[EndIncidence, ...]:
    ends = list(ends)
    left = sorted((e for e in ends if e.side == LEFT), key=lambda e: (-e.slope, e.edge, e.end))
    right = sorted((e for e in ends if e.side == RIGHT), key=lambda e: (e.slope, e.edge, e.end))
    return tuple(left + right)


def graph_diagram(graph: LegendrianGraphFront) -> FrontDiagram:
    """The underlying FrontDiagram, one open strand per edge in table order"""
    ends: Dict[int, List[StrandEnd]] = {v.id: [] for v in graph.vertices}
    for k, e in enumerate(graph.edges):
        ends[e.source].append(StrandEnd(k, "start"))
        ends[e.target].append(StrandEnd(k, "end"))
    return FrontDiagram(
        tuple(e.front for e in graph.edges),
        tuple(DiagramVertex(v.position, tuple(ends[v.id])) for v in graph.vertices),
    )


def assemble_graph(
    vertices: Sequence[Tuple[int, FrontPoint]],
    edges: Sequence[Tuple[int, int, int, FrontStrand]],
    name: Optional[str] = None,
    allow_isolated: bool = False,
) -> LegendrianGraphFront:
    """
    Validate raw vertex and edge tables and compute the cyclic orders

    Args:
        vertices: (id, position) pairs
        edges: (id, source id, target id, open front strand) tuples
        name: optional graph name
        allow_isolated: accept vertices without edges (single-disk pages)

    Raises:
        SchemaError: duplicate ids or dangling references
        ValencyOneVertex: a vertex with exactly one edge end
        GenericityError: the front is not generic; details list every violation
    """
    vertex_ids = [vid for vid, _ in vertices]
    edge_ids = [eid for eid, _, _, _ in edges]
    if len(set(vertex_ids)) != len(vertex_ids) or len(set(edge_ids)) != len(edge_ids):
        raise SchemaError("duplicate vertex or edge id")
    positions = dict(vertices)
    for eid, src, tgt, strand in edges:
        if src not in positions or tgt not in positions:
            raise SchemaError(f"edge {eid} references an unknown vertex")
        if strand.closed:
            raise SchemaError(f"edge {eid} must be an open strand")

    mismatches = []
    for eid, src, tgt, strand in edges:
        for end, vid, at in ((SOURCE, src, strand.points[0]), (TARGET, tgt, strand.points[-1])):
            if at != positions[vid]:
                mismatches.append(
                    {
                        "kind": "vertex mismatch",
                        "message": f"edge {eid} {end} is not at vertex {vid}",
                        "y": format_rational(at.y),
                        "z": format_rational(at.z),
                    }
                )
    if mismatches:
        raise GenericityError("edge ends do not match vertex positions", mismatches)

    valency = {vid: 0 for vid in vertex_ids}
    for _, src, tgt, _ in edges:
        valency[src] += 1
        valency[tgt] += 1
    for vid in vertex_ids:
        if valency[vid] == 1:
            raise ValencyOneVertex(f"vertex {vid} has valency 1", [{"kind": "valency one", "vertex": vid}])
        if valency[vid] == 0 and not allow_isolated:
            raise GenericityError(
                f"vertex {vid} has no edges", [{"kind": "isolated vertex", "message": f"vertex {vid}"}]
            )

    draft = LegendrianGraphFront(
        tuple(GraphVertex(vid, pos) for vid, pos in vertices),
        tuple(GraphEdge(eid, src, tgt, strand) for eid, src, tgt, strand in edges),
        name,
    )
    report = check_generic(draft.diagram())
    if not report.ok:
        logger.warning(f"graph {name or ''} rejected: {report.kinds()}")
        raise GenericityError(
            "graph front is not generic", [v.model_dump(exclude_none=True) for v in report.violations]
        )

    incidences: Dict[int, List[EndIncidence]] = {vid: [] for vid in vertex_ids}
    for e in draft.edges:
        for end, vid, strand_end in ((SOURCE, e.source, "start"), (TARGET, e.target, "end")):
            side, s = end_incidence(e.front, strand_end)
            incidences[vid].append(EndIncidence(e.id, end, s, side))

    graph = LegendrianGraphFront(
        tuple(GraphVertex(vid, pos, cyclic_order(incidences[vid])) for vid, pos in vertices),
        draft.edges,
        name,
    )
    logger.info(
        f"graph {name or '(unnamed)'}: {len(graph.vertices)} vertices, {len(graph.edges)} edges, "
        f"{report.crossing_count} crossings"
    )
    return graph


def parse_graph(data) -> LegendrianGraphFront:
    """Build a validated graph from an LGF document (dict)"""
    doc = load_document(GraphDocument, data)
    vertices = [(v.id, point_from_doc(v.position)) for v in doc.vertices]
    edges = [
        (e.id, e.source, e.target, FrontStrand(tuple(point_from_doc(p) for p in e.points), frozenset(e.cusps), False))
        for e in doc.edges
    ]
    return assemble_graph(vertices, edges, doc.name, allow_isolated=not edges)


def serialize_graph(graph: LegendrianGraphFront) -> dict:
    doc = GraphDocument(
        name=graph.name,
        vertices=[GraphVertexDoc(id=v.id, position=point_to_doc(v.position)) for v in graph.vertices],
        edges=[
            GraphEdgeDoc(
                id=e.id,
                source=e.source,
                target=e.target,
                points=[point_to_doc(p) for p in e.front.points],
                cusps=sorted(e.front.cusps),
            )
            for e in graph.edges
        ],
    )
    return to_document(doc)


def graph_components(graph: LegendrianGraphFront) -> List[Set[int]]:
    """Vertex sets of the connected components, ordered by smallest vertex id"""
    g = nx.MultiGraph()
    g.add_nodes_from(v.id for v in graph.vertices)
    g.add_edges_from((e.source, e.target, e.id) for e in graph.edges)
    return sorted((set(c) for c in nx.connected_components(g)), key=min)


# ---------------------------------------------------------------------------
# Layout: collars, cores and gaps
# ---------------------------------------------------------------------------

def point_along(a: FrontPoint, b: FrontPoint, t: Fraction) -> FrontPoint:
    return FrontPoint(a.y + t * (b.y - a.y), a.z + t * (b.z - a.z))


def point_at_y(a: FrontPoint, b: FrontPoint, y: Fraction) -> FrontPoint:
    return point_along(a, b, (y - a.y) / (b.y - a.y))


@dataclass(frozen=True)
class HandleExtent:
    """Collar fractions of the two end segments of an edge"""

    edge: int
    source_fraction: Fraction
    target_fraction: Fraction

    def fraction(self, end: str) -> Fraction:
        return self.source_fraction if end == SOURCE else self.target_fraction


@dataclass(frozen=True)
class EndZone:
    """
    Collar of one edge end: junction zone from the vertex to `inner`,
    connector zone from `inner` to `collar`, where the core starts
    """

    end: str
    vertex: FrontPoint
    inner: FrontPoint
    collar: FrontPoint


@dataclass(frozen=True)
class EdgeLayout:
    edge: int
    extent: HandleExtent
    source: EndZone
    target: EndZone
    core: FrontStrand
    gap_segment: int
    gap_start: FrontPoint
    gap_end: FrontPoint

    def zone(self, end: str) -> EndZone:
        return self.source if end == SOURCE else self.target

    def source_half(self) -> Tuple[FrontPoint, ...]:
        """Core from the source collar to the gap (travel order)"""
        return self.core.points[: self.gap_segment + 1] + (self.gap_start,)

    def target_half(self) -> Tuple[FrontPoint, ...]:
        """Core from the gap to the target collar (travel order)"""
        return (self.gap_end,) + self.core.points[self.gap_segment + 1:]

    def gap_line(self) -> Tuple[Fraction, Fraction]:
        """(slope, intercept) of the core segment carrying the gap"""
        m = (self.gap_end.z - self.gap_start.z) / (self.gap_end.y - self.gap_start.y)
        return m, self.gap_start.z - m * self.gap_start.y

    def gap_midpoint(self) -> FrontPoint:
        return point_along(self.gap_start, self.gap_end, Fraction(1, 2))

    def zone_points(self) -> List[FrontPoint]:
        return [
            self.source.inner,
            self.source.collar,
            self.target.inner,
            self.target.collar,
            self.gap_start,
            self.gap_end,
        ]


@dataclass(frozen=True)
class GraphLayout:
    edges: Dict[int, EdgeLayout] = field(hash=False)
    crossings: Tuple[Crossing, ...] = ()

    def __getitem__(self, eid: int) -> EdgeLayout:
        return self.edges[eid]


def _segment_crossings(graph: LegendrianGraphFront, found: Sequence[Crossing]) -> Dict[Tuple[int, int], List[FrontPoint]]:
    """Crossing points keyed by (edge id, segment index)"""
    table: Dict[Tuple[int, int], List[FrontPoint]] = {}
    for c in found:
        for ref in (c.over, c.under):
            eid = graph.edges[ref.strand].id
            table.setdefault((eid, ref.index), []).append(c.point)
    return table


def default_extent(edge: GraphEdge, on_segment: Dict[Tuple[int, int], List[FrontPoint]]) -> HandleExtent:
    """
    Largest collar fraction up to 1/4 of each end segment that stays below
    half the distance to the first crossing on that segment
    """
    last = edge.front.edge_count() - 1
    fractions = {}
    for end, seg in ((SOURCE, 0), (TARGET, last)):
        at, towards = edge.end_point(end), edge.end_neighbour(end)
        lam = MAX_COLLAR
        for x in on_segment.get((edge.id, seg), []):
            t = (x.y - at.y) / (towards.y - at.y)
            lam = min(lam, t / 2)
        fractions[end] = lam
    return HandleExtent(edge.id, fractions[SOURCE], fractions[TARGET])


def edge_core_segments(edge: GraphEdge, extent: HandleExtent) -> FrontStrand:
    """
    The core of an edge: the sub-polyline between the two collar points

    Point indices (and therefore cusp indices) agree with the edge front.

    Raises:
        DegenerateExtent: collar fractions outside (0, 1) or overlapping collars
    """
    src, tgt = extent.source_fraction, extent.target_fraction
    if not (0 < src < 1 and 0 < tgt < 1):
        raise DegenerateExtent(f"edge {edge.id}: collar fractions must lie in (0, 1)")
    pts = edge.front.points
    if len(pts) == 2 and src + tgt >= 1:
        raise DegenerateExtent(f"edge {edge.id}: collars cover the whole edge")
    start = point_along(pts[0], pts[1], src)
    stop = point_along(pts[-1], pts[-2], tgt)
    return FrontStrand((start,) + pts[1:-1] + (stop,), edge.front.cusps, False)


def find_gap(edge_id: int, core: FrontStrand, on_segment: Dict[Tuple[int, int], List[FrontPoint]]):
    """
    Middle third of the longest crossing- and corner-free piece of the core,
    measured in y; ties go to the leftmost piece

    Returns:
        (segment index, gap start, gap end) in travel order
    """
    best = None
    for j, (a, b) in enumerate(core.edges()):
        lo, hi = min(a.y, b.y), max(a.y, b.y)
        cuts = sorted({lo, hi} | {x.y for x in on_segment.get((edge_id, j), []) if lo < x.y < hi})
        for y0, y1 in zip(cuts, cuts[1:]):
            key = (-(y1 - y0), y0, j)
            if best is None or key < best[0]:
                best = (key, j, y0, y1)
    if best is None or best[0][0] == 0:
        raise GapNotFound(f"edge {edge_id}: no crossing-free piece on the core")
    _, j, y0, y1 = best
    a, b = core.edge(j)
    third = (y1 - y0) / 3
    lo_pt, hi_pt = point_at_y(a, b, y0 + third), point_at_y(a, b, y1 - third)
    if b.y > a.y:
        return j, lo_pt, hi_pt
    return j, hi_pt, lo_pt


def layout_edge(edge: GraphEdge, extent: HandleExtent, on_segment) -> EdgeLayout:
    core = edge_core_segments(edge, extent)
    zones = {}
    for end in (SOURCE, TARGET):
        at, towards = edge.end_point(end), edge.end_neighbour(end)
        lam = extent.fraction(end)
        zones[end] = EndZone(end, at, point_along(at, towards, lam / 2), point_along(at, towards, lam))
    j, g0, g1 = find_gap(edge.id, core, on_segment)
    return EdgeLayout(edge.id, extent, zones[SOURCE], zones[TARGET], core, j, g0, g1)


def compute_layout(graph: LegendrianGraphFront) -> GraphLayout:
    found = tuple(crossings(graph.diagram()))
    on_segment = _segment_crossings(graph, found)
    layouts = {e.id: layout_edge(e, default_extent(e, on_segment), on_segment) for e in graph.edges}
    logger.debug(f"layout: {len(layouts)} edges, {len(found)} graph crossings")
    return GraphLayout(layouts, found)
