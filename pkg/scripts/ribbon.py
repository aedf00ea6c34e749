"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Abstract ribbon of a Legendrian graph

The ribbon is an oriented fatgraph: one 0-handle (disk) per vertex with its
attaching arcs in the vertex's cyclic order, one untwisted 1-handle (band)
per edge. Boundary components are traced on half-edges (edge, end):
go along the edge to its other end, then step to the next arc in the cyclic
order at that vertex.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from scripts.front_model import FrontDiagram, FrontPoint, FrontStrand
from scripts.legendrian_graph import (
    SOURCE,
    TARGET,
    GraphLayout,
    LegendrianGraphFront,
    compute_layout,
)

logger = logging.getLogger(__name__)

HalfEdge = Tuple[int, str]


def other_end(end: str) -> str:
    return TARGET if end == SOURCE else SOURCE


def side_letter(half_edge: HalfEdge) -> str:
    """Letter of the band side traversed when leaving along this half-edge"""
    eid, end = half_edge
    return f"e{eid}{'+' if end == SOURCE else '-'}"


@dataclass(frozen=True)
class ZeroHandle:
    vertex: int
    position: FrontPoint
    arcs: Tuple[HalfEdge, ...]

    def arc_index(self, half_edge: HalfEdge) -> int:
        return self.arcs.index(half_edge)


@dataclass(frozen=True)
class OneHandle:
    edge: int
    source: int
    target: int
    core: FrontStrand

    def vertex_of(self, end: str) -> int:
        return self.source if end == SOURCE else self.target


@dataclass(frozen=True)
class AbstractRibbon:
    zero_handles: Tuple[ZeroHandle, ...]
    one_handles: Tuple[OneHandle, ...]
    boundary_words: Tuple[Tuple[str, ...], ...]

    @property
    def euler_characteristic(self) -> int:
        return len(self.zero_handles) - len(self.one_handles)

    @property
    def boundary_count(self) -> int:
        return len(self.boundary_words)

    @property
    def component_count(self) -> int:
        spine = nx.MultiGraph()
        spine.add_nodes_from(z.vertex for z in self.zero_handles)
        spine.add_edges_from((h.source, h.target, h.edge) for h in self.one_handles)
        return nx.number_connected_components(spine)

    @property
    def genus(self) -> int:
        """Total genus; chi = 2c - 2g - b over c connected components"""
        return (2 * self.component_count - self.euler_characteristic - self.boundary_count) // 2

    def handle_ids(self) -> List[int]:
        return [h.edge for h in self.one_handles]

    def one_handle(self, eid: int) -> OneHandle:
        for h in self.one_handles:
            if h.edge == eid:
                return h
        raise KeyError(eid)

    def zero_handle(self, vid: int) -> ZeroHandle:
        for z in self.zero_handles:
            if z.vertex == vid:
                return z
        raise KeyError(vid)

    def end_vertex(self, eid: int, end: str) -> int:
        return self.one_handle(eid).vertex_of(end)


def trace_faces(zero_handles: Sequence[ZeroHandle], one_handles: Sequence[OneHandle]) -> List[List[HalfEdge]]:
    """Orbits of the face permutation, each starting at its smallest half-edge"""
    successor: Dict[HalfEdge, HalfEdge] = {}
    for z in zero_handles:
        n = len(z.arcs)
        for i, arc in enumerate(z.arcs):
            successor[arc] = z.arcs[(i + 1) % n]

    seen = set()
    faces = []
    for start in sorted(successor):
        if start in seen:
            continue
        face = []
        h = start
        while h not in seen:
            seen.add(h)
            face.append(h)
            eid, end = h
            h = successor[(eid, other_end(end))]
        faces.append(face)
    return faces


def boundary_components(ribbon: AbstractRibbon) -> Tuple[int, List[List[str]]]:
    """
    Count and words of the boundary components

    Every band side appears in exactly one word. An isolated 0-handle
    contributes one empty word.
    """
    words = [list(w) for w in ribbon.boundary_words]
    return len(words), words


def build_ribbon(graph: LegendrianGraphFront, layout: Optional[GraphLayout] = None) -> AbstractRibbon:
    layout = layout or compute_layout(graph)
    zero = tuple(ZeroHandle(v.id, v.position, tuple(v.arcs())) for v in graph.vertices)
    one = tuple(OneHandle(e.id, e.source, e.target, layout[e.id].core) for e in graph.edges)
    faces = trace_faces(zero, one)
    words = [tuple(side_letter(h) for h in face) for face in faces]
    words += [() for z in zero if not z.arcs]
    ribbon = AbstractRibbon(zero, one, tuple(words))
    # every component carries at least one boundary word, and the parity works out
    assert ribbon.boundary_count >= ribbon.component_count
    assert (2 * ribbon.component_count - ribbon.euler_characteristic - ribbon.boundary_count) % 2 == 0
    logger.info(
        f"ribbon: chi={ribbon.euler_characteristic}, genus={ribbon.genus}, boundary={ribbon.boundary_count}, "
        f"components={ribbon.component_count}"
    )
    return ribbon


def ribbon_summary(ribbon: AbstractRibbon) -> dict:
    return {
        "genus": ribbon.genus,
        "boundary": ribbon.boundary_count,
        "euler_characteristic": ribbon.euler_characteristic,
        "components": ribbon.component_count,
        "zero_handles": [
            {"vertex": z.vertex, "arcs": [f"e{eid}:{end}" for eid, end in z.arcs]} for z in ribbon.zero_handles
        ],
        "one_handles": [
            {"edge": h.edge, "source": h.source, "target": h.target, "cusps": len(h.core.cusps)}
            for h in ribbon.one_handles
        ],
        "boundary_words": [" ".join(w) for w in ribbon.boundary_words],
    }


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Z2Class:
    """Pass parity per 1-handle, in handle id order"""

    handles: Tuple[int, ...]
    vector: Tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.vector)

    def support(self) -> List[int]:
        return [h for h, bit in zip(self.handles, self.vector) if bit]


def parity_class(ribbon: AbstractRibbon, counts: Dict[int, int]) -> Z2Class:
    handles = tuple(sorted(ribbon.handle_ids()))
    return Z2Class(handles, tuple(counts.get(h, 0) % 2 for h in handles))


def is_homologically_nontrivial(ribbon: AbstractRibbon, curve) -> Tuple[bool, Optional[int]]:
    """
    A curve is nontrivial iff it crosses some cocore an odd number of times

    Returns:
        (verdict, witness handle or None)
    """
    parity = parity_class(ribbon, curve.pass_counts())
    support = parity.support()
    return bool(support), (support[0] if support else None)


def boundary_matrix(ribbon: AbstractRibbon) -> np.ndarray:
    """Cellular boundary C1 -> C0 of the spine over Z/2 (rows: vertices, columns: handles in id order)"""
    vertices = [z.vertex for z in ribbon.zero_handles]
    row = {v: i for i, v in enumerate(vertices)}
    handles = sorted(ribbon.one_handles, key=lambda h: h.edge)
    d = np.zeros((len(vertices), len(handles)), dtype=np.int64)
    for j, h in enumerate(handles):
        d[row[h.source], j] += 1
        d[row[h.target], j] += 1
    return d % 2


def fundamental_cycles(ribbon: AbstractRibbon) -> Dict[int, np.ndarray]:
    """Fundamental cycle of every non-tree handle w.r.t. a spanning forest of the spine"""
    handles = sorted(h.edge for h in ribbon.one_handles)
    column = {eid: j for j, eid in enumerate(handles)}
    spine = nx.MultiGraph()
    spine.add_nodes_from(z.vertex for z in ribbon.zero_handles)
    for h in ribbon.one_handles:
        spine.add_edge(h.source, h.target, key=h.edge)
    tree_keys = {key for _, _, key in nx.minimum_spanning_edges(spine, algorithm="kruskal", keys=True, data=False)}
    tree = nx.Graph()
    tree.add_nodes_from(spine.nodes)
    for u, v, key in spine.edges(keys=True):
        if key in tree_keys:
            tree.add_edge(u, v, key=key)

    cycles = {}
    for u, v, key in sorted(spine.edges(keys=True), key=lambda e: e[2]):
        if key in tree_keys:
            continue
        vec = np.zeros(len(handles), dtype=np.int64)
        vec[column[key]] = 1
        path = nx.shortest_path(tree, u, v)
        for a, b in zip(path, path[1:]):
            vec[column[tree.edges[a, b]["key"]]] ^= 1
        cycles[key] = vec
    return cycles


def z2_homology_oracle(ribbon: AbstractRibbon, curve) -> Tuple[Z2Class, bool]:
    """
    Brute-force H1(ribbon; Z/2) check of a curve's class

    The ribbon retracts onto its spine, so H1 is the cycle space of the spine.
    The curve's chain is expanded in the fundamental-cycle basis of a spanning
    forest; the class is nonzero iff some non-tree coordinate is nonzero.

    Raises:
        ValueError: the parity vector is not a cycle, or the expansion does
            not reproduce it
    """
    counts = curve.pass_counts() if curve is not None else {}
    parity = parity_class(ribbon, counts)
    chain = np.array(parity.vector, dtype=np.int64)
    if chain.size == 0:
        return parity, False
    if np.any(boundary_matrix(ribbon).dot(chain) % 2):
        raise ValueError("pass parity vector is not a cycle of the spine")

    column = {eid: j for j, eid in enumerate(parity.handles)}
    residual = chain.copy()
    nonzero = False
    for key, cycle in fundamental_cycles(ribbon).items():
        if chain[column[key]]:
            nonzero = True
            residual = (residual + cycle) % 2
    if np.any(residual):
        raise ValueError("pass parity vector is not spanned by the fundamental cycles")
    return parity, nonzero


# ---------------------------------------------------------------------------
# Ribbon boundary front (rendering)
# ---------------------------------------------------------------------------

def _side_offset(layout: GraphLayout) -> Fraction:
    spans = []
    for lay in layout.edges.values():
        for a, b in lay.core.edges():
            spans.append(abs(b.y - a.y))
    return min(spans) / 8 if spans else Fraction(1, 4)


def render_ribbon_front(graph: LegendrianGraphFront, ribbon: Optional[AbstractRibbon] = None) -> FrontDiagram:
    """
    Boundary front of the ribbon for drawing

    Each boundary component becomes one closed strand: band sides are the
    edge fronts shifted by +w (traversed source to target) or -w (target to
    source), joined through the vertex shifted by the mean of the two side
    offsets. An isolated vertex draws as a small two-cusp circle. No
    genericity is claimed for the result.
    """
    layout = compute_layout(graph)
    ribbon = ribbon or build_ribbon(graph, layout)
    w = _side_offset(layout)
    strands = []
    for face in trace_faces(ribbon.zero_handles, ribbon.one_handles):
        runs = []
        for eid, end in face:
            lay = layout[eid]
            dz = w if end == SOURCE else -w
            run = [lay.source.inner, *graph.edge(eid).front.points[1:-1], lay.target.inner]
            if end == TARGET:
                run.reverse()
            runs.append((graph.edge(eid).end_point(end), dz, [p.shifted(0, dz) for p in run]))
        points: List[FrontPoint] = []
        for k, (vertex, dz, run) in enumerate(runs):
            previous_dz = runs[k - 1][1]
            points.append(vertex.shifted(0, (previous_dz + dz) / 2))
            points.extend(run)
        strands.append(FrontStrand.from_points(points, closed=True))
    for z in ribbon.zero_handles:
        if not z.arcs:
            p = z.position
            strands.append(
                FrontStrand.from_points(
                    (p.shifted(-w, 0), p.shifted(0, w / 2), p.shifted(w, 0), p.shifted(0, -w / 2)), closed=True
                )
            )
    logger.debug(f"ribbon front: {len(strands)} boundary strand(s)")
    return FrontDiagram(tuple(strands))
