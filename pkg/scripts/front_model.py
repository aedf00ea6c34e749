"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Exact piecewise-linear fronts in the (y, z) plane

A front strand is a polyline with rational vertices and no vertical edges.
Its Legendrian lift carries x = -slope on every edge (contact form
dz + x dy). Cusps are the vertices where the y-direction reverses; crossings
are never stored, they are derived from the slopes: the smaller-slope strand
is over, the larger-slope strand is under.

Everything here is immutable and pure.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from scripts.errors import OddCuspCount, SchemaError, VerticalEdge
from scripts.schemas import (
    DiagramVertexDoc,
    FrontDocument,
    PointDoc,
    RationalDoc,
    StrandDoc,
    VertexEndDoc,
    load_document,
    to_document,
)
from scripts.utils import format_rational

logger = logging.getLogger(__name__)


def _exact(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("front coordinates must be exact rationals, not floats")
    return Fraction(value)


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True, order=True)
class FrontPoint:
    y: Fraction
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "y", _exact(self.y))
        object.__setattr__(self, "z", _exact(self.z))

    def shifted(self, dy=0, dz=0) -> "FrontPoint":
        return FrontPoint(self.y + dy, self.z + dz)

    def as_tuple(self) -> Tuple[str, str]:
        return (format_rational(self.y), format_rational(self.z))


@dataclass(frozen=True)
class LiftedPoint:
    x: Fraction
    y: Fraction
    z: Fraction


def slope(a: FrontPoint, b: FrontPoint) -> Fraction:
    if a.y == b.y:
        raise VerticalEdge(
            f"vertical edge at y={format_rational(a.y)}",
            [{"kind": "vertical edge", "y": format_rational(a.y), "z": format_rational(a.z)}],
        )
    return (b.z - a.z) / (b.y - a.y)


def is_y_reversal(prev: FrontPoint, cur: FrontPoint, nxt: FrontPoint) -> bool:
    return (cur.y - prev.y) * (nxt.y - cur.y) < 0


@dataclass(frozen=True)
class FrontStrand:
    """
    A polyline front. For closed strands the first point is not repeated at the
    end; edge i joins points[i] to points[i + 1] and the last edge closes up.
    """

    points: Tuple[FrontPoint, ...]
    cusps: FrozenSet[int] = frozenset()
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "cusps", frozenset(self.cusps))

    @classmethod
    def from_points(cls, points: Iterable[FrontPoint], closed: bool = False) -> "FrontStrand":
        """Build a strand and mark every y-reversal vertex as a cusp"""
        pts = tuple(points)
        return cls(pts, frozenset(y_reversal_indices(pts, closed)), closed)

    def edge_count(self) -> int:
        n = len(self.points)
        return n if self.closed else n - 1

    def edge(self, i: int) -> Tuple[FrontPoint, FrontPoint]:
        n = len(self.points)
        return self.points[i], self.points[(i + 1) % n]

    def edges(self) -> List[Tuple[FrontPoint, FrontPoint]]:
        return [self.edge(i) for i in range(self.edge_count())]

    def neighbours(self, i: int) -> Optional[Tuple[FrontPoint, FrontPoint]]:
        """Previous and next point of vertex i, or None at the ends of an open strand"""
        n = len(self.points)
        if not self.closed and (i == 0 or i == n - 1):
            return None
        return self.points[(i - 1) % n], self.points[(i + 1) % n]

    @property
    def start(self) -> FrontPoint:
        return self.points[0]

    @property
    def end(self) -> FrontPoint:
        return self.points[0] if self.closed else self.points[-1]


def y_reversal_indices(points: Sequence[FrontPoint], closed: bool) -> List[int]:
    n = len(points)
    indices = range(n) if closed else range(1, n - 1)
    return [i for i in indices if is_y_reversal(points[(i - 1) % n], points[i], points[(i + 1) % n])]


@dataclass(frozen=True)
class StrandEnd:
    strand: int
    end: str  # "start" | "end"


@dataclass(frozen=True)
class DiagramVertex:
    position: FrontPoint
    ends: Tuple[StrandEnd, ...] = ()


@dataclass(frozen=True)
class FrontDiagram:
    strands: Tuple[FrontStrand, ...] = ()
    vertices: Tuple[DiagramVertex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "strands", tuple(self.strands))
        object.__setattr__(self, "vertices", tuple(self.vertices))


def end_direction(strand: FrontStrand, end: str) -> Tuple[FrontPoint, FrontPoint]:
    """The end point of a strand and its neighbour along the strand"""
    if end == "start":
        return strand.points[0], strand.points[1]
    return strand.points[-1], strand.points[-2]


def end_incidence(strand: FrontStrand, end: str) -> Tuple[str, Fraction]:
    """Side ("left"/"right") an open strand leaves its end point towards, and the slope there"""
    at, towards = end_direction(strand, end)
    side = "right" if towards.y > at.y else "left"
    return side, slope(at, towards)


# ---------------------------------------------------------------------------
# Lift and classical invariants
# ---------------------------------------------------------------------------

def lift(strand: FrontStrand) -> List[LiftedPoint]:
    """
    Legendrian lift sampled at both endpoints of every edge

    x is constant (= -slope) on each edge; z is recovered by integrating
    dz = -x dy from the first point and matches the front exactly.

    Raises:
        VerticalEdge: if an edge has zero y-extent
    """
    samples: List[LiftedPoint] = []
    z = strand.points[0].z
    for a, b in strand.edges():
        x = -slope(a, b)
        samples.append(LiftedPoint(x, a.y, z))
        z = z - x * (b.y - a.y)
        assert z == b.z
        samples.append(LiftedPoint(x, b.y, z))
    return samples


def closure_integral(strand: FrontStrand) -> Fraction:
    """Sum of x * dy over the edges; equals z(start) - z(end), zero for closed strands"""
    total = Fraction(0)
    for a, b in strand.edges():
        total += -slope(a, b) * (b.y - a.y)
    return total


def cusp_directions(knot: FrontStrand) -> Tuple[int, int]:
    """Number of (down, up) cusps of an oriented strand"""
    down = up = 0
    for i in sorted(knot.cusps):
        around = knot.neighbours(i)
        if around is None:
            continue
        prev, nxt = around
        cur = knot.points[i]
        turn = (slope(cur, nxt) - slope(prev, cur)) * _sign(cur.y - prev.y)
        if turn > 0:
            down += 1
        else:
            up += 1
    return down, up


def rotation_number(knot: FrontStrand) -> int:
    down, up = cusp_directions(knot)
    if (down - up) % 2:
        raise OddCuspCount(f"cusp census {down} down / {up} up cannot close up")
    return (down - up) // 2


def thurston_bennequin(knot: FrontStrand) -> int:
    """
    tb = writhe - (number of cusps) / 2

    Raises:
        OddCuspCount: the strand is not closed or has an odd number of cusps
    """
    if not knot.closed:
        raise OddCuspCount("thurston_bennequin needs a closed strand")
    if len(knot.cusps) % 2:
        raise OddCuspCount(f"closed front with {len(knot.cusps)} cusps")
    return writhe(knot) - len(knot.cusps) // 2


def writhe(knot: FrontStrand) -> int:
    return sum(c.sign for c in crossings(FrontDiagram((knot,))))


def linking_with_pushoff(knot: FrontStrand, shift: Fraction) -> Fraction:
    """
    Linking number of a knot with its vertical translate by `shift`

    For a shift below the front's feature size this equals tb, which makes it
    an independent check of the cusp/writhe formula.
    """
    pair = FrontDiagram((knot, translate(knot, 0, shift)))
    mixed = [c for c in crossings(pair) if c.over.strand != c.under.strand]
    return Fraction(sum(c.sign for c in mixed), 2)


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------

def translate(strand: FrontStrand, dy=0, dz=0) -> FrontStrand:
    return FrontStrand(tuple(p.shifted(dy, dz) for p in strand.points), strand.cusps, strand.closed)


def translate_diagram(diagram: FrontDiagram, dy=0, dz=0) -> FrontDiagram:
    return FrontDiagram(
        tuple(translate(s, dy, dz) for s in diagram.strands),
        tuple(DiagramVertex(v.position.shifted(dy, dz), v.ends) for v in diagram.vertices),
    )


def reverse(strand: FrontStrand) -> FrontStrand:
    """Same curve traversed backwards; a closed strand keeps its start point"""
    n = len(strand.points)
    if strand.closed:
        points = (strand.points[0],) + tuple(reversed(strand.points[1:]))
        cusps = frozenset((n - i) % n for i in strand.cusps)
    else:
        points = tuple(reversed(strand.points))
        cusps = frozenset(n - 1 - i for i in strand.cusps)
    return FrontStrand(points, cusps, strand.closed)


# ---------------------------------------------------------------------------
# Segment intersections (exact)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SegmentRef:
    strand: int
    index: int


@dataclass
class _Seg:
    ref: SegmentRef
    a: FrontPoint
    b: FrontPoint
    ylo: Fraction = field(init=False)
    yhi: Fraction = field(init=False)
    m: Fraction = field(init=False)
    c: Fraction = field(init=False)

    def __post_init__(self):
        self.ylo, self.yhi = min(self.a.y, self.b.y), max(self.a.y, self.b.y)
        self.m = slope(self.a, self.b)
        self.c = self.a.z - self.m * self.a.y

    def direction(self) -> int:
        return _sign(self.b.y - self.a.y)

    def is_endpoint(self, y: Fraction) -> bool:
        return y == self.a.y or y == self.b.y


@dataclass(frozen=True)
class Crossing:
    point: FrontPoint
    over: SegmentRef
    under: SegmentRef
    over_slope: Fraction
    under_slope: Fraction
    sign: int


class Violation(BaseModel):
    kind: str
    message: str
    y: Optional[str] = None
    z: Optional[str] = None
    strands: List[int] = Field(default_factory=list)


class ValidationReport(BaseModel):
    violations: List[Violation] = Field(default_factory=list)
    crossing_count: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> List[str]:
        return sorted({v.kind for v in self.violations})

    def add(self, kind: str, message: str, at: Optional[FrontPoint] = None, strands: Sequence[int] = ()) -> None:
        self.violations.append(
            Violation(
                kind=kind,
                message=message,
                y=format_rational(at.y) if at is not None else None,
                z=format_rational(at.z) if at is not None else None,
                strands=sorted(set(strands)),
            )
        )


def _segments(diagram: FrontDiagram) -> List[_Seg]:
    segs = []
    for k, strand in enumerate(diagram.strands):
        for i, (a, b) in enumerate(strand.edges()):
            if a.y != b.y:
                segs.append(_Seg(SegmentRef(k, i), a, b))
    return segs


def _adjacent(diagram: FrontDiagram, r: SegmentRef, s: SegmentRef) -> bool:
    if r.strand != s.strand:
        return False
    strand = diagram.strands[r.strand]
    n = strand.edge_count()
    gap = abs(r.index - s.index)
    return gap == 1 or (strand.closed and gap == n - 1)


def _intersect(s: _Seg, t: _Seg):
    """
    Returns None, ("overlap", point), ("contact", point) or ("crossing", point).
    A contact is an intersection at an endpoint of either segment.
    """
    lo, hi = max(s.ylo, t.ylo), min(s.yhi, t.yhi)
    if lo > hi:
        return None
    if s.m == t.m:
        if s.c != t.c:
            return None
        point = FrontPoint(lo, s.m * lo + s.c)
        return ("overlap", point) if lo < hi else ("contact", point)
    y = (t.c - s.c) / (s.m - t.m)
    if y < lo or y > hi:
        return None
    point = FrontPoint(y, s.m * y + s.c)
    if s.is_endpoint(y) or t.is_endpoint(y):
        return ("contact", point)
    return ("crossing", point)


def _make_crossing(point: FrontPoint, s: _Seg, t: _Seg) -> Crossing:
    over, under = (s, t) if s.m < t.m else (t, s)
    return Crossing(point, over.ref, under.ref, over.m, under.m, over.direction() * under.direction())


def _scan(diagram: FrontDiagram):
    """Yield (kind, point, seg_a, seg_b) for every intersecting pair of non-adjacent segments"""
    segs = sorted(_segments(diagram), key=lambda s: (s.ylo, s.ref.strand, s.ref.index))
    for i, s in enumerate(segs):
        for t in segs[i + 1:]:
            if t.ylo > s.yhi:
                break
            if _adjacent(diagram, s.ref, t.ref):
                continue
            hit = _intersect(s, t)
            if hit is not None:
                yield hit[0], hit[1], s, t


def crossings(diagram: FrontDiagram) -> List[Crossing]:
    """Transverse crossings with over/under derived from slopes"""
    found = [_make_crossing(point, s, t) for kind, point, s, t in _scan(diagram) if kind == "crossing"]
    found.sort(key=lambda c: (c.point.y, c.point.z, c.over.strand, c.over.index))
    return found


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def strand_violations(strand: FrontStrand, k: int, report: ValidationReport) -> None:
    pts = strand.points
    if len(pts) < (3 if strand.closed else 2):
        report.add("too few points", f"strand {k} has {len(pts)} points", strands=[k])
        return
    for a, b in strand.edges():
        if a.y == b.y:
            report.add("vertical edge", f"strand {k} has an edge with zero y-extent", a, [k])
    if report.violations and any(v.kind == "vertical edge" and k in v.strands for v in report.violations):
        return
    for i in sorted(i for i in strand.cusps if not 0 <= i < len(pts)):
        report.add("bad cusp index", f"strand {k} marks cusp {i} but has {len(pts)} points", strands=[k])
    if any(v.kind == "bad cusp index" and k in v.strands for v in report.violations):
        return
    reversals = set(y_reversal_indices(pts, strand.closed))
    for i in sorted(reversals - strand.cusps):
        report.add("unmarked cusp", f"strand {k} reverses y at vertex {i} without a cusp marker", pts[i], [k])
    for i in sorted(strand.cusps - reversals):
        report.add("false cusp", f"strand {k} marks vertex {i} as a cusp but keeps its y-direction", pts[i], [k])
    for i in sorted(reversals):
        prev, nxt = strand.neighbours(i)
        if slope(prev, pts[i]) == slope(pts[i], nxt):
            report.add("degenerate cusp", f"strand {k} folds back onto itself at vertex {i}", pts[i], [k])


def check_generic(diagram: FrontDiagram) -> ValidationReport:
    """
    Validate a diagram against the local models of a generic front

    Allowed singular points: transverse crossings with distinct slopes away
    from vertices and cusps, cusps, and declared vertices. Never raises; every
    violation is listed with its coordinates.
    """
    report = ValidationReport()
    for k, strand in enumerate(diagram.strands):
        strand_violations(strand, k, report)
    if not report.ok:
        return report

    vertex_points = set()
    for v in diagram.vertices:
        vertex_points.add(v.position)
        seen: Dict[Tuple[str, Fraction], StrandEnd] = {}
        for e in v.ends:
            if not 0 <= e.strand < len(diagram.strands):
                report.add("bad vertex end", f"vertex end names strand {e.strand} of {len(diagram.strands)}", v.position)
                continue
            strand = diagram.strands[e.strand]
            at = strand.points[0] if e.end == "start" else strand.points[-1]
            if strand.closed or at != v.position:
                report.add("vertex mismatch", f"strand {e.strand} {e.end} is not at the vertex", v.position, [e.strand])
                continue
            key = end_incidence(strand, e.end)
            if key in seen:
                report.add(
                    "tangent ends",
                    f"two ends leave the vertex to the {key[0]} with slope {format_rational(key[1])}",
                    v.position,
                    [e.strand, seen[key].strand],
                )
            seen[key] = e

    crossing_points: Counter = Counter()
    crossing_count = 0
    for kind, point, s, t in _scan(diagram):
        strands = [s.ref.strand, t.ref.strand]
        if kind == "overlap":
            report.add("tangential crossing", "segments overlap with equal slopes", point, strands)
        elif kind == "contact":
            if point in vertex_points and s.is_endpoint(point.y) and t.is_endpoint(point.y):
                continue
            report.add("crossing at singular point", "strands meet at a cusp, corner or vertex", point, strands)
        else:
            crossing_count += 1
            crossing_points[point] += 1
    for point, count in sorted(crossing_points.items()):
        if count > 1:
            report.add("triple point", f"{count} crossings share one point", point)
    report.crossing_count = crossing_count
    if not report.ok:
        logger.debug(f"check_generic: {len(report.violations)} violation(s), kinds {report.kinds()}")
    return report


def check_embedded(knot: FrontStrand) -> bool:
    """
    True iff the lift is embedded: every self-intersection of the front is a
    transverse crossing (distinct slopes, hence distinct x) between edge
    interiors.
    """
    report = ValidationReport()
    strand_violations(knot, 0, report)
    if any(v.kind in ("vertical edge", "degenerate cusp", "too few points") for v in report.violations):
        return False
    for kind, _, _, _ in _scan(FrontDiagram((knot,))):
        if kind != "crossing":
            return False
    return True


def component_count(diagram: FrontDiagram) -> int:
    return sum(1 for s in diagram.strands if s.closed)


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def point_to_doc(p: FrontPoint) -> PointDoc:
    return PointDoc(y=RationalDoc.of(p.y), z=RationalDoc.of(p.z))


def point_from_doc(doc: PointDoc) -> FrontPoint:
    return FrontPoint(doc.y.value, doc.z.value)


def strand_to_doc(strand: FrontStrand) -> StrandDoc:
    return StrandDoc(
        closed=strand.closed,
        points=[point_to_doc(p) for p in strand.points],
        cusps=sorted(strand.cusps),
    )


def strand_from_doc(doc: StrandDoc) -> FrontStrand:
    return FrontStrand(tuple(point_from_doc(p) for p in doc.points), frozenset(doc.cusps), doc.closed)


def serialize_diagram(diagram: FrontDiagram) -> dict:
    doc = FrontDocument(
        strands=[strand_to_doc(s) for s in diagram.strands],
        vertices=[
            DiagramVertexDoc(
                position=point_to_doc(v.position),
                ends=[VertexEndDoc(strand=e.strand, end=e.end) for e in v.ends],
            )
            for v in diagram.vertices
        ],
    )
    return to_document(doc)


def parse_diagram(data) -> FrontDiagram:
    doc = load_document(FrontDocument, data)
    diagram = FrontDiagram(
        tuple(strand_from_doc(s) for s in doc.strands),
        tuple(
            DiagramVertex(point_from_doc(v.position), tuple(StrandEnd(e.strand, e.end) for e in v.ends))
            for v in doc.vertices
        ),
    )
    bad = [
        {"kind": "bad cusp index", "strand": k, "index": i}
        for k, s in enumerate(diagram.strands)
        for i in sorted(s.cusps)
        if not 0 <= i < len(s.points)
    ]
    bad += [
        {"kind": "bad vertex end", "strand": e.strand}
        for v in diagram.vertices
        for e in v.ends
        if not 0 <= e.strand < len(diagram.strands)
    ]
    if bad:
        raise SchemaError("front document references missing points or strands", bad)
    return diagram
