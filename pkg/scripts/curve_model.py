"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Simple closed curves on an abstract ribbon

A curve is a cyclic list of passes through 1-handles. Each pass carries its
direction relative to the core (source -> target is "with_core") and its
rank, the 1-based height of its strand inside the band. Chords through the
0-handles are implied by consecutive passes.

Positions on the boundary of a 0-handle disk: arcs in cyclic order; on a
source arc strands are read by increasing rank, on a target arc by
decreasing rank (the band is untwisted).
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from scripts.errors import BadRanks, Disconnected, NotNormalized, NotSimple, SchemaError
from scripts.legendrian_graph import SOURCE, TARGET
from scripts.ribbon import AbstractRibbon
from scripts.schemas import CurveDocument, PassDoc, load_document, to_document

logger = logging.getLogger(__name__)

WITH_CORE = "with_core"
AGAINST_CORE = "against_core"


@dataclass(frozen=True, order=True)
class Pass:
    handle: int
    direction: str
    rank: int

    @property
    def with_core(self) -> bool:
        return self.direction == WITH_CORE

    @property
    def entry_end(self) -> str:
        return SOURCE if self.with_core else TARGET

    @property
    def exit_end(self) -> str:
        return TARGET if self.with_core else SOURCE

    def reversed(self) -> "Pass":
        return Pass(self.handle, AGAINST_CORE if self.with_core else WITH_CORE, self.rank)

    def label(self) -> str:
        return f"e{self.handle}{'+' if self.with_core else '-'}#{self.rank}"


@dataclass(frozen=True)
class ArcPoint:
    edge: int
    end: str
    rank: int


@dataclass(frozen=True)
class Chord:
    """Piece of the curve inside one 0-handle, from `start` to `stop`"""

    vertex: int
    start: ArcPoint
    stop: ArcPoint


@dataclass(frozen=True)
class CurveOnRibbon:
    passes: Tuple[Pass, ...]
    name: Optional[str] = None
    reference: Optional[Mapping[str, Any]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "passes", tuple(self.passes))

    def pass_counts(self) -> Dict[int, int]:
        return pass_counts(self)

    def chords(self, ribbon: AbstractRibbon) -> List[Chord]:
        """Chord i runs from the exit of pass i to the entry of pass i + 1"""
        n = len(self.passes)
        chords = []
        for i, p in enumerate(self.passes):
            q = self.passes[(i + 1) % n]
            chords.append(
                Chord(
                    ribbon.end_vertex(p.handle, p.exit_end),
                    ArcPoint(p.handle, p.exit_end, p.rank),
                    ArcPoint(q.handle, q.entry_end, q.rank),
                )
            )
        return chords


def pass_counts(curve: CurveOnRibbon) -> Dict[int, int]:
    return dict(sorted(Counter(p.handle for p in curve.passes).items()))


@dataclass(frozen=True)
class Segment:
    index: int
    kind: str  # "pass" | "chord"
    passage: Optional[Pass] = None
    chord: Optional[Chord] = None


@dataclass(frozen=True)
class SegmentList:
    """l_1 ... l_n: passes at odd indices, chords at even indices"""

    segments: Tuple[Segment, ...]
    curve: CurveOnRibbon

    @property
    def n(self) -> int:
        return len(self.segments)

    def passes(self) -> List[Segment]:
        return [s for s in self.segments if s.kind == "pass"]

    def chords(self) -> List[Segment]:
        return [s for s in self.segments if s.kind == "chord"]

    def pass_counts(self) -> Dict[int, int]:
        return dict(sorted(Counter(s.passage.handle for s in self.passes()).items()))

    def segment(self, index: int) -> Segment:
        return self.segments[index - 1]


class CurveReport(BaseModel):
    name: Optional[str] = None
    passes: int
    segments: int
    pass_counts: Dict[str, int] = Field(default_factory=dict)
    chords_per_disk: Dict[str, int] = Field(default_factory=dict)


# ---------------------------------------------------------------------------
# Disk positions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskChord:
    """A chord with its endpoints linearized along the disk boundary"""

    index: int
    chord: Chord
    low: Tuple[int, int]
    high: Tuple[int, int]

    def interleaves(self, other: "DiskChord") -> bool:
        return self.low < other.low < self.high < other.high or other.low < self.low < other.high < self.high


def boundary_position(ribbon: AbstractRibbon, point: ArcPoint, counts: Dict[int, int]) -> Tuple[int, int]:
    vertex = ribbon.end_vertex(point.edge, point.end)
    arc = ribbon.zero_handle(vertex).arc_index((point.edge, point.end))
    k = counts[point.edge]
    offset = point.rank - 1 if point.end == SOURCE else k - point.rank
    return arc, offset


def disk_chords(ribbon: AbstractRibbon, curve: CurveOnRibbon) -> Dict[int, List[DiskChord]]:
    """Chords grouped per 0-handle, in curve order"""
    counts = curve.pass_counts()
    table: Dict[int, List[DiskChord]] = {z.vertex: [] for z in ribbon.zero_handles}
    for i, chord in enumerate(curve.chords(ribbon)):
        a = boundary_position(ribbon, chord.start, counts)
        b = boundary_position(ribbon, chord.stop, counts)
        table[chord.vertex].append(DiskChord(i, chord, min(a, b), max(a, b)))
    return table


def nesting_key(dc: DiskChord) -> Tuple:
    """Outer chords first, then left to right along the disk boundary"""
    return (dc.low, tuple(-x for x in dc.high))


# ---------------------------------------------------------------------------
# Validation and subdivision
# ---------------------------------------------------------------------------

def validate_curve(ribbon: AbstractRibbon, curve: CurveOnRibbon) -> CurveReport:
    """
    Check that a curve is a normalized simple closed curve on the ribbon

    Raises:
        SchemaError: a pass names a handle the ribbon does not have
        BadRanks: ranks inside a band are not 1..k
        Disconnected: consecutive passes do not meet in one 0-handle
        NotNormalized: a chord starts and ends on the same attaching arc
        NotSimple: two chords cross inside a 0-handle
    """
    handles = set(ribbon.handle_ids())
    for p in curve.passes:
        if p.handle not in handles:
            raise SchemaError(f"pass through unknown handle {p.handle}")

    ranks: Dict[int, List[int]] = {}
    for p in curve.passes:
        ranks.setdefault(p.handle, []).append(p.rank)
    for h, rs in sorted(ranks.items()):
        if sorted(rs) != list(range(1, len(rs) + 1)):
            raise BadRanks(
                f"handle {h}: ranks {sorted(rs)} are not 1..{len(rs)}", [{"kind": "bad ranks", "handle": h}]
            )

    n = len(curve.passes)
    for i, p in enumerate(curve.passes):
        q = curve.passes[(i + 1) % n]
        if ribbon.end_vertex(p.handle, p.exit_end) != ribbon.end_vertex(q.handle, q.entry_end):
            raise Disconnected(
                f"pass {i + 1} ends at a different 0-handle than pass {(i + 1) % n + 1} starts",
                [{"kind": "disconnected", "pass": i + 1}],
            )
        if (p.handle, p.exit_end) == (q.handle, q.entry_end):
            raise NotNormalized(
                f"chord after pass {i + 1} returns to attaching arc e{p.handle}:{p.exit_end}",
                [{"kind": "same-arc chord", "pass": i + 1, "handle": p.handle}],
            )

    per_disk = disk_chords(ribbon, curve)
    for vertex, chords in per_disk.items():
        for a_i, a in enumerate(chords):
            for b in chords[a_i + 1:]:
                if a.interleaves(b):
                    logger.warning(f"curve {curve.name or ''}: chords {a.index + 1} and {b.index + 1} cross")
                    raise NotSimple(
                        f"chords after passes {a.index + 1} and {b.index + 1} cross in 0-handle {vertex}",
                        [{"kind": "crossing chords", "vertex": vertex, "chords": [a.index + 1, b.index + 1]}],
                    )

    return CurveReport(
        name=curve.name,
        passes=n,
        segments=2 * n,
        pass_counts={str(h): c for h, c in curve.pass_counts().items()},
        chords_per_disk={str(v): len(cs) for v, cs in per_disk.items() if cs},
    )


def reverse_curve(curve: CurveOnRibbon) -> CurveOnRibbon:
    return CurveOnRibbon(tuple(p.reversed() for p in reversed(curve.passes)), curve.name, curve.reference)


def subdivide(
    ribbon: AbstractRibbon,
    curve: CurveOnRibbon,
    start_pass: Optional[Tuple[int, int]] = None,
    reverse: bool = False,
) -> SegmentList:
    """
    Cut the curve into alternating pass and chord segments

    Args:
        ribbon: the ribbon the curve lives on
        curve: a validated curve
        start_pass: (handle, rank) of l_1; default is the smallest such pair
        reverse: traverse the curve backwards
    """
    if reverse:
        curve = reverse_curve(curve)
    keys = [(p.handle, p.rank) for p in curve.passes]
    start = start_pass if start_pass is not None else min(keys)
    if start not in keys:
        raise SchemaError(f"start pass {start} is not on the curve")
    i0 = keys.index(start)
    rotated = CurveOnRibbon(curve.passes[i0:] + curve.passes[:i0], curve.name, curve.reference)

    segments = []
    for i, (p, chord) in enumerate(zip(rotated.passes, rotated.chords(ribbon))):
        segments.append(Segment(2 * i + 1, "pass", passage=p))
        segments.append(Segment(2 * i + 2, "chord", chord=chord))
    return SegmentList(tuple(segments), rotated)


def curve_from_walk(walk: Sequence[Tuple[int, str]], name: Optional[str] = None) -> CurveOnRibbon:
    """Curve through the given (handle, direction) list, ranks in order of first appearance per band"""
    seen: Counter = Counter()
    passes = []
    for handle, direction in walk:
        seen[handle] += 1
        passes.append(Pass(handle, direction, seen[handle]))
    return CurveOnRibbon(tuple(passes), name)


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def parse_curve(data) -> CurveOnRibbon:
    doc = load_document(CurveDocument, data)
    return CurveOnRibbon(tuple(Pass(p.handle, p.direction, p.rank) for p in doc.passes), doc.name, doc.reference)


def serialize_curve(curve: CurveOnRibbon) -> dict:
    doc = CurveDocument(
        name=curve.name,
        passes=[PassDoc(handle=p.handle, direction=p.direction, rank=p.rank) for p in curve.passes],
        reference=dict(curve.reference) if curve.reference is not None else None,
    )
    return to_document(doc)
