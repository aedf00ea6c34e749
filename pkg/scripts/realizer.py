"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Legendrian realization of a curve on the ribbon of a Legendrian graph

Pipeline:
    1. validate and subdivide the curve (l_1 ... l_n)
    2. relative gains per pass from its height in the band
    3. balance the gains on the distinguished handle so they sum to zero
    4. prominence P: height bookkeeping along the segments
    5. per band: copies of the two half-cores at heights eps*P + mu*tie,
       joined by straight chords across the gap
    6. per vertex disk: chords as translates of the two end segments
    7. glue everything into one closed front and validate it

All heights are exact rationals. eps and mu are shrunk against the graph's
clearance so the copies stay inside a thin band around the graph; if the
assembled front is still not generic, micro offsets are nudged and the
construction is retried.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from scripts.curve_model import (
    WITH_CORE,
    AGAINST_CORE,
    CurveOnRibbon,
    Segment,
    SegmentList,
    disk_chords,
    nesting_key,
    subdivide,
    validate_curve,
)
from scripts.errors import EndpointMismatch, NoOddHandle, RealizationFailed, UnbalancedGains
from scripts.front_model import (
    FrontDiagram,
    FrontPoint,
    FrontStrand,
    check_embedded,
    check_generic,
    closure_integral,
    crossings,
    rotation_number,
    slope,
    thurston_bennequin,
)
from scripts.legendrian_graph import (
    SOURCE,
    TARGET,
    EdgeLayout,
    GraphLayout,
    LegendrianGraphFront,
    compute_layout,
)
from scripts.ribbon import AbstractRibbon, build_ribbon, is_homologically_nontrivial
from scripts.utils import RealizerConfig, format_rational

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Gains
# ---------------------------------------------------------------------------

def raw_gain(rank: int, count: int) -> int:
    a = Fraction(rank) - Fraction(count + 1, 2)
    if a < 0:
        return math.floor(a)
    if a > 0:
        return math.ceil(a)
    return 0


def relative_gain_raw(k: int) -> List[int]:
    """Raw gains of the k strands of a band, bottom to top"""
    if k < 1:
        raise ValueError("a band carries at least one strand")
    return [raw_gain(h, k) for h in range(1, k + 1)]


@dataclass(frozen=True)
class GainEntry:
    segment: int
    handle: int
    direction: str
    rank: int
    count: int
    a: Fraction
    raw: int
    orientation: int
    gain: Fraction


@dataclass(frozen=True)
class GainTable:
    entries: Tuple[GainEntry, ...]

    def total(self) -> Fraction:
        return sum((e.gain for e in self.entries), Fraction(0))

    def entry(self, segment: int) -> GainEntry:
        for e in self.entries:
            if e.segment == segment:
                return e
        raise KeyError(segment)

    def gain(self, segment: int) -> Fraction:
        return self.entry(segment).gain

    def with_gain(self, segment: int, gain) -> "GainTable":
        return GainTable(tuple(replace(e, gain=Fraction(gain)) if e.segment == segment else e for e in self.entries))


def relative_gain(segments: SegmentList) -> GainTable:
    """Gains before balancing: orientation sign times raw gain"""
    counts = segments.pass_counts()
    entries = []
    for s in segments.passes():
        p = s.passage
        k = counts[p.handle]
        orientation = 1 if p.with_core else -1
        raw = raw_gain(p.rank, k)
        entries.append(
            GainEntry(
                segment=s.index,
                handle=p.handle,
                direction=p.direction,
                rank=p.rank,
                count=k,
                a=Fraction(p.rank) - Fraction(k + 1, 2),
                raw=raw,
                orientation=orientation,
                gain=Fraction(orientation * raw),
            )
        )
    return GainTable(tuple(entries))


def select_distinguished_handle(ribbon: AbstractRibbon, segments: SegmentList) -> int:
    """
    First handle (by id) that the curve crosses an odd number of times

    Raises:
        NoOddHandle: the curve is homologically trivial
    """
    nontrivial, witness = is_homologically_nontrivial(ribbon, segments.curve)
    if not nontrivial:
        counts = segments.pass_counts()
        raise NoOddHandle(
            "curve crosses every cocore an even number of times",
            [{"kind": "homologically trivial", "pass_counts": {str(h): c for h, c in counts.items()}}],
        )
    return witness


def balance(gains: GainTable, distinguished: int) -> GainTable:
    """
    Spread the total gain theta over the passes of the distinguished handle:
    with-core passes lose theta/(k+ - k-), against-core passes gain it.
    """
    theta = gains.total()
    if theta == 0:
        return gains
    mine = [e for e in gains.entries if e.handle == distinguished]
    k_plus = sum(1 for e in mine if e.direction == WITH_CORE)
    k_minus = len(mine) - k_plus
    if k_plus == k_minus:
        raise NoOddHandle(f"handle {distinguished} is crossed an even number of times")
    share = theta / (k_plus - k_minus)
    balanced = []
    for e in gains.entries:
        if e.handle == distinguished:
            e = replace(e, gain=e.gain - share if e.direction == WITH_CORE else e.gain + share)
        balanced.append(e)
    table = GainTable(tuple(balanced))
    assert table.total() == 0
    logger.info(f"balanced theta={format_rational(theta)} on handle {distinguished}")
    return table


@dataclass(frozen=True)
class ProminenceMap:
    """values[i - 1] is P at the start of l_i; values[n] is P at the end of l_n"""

    values: Tuple[Fraction, ...]

    def entry(self, index: int) -> Fraction:
        return self.values[index - 1]

    def exit(self, index: int) -> Fraction:
        return self.values[index]

    def spread(self) -> Fraction:
        return max(self.values) - min(self.values)


def prominence(segments: SegmentList, gains: GainTable) -> ProminenceMap:
    """
    Raises:
        UnbalancedGains: the gains do not sum to zero, so P cannot close up
    """
    total = gains.total()
    if total != 0:
        raise UnbalancedGains(f"gains sum to {format_rational(total)}", [{"kind": "unbalanced", "total": str(total)}])
    values = [Fraction(0)]
    for s in segments.segments:
        step = gains.gain(s.index) if s.kind == "pass" else Fraction(0)
        values.append(values[-1] + step)
    assert values[-1] == values[0]
    return ProminenceMap(tuple(values))


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealizerParams:
    epsilon: Fraction = Fraction(1, 8)
    mu: Fraction = Fraction(1, 64)
    start_pass: Optional[Tuple[int, int]] = None
    reverse: bool = False
    max_attempts: int = 12

    @classmethod
    def from_config(cls, config: Optional[RealizerConfig] = None, **overrides) -> "RealizerParams":
        config = config or RealizerConfig()
        values = {"epsilon": config.epsilon, "mu": config.mu, "max_attempts": config.max_attempts}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def nudge(attempt: int, key: int) -> Fraction:
    """
    Deterministic micro shift in [0, 1/3); zero on the first attempt

    The step between consecutive keys changes with the attempt, so retries
    also move keyed pieces relative to each other.
    """
    if attempt == 0:
        return Fraction(0)
    return Fraction((key + 1) * (attempt * 104729 + 7919) % 211, 633)


def _marks(graph: LegendrianGraphFront, layout: GraphLayout) -> Dict[Tuple[int, int], List[Fraction]]:
    """y-values of corners, zone points and crossings on every graph segment"""
    marks: Dict[Tuple[int, int], List[Fraction]] = {}
    for e in graph.edges:
        lay = layout[e.id]
        last = e.front.edge_count() - 1
        for j, (a, b) in enumerate(e.front.edges()):
            ys = [a.y, b.y]
            if j == 0:
                ys += [lay.source.inner.y, lay.source.collar.y]
            if j == last:
                ys += [lay.target.inner.y, lay.target.collar.y]
            if j == lay.gap_segment:
                ys += [lay.gap_start.y, lay.gap_end.y]
            marks[(e.id, j)] = ys
    for c in layout.crossings:
        for ref in (c.over, c.under):
            marks[(graph.edges[ref.strand].id, ref.index)].append(c.point.y)
    return marks


def clearance(graph: LegendrianGraphFront, layout: Optional[GraphLayout] = None) -> Fraction:
    """
    Room for vertical offsets around the graph

    Minimum of: nonzero vertical gaps at the ends of y-overlapping segment
    pairs; slope difference times the y-distance from each crossing or cusp
    to the nearest mark on its segments; slope difference times the inner
    collar distance for two ends leaving a vertex on the same side.
    """
    layout = layout or compute_layout(graph)
    segs = []
    for e in graph.edges:
        for j, (a, b) in enumerate(e.front.edges()):
            m = slope(a, b)
            segs.append((e.id, j, min(a.y, b.y), max(a.y, b.y), m, a.z - m * a.y))
    found: List[Fraction] = []
    for i, s in enumerate(segs):
        for t in segs[i + 1:]:
            lo, hi = max(s[2], t[2]), min(s[3], t[3])
            if lo > hi:
                continue
            for y in (lo, hi):
                d = abs((s[4] - t[4]) * y + s[5] - t[5])
                if d:
                    found.append(d)

    marks = _marks(graph, layout)
    for c in layout.crossings:
        ds = abs(c.over_slope - c.under_slope)
        near = [
            abs(y - c.point.y)
            for ref in (c.over, c.under)
            for y in marks[(graph.edges[ref.strand].id, ref.index)]
            if y != c.point.y
        ]
        found.append(ds * min(near))
    for e in graph.edges:
        pts = e.front.points
        for i in sorted(e.front.cusps):
            ds = abs(slope(pts[i - 1], pts[i]) - slope(pts[i], pts[i + 1]))
            near = [abs(y - pts[i].y) for j in (i - 1, i) for y in marks[(e.id, j)] if y != pts[i].y]
            found.append(ds * min(near))
    for v in graph.vertices:
        ends = v.incident_ends
        for i, a in enumerate(ends):
            for b in ends[i + 1:]:
                if a.side != b.side:
                    continue
                da = abs(layout[a.edge].zone(a.end).inner.y - v.position.y)
                db = abs(layout[b.edge].zone(b.end).inner.y - v.position.y)
                found.append(abs(a.slope - b.slope) * min(da, db))
    return min(found) if found else Fraction(1)


@dataclass(frozen=True)
class Placement:
    """Effective units after shrinking against the clearance"""

    epsilon: Fraction
    mu: Fraction
    group_size: int
    min_step: Fraction
    clearance: Fraction

    def spread(self, prom: ProminenceMap) -> Fraction:
        return self.epsilon * prom.spread() + self.mu * (self.group_size + 1)


def _group_size(segments: SegmentList, prom: ProminenceMap) -> int:
    groups: Counter = Counter()
    for s in segments.passes():
        p = s.passage
        src, tgt = _side_levels(s, prom)
        groups[("band", p.handle, SOURCE, src)] += 1
        groups[("band", p.handle, TARGET, tgt)] += 1
    for s in segments.chords():
        groups[("disk", s.chord.vertex, prom.entry(s.index))] += 1
    return max(groups.values()) if groups else 1


def place(
    segments: SegmentList, prom: ProminenceMap, params: RealizerParams, room: Fraction
) -> Placement:
    levels = sorted(set(prom.values))
    steps = [b - a for a, b in zip(levels, levels[1:])]
    min_step = min(steps) if steps else Fraction(1)
    k = _group_size(segments, prom)
    eps = params.epsilon
    mu = min(params.mu, eps * min_step / (k + 2))
    placement = Placement(eps, mu, k, min_step, room)
    while placement.spread(prom) >= room / 2:
        placement = replace(placement, epsilon=placement.epsilon / 2, mu=placement.mu / 2)
    if placement.epsilon != params.epsilon:
        logger.info(
            f"shrunk eps {format_rational(params.epsilon)} -> {format_rational(placement.epsilon)} "
            f"(clearance {format_rational(room)})"
        )
    return placement


# ---------------------------------------------------------------------------
# Fragments
# ---------------------------------------------------------------------------

def _side_levels(s: Segment, prom: ProminenceMap) -> Tuple[Fraction, Fraction]:
    """(P on the source side, P on the target side) of a pass segment"""
    entry, exit_ = prom.entry(s.index), prom.exit(s.index)
    return (entry, exit_) if s.passage.with_core else (exit_, entry)


@dataclass(frozen=True)
class PassCopy:
    segment: int
    with_core: bool
    source_level: Fraction
    target_level: Fraction
    source_offset: Fraction
    target_offset: Fraction
    source_label: int
    target_label: int
    source_points: Tuple[FrontPoint, ...]
    target_points: Tuple[FrontPoint, ...]
    gain: Fraction
    epsilon: Fraction

    @property
    def entry_level(self) -> Fraction:
        return self.source_level if self.with_core else self.target_level

    @property
    def exit_level(self) -> Fraction:
        return self.target_level if self.with_core else self.source_level

    def travel_points(self) -> Tuple[FrontPoint, ...]:
        if self.with_core:
            return self.source_points + self.target_points
        return tuple(reversed(self.target_points)) + tuple(reversed(self.source_points))

    def jump(self) -> Fraction:
        """Prominence part of the height change across the gap"""
        return self.epsilon * (self.exit_level - self.entry_level)

    def micro(self) -> Fraction:
        entry = self.source_offset if self.with_core else self.target_offset
        exit_ = self.target_offset if self.with_core else self.source_offset
        return exit_ - entry - self.jump()


@dataclass(frozen=True)
class HandleFragment:
    handle: int
    copies: Tuple[PassCopy, ...]


@dataclass(frozen=True)
class ChordPiece:
    segment: int
    vertex: int
    level: Fraction
    offset: Fraction
    tie_rank: int
    points: Tuple[FrontPoint, FrontPoint, FrontPoint]


@dataclass(frozen=True)
class ZeroHandleFragment:
    vertex: int
    pieces: Tuple[ChordPiece, ...]


def build_one_handle_fragment(
    edge_layout: EdgeLayout,
    passes: Sequence[Segment],
    gains: GainTable,
    prom: ProminenceMap,
    placement: Placement,
    attempt: int = 0,
) -> HandleFragment:
    """
    Copies of the two half-cores for every pass through one band

    On each side the copies are stacked by (P on this side, P on the other
    side, rank); equal-P copies are separated by mu-steps. The chord of a
    pass joins its two copies straight across the gap.
    """
    levels = {s.index: _side_levels(s, prom) for s in passes}
    rank = {s.index: s.passage.rank for s in passes}
    src_order = sorted(passes, key=lambda s: (levels[s.index][0], levels[s.index][1], rank[s.index]))
    tgt_order = sorted(passes, key=lambda s: (levels[s.index][1], levels[s.index][0], rank[s.index]))

    def offsets(order, side):
        result = {}
        tie = Counter()
        for label, s in enumerate(order, start=1):
            level = levels[s.index][side]
            micro = placement.mu * (tie[level] + nudge(attempt, 2 * s.index + side))
            tie[level] += 1
            result[s.index] = (label, placement.epsilon * level + micro)
        return result

    src, tgt = offsets(src_order, 0), offsets(tgt_order, 1)
    source_half, target_half = edge_layout.source_half(), edge_layout.target_half()
    copies = []
    for s in passes:
        (src_label, src_off), (tgt_label, tgt_off) = src[s.index], tgt[s.index]
        copies.append(
            PassCopy(
                segment=s.index,
                with_core=s.passage.with_core,
                source_level=levels[s.index][0],
                target_level=levels[s.index][1],
                source_offset=src_off,
                target_offset=tgt_off,
                source_label=src_label,
                target_label=tgt_label,
                source_points=tuple(p.shifted(0, src_off) for p in source_half),
                target_points=tuple(p.shifted(0, tgt_off) for p in target_half),
                gain=gains.gain(s.index),
                epsilon=placement.epsilon,
            )
        )
    return HandleFragment(edge_layout.edge, tuple(copies))


def build_zero_handle_fragment(
    vertex: int,
    position: FrontPoint,
    chords: Sequence[Segment],
    nesting: Mapping[int, Tuple],
    prom: ProminenceMap,
    layout: GraphLayout,
    placement: Placement,
    attempt: int = 0,
) -> ZeroHandleFragment:
    """
    Chords of one vertex disk, each the translate of its two end segments
    through the vertex; equal-P chords are stacked in disk nesting order
    """
    order = sorted(chords, key=lambda s: (prom.entry(s.index), nesting[s.index]))
    tie = Counter()
    pieces = []
    base = 4 * (len(prom.values) + 1)
    for s in order:
        level = prom.entry(s.index)
        rank = tie[level]
        tie[level] += 1
        o = placement.epsilon * level + placement.mu * (rank + nudge(attempt, base + s.index))
        c = s.chord
        first = layout[c.start.edge].zone(c.start.end).inner
        last = layout[c.stop.edge].zone(c.stop.end).inner
        pieces.append(
            ChordPiece(s.index, vertex, level, o, rank, (first.shifted(0, o), position.shifted(0, o), last.shifted(0, o)))
        )
    pieces.sort(key=lambda p: p.segment)
    return ZeroHandleFragment(vertex, tuple(pieces))


def glue(
    one_fragments: Sequence[HandleFragment],
    zero_fragments: Sequence[ZeroHandleFragment],
    segments: SegmentList,
) -> FrontStrand:
    """
    Concatenate the fragments along the curve into one closed front

    Raises:
        EndpointMismatch: a pass does not jump by eps * gain, or the heights
            of consecutive pieces do not chain up around the curve
    """
    copies = {c.segment: c for f in one_fragments for c in f.copies}
    pieces = {p.segment: p for f in zero_fragments for p in f.pieces}
    points: List[FrontPoint] = []
    for s in segments.passes():
        copy = copies[s.index]
        chord = pieces[s.index + 1]
        following = copies[(s.index + 2) if s.index + 2 <= segments.n else 1]
        if copy.jump() != copy.epsilon * copy.gain:
            raise EndpointMismatch(
                f"pass l_{s.index} jumps by {format_rational(copy.jump())}, "
                f"expected {format_rational(copy.epsilon * copy.gain)}",
                [{"kind": "jump", "segment": s.index}],
            )
        if not copy.exit_level == chord.level == following.entry_level:
            raise EndpointMismatch(
                f"heights do not chain after l_{s.index}", [{"kind": "chain", "segment": s.index}]
            )
        points.extend(copy.travel_points())
        points.extend(chord.points)
    strand = FrontStrand.from_points(points, closed=True)
    if closure_integral(strand) != 0:
        raise EndpointMismatch("glued front does not close up")
    return strand


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

class GainReport(BaseModel):
    segment: int
    handle: int
    direction: str
    rank: int
    count: int
    raw: int
    gain: str
    jump: str
    micro: str


class RealizationReport(BaseModel):
    curve: Optional[str] = None
    segments: int
    start_pass: List[int]
    reversed: bool = False
    distinguished_handle: int
    theta: str
    gains: List[GainReport] = Field(default_factory=list)
    prominence: List[str] = Field(default_factory=list)
    epsilon: str
    mu: str
    clearance: str
    attempts: int
    tb: int
    rot: int
    closure: str
    crossings: int
    cusps: int
    generic: bool
    embedded: bool
    violations: List[Dict[str, Any]] = Field(default_factory=list)
    itinerary: Dict[str, int] = Field(default_factory=dict)
    itinerary_matches: bool
    reference: Optional[Dict[str, Any]] = None

    @property
    def clean(self) -> bool:
        return self.generic and self.embedded and self.itinerary_matches and not self.violations


def _itinerary_key(handle: int, direction: str) -> str:
    return f"e{handle}:{direction}"


def output_itinerary(
    front: FrontStrand, graph: LegendrianGraphFront, layout: Optional[GraphLayout] = None
) -> Dict[str, int]:
    """
    Per-band pass counts read off the output front

    Counts the front edges that cross the vertical line through each gap
    midpoint inside the half-clearance band around the core; the direction
    is with_core when the edge runs the same way as the core there.
    """
    layout = layout or compute_layout(graph)
    band = clearance(graph, layout) / 2
    counts: Counter = Counter()
    for e in graph.edges:
        lay = layout[e.id]
        mid = lay.gap_midpoint()
        forward = lay.gap_end.y > lay.gap_start.y
        for a, b in front.edges():
            if not min(a.y, b.y) < mid.y < max(a.y, b.y):
                continue
            z = a.z + (mid.y - a.y) * (b.z - a.z) / (b.y - a.y)
            if abs(z - mid.z) < band:
                direction = WITH_CORE if (b.y > a.y) == forward else AGAINST_CORE
                counts[_itinerary_key(e.id, direction)] += 1
    return dict(sorted(counts.items()))


def input_itinerary(curve: CurveOnRibbon) -> Dict[str, int]:
    return dict(sorted(Counter(_itinerary_key(p.handle, p.direction) for p in curve.passes).items()))


def compare_reference(report: RealizationReport, reference: Optional[Mapping[str, Any]]) -> Optional[Dict[str, Any]]:
    """Printed reference values next to the recomputed ones"""
    if not reference:
        return None
    printed = dict(reference.get("printed", {}))
    recomputed = {}
    if "segment" in printed:
        seg = int(printed["segment"])
        recomputed["segment"] = seg
        for g in report.gains:
            if g.segment == seg:
                recomputed["gain"] = g.gain
        recomputed["entry_prominence"] = report.prominence[seg - 1]
    return {
        "source": reference.get("source"),
        "printed": printed,
        "recomputed": recomputed,
        "agrees": all(str(printed.get(k)) == str(v) for k, v in recomputed.items() if k in printed),
    }


def realize(
    graph: LegendrianGraphFront,
    curve: CurveOnRibbon,
    params: Optional[RealizerParams] = None,
    ribbon: Optional[AbstractRibbon] = None,
    layout: Optional[GraphLayout] = None,
) -> Tuple[FrontStrand, RealizationReport]:
    """
    Legendrian realization of a simple closed curve on the ribbon of `graph`

    Raises:
        NotSimple, NotNormalized, Disconnected, BadRanks: invalid curve
        NoOddHandle: homologically trivial curve
        RealizationFailed: no generic front within the retry budget
    """
    params = params or RealizerParams.from_config()
    layout = layout or compute_layout(graph)
    ribbon = ribbon or build_ribbon(graph, layout)
    validate_curve(ribbon, curve)

    segments = subdivide(ribbon, curve, params.start_pass, params.reverse)
    raw = relative_gain(segments)
    theta = raw.total()
    hstar = select_distinguished_handle(ribbon, segments)
    gains = balance(raw, hstar)
    prom = prominence(segments, gains)
    room = clearance(graph, layout)
    placement = place(segments, prom, params, room)

    nesting = {}
    for chords in disk_chords(ribbon, segments.curve).values():
        for dc in chords:
            nesting[2 * dc.index + 2] = nesting_key(dc)

    by_handle: Dict[int, List[Segment]] = {}
    for s in segments.passes():
        by_handle.setdefault(s.passage.handle, []).append(s)
    by_vertex: Dict[int, List[Segment]] = {}
    for s in segments.chords():
        by_vertex.setdefault(s.chord.vertex, []).append(s)

    last_violations: List[Dict[str, Any]] = []
    for attempt in range(params.max_attempts):
        if attempt and attempt % 2 == 0:
            placement = replace(placement, epsilon=placement.epsilon / 2, mu=placement.mu / 2)
        ones = [
            build_one_handle_fragment(layout[h], passes, gains, prom, placement, attempt)
            for h, passes in sorted(by_handle.items())
        ]
        zeros = [
            build_zero_handle_fragment(
                v, graph.vertex(v).position, chords, nesting, prom, layout, placement, attempt
            )
            for v, chords in sorted(by_vertex.items())
        ]
        knot = glue(ones, zeros, segments)
        report = check_generic(FrontDiagram((knot,)))
        embedded = check_embedded(knot)
        if report.ok and embedded:
            break
        last_violations = [v.model_dump(exclude_none=True) for v in report.violations]
        logger.info(f"attempt {attempt + 1}: front not generic ({report.kinds()}), retrying")
    else:
        raise RealizationFailed(
            f"no generic front after {params.max_attempts} attempts", last_violations
        )

    copies = {c.segment: c for f in ones for c in f.copies}
    itinerary = output_itinerary(knot, graph, layout)
    result = RealizationReport(
        curve=curve.name,
        segments=segments.n,
        start_pass=[segments.segment(1).passage.handle, segments.segment(1).passage.rank],
        reversed=params.reverse,
        distinguished_handle=hstar,
        theta=format_rational(theta),
        gains=[
            GainReport(
                segment=e.segment,
                handle=e.handle,
                direction=e.direction,
                rank=e.rank,
                count=e.count,
                raw=e.raw,
                gain=format_rational(e.gain),
                jump=format_rational(copies[e.segment].jump()),
                micro=format_rational(copies[e.segment].micro()),
            )
            for e in gains.entries
        ],
        prominence=[format_rational(p) for p in prom.values],
        epsilon=format_rational(placement.epsilon),
        mu=format_rational(placement.mu),
        clearance=format_rational(room),
        attempts=attempt + 1,
        tb=thurston_bennequin(knot),
        rot=rotation_number(knot),
        closure=format_rational(closure_integral(knot)),
        crossings=len(crossings(FrontDiagram((knot,)))),
        cusps=len(knot.cusps),
        generic=report.ok,
        embedded=embedded,
        itinerary=itinerary,
        itinerary_matches=itinerary == input_itinerary(segments.curve),
    )
    result = result.model_copy(update={"reference": compare_reference(result, curve.reference)})
    logger.info(
        f"realized {curve.name or 'curve'}: n={segments.n}, tb={result.tb}, rot={result.rot}, "
        f"{result.crossings} crossings, {result.attempts} attempt(s)"
    )
    return knot, result
