"""
Tests for the realizer: gains, balancing, prominence and the assembled front
"""

from fractions import Fraction

import pytest

from conftest import constructed_simple_curve, fixture_data, random_simple_curve
from scripts.curve_model import (
    WITH_CORE,
    ArcPoint,
    Chord,
    CurveOnRibbon,
    Pass,
    Segment,
    disk_chords,
    nesting_key,
    parse_curve,
    subdivide,
)
from scripts.errors import EndpointMismatch, NoOddHandle, UnbalancedGains
from scripts.front_model import (
    FrontDiagram,
    FrontStrand,
    check_embedded,
    check_generic,
    closure_integral,
    crossings,
    rotation_number,
    thurston_bennequin,
)
from scripts.legendrian_graph import SOURCE, TARGET, compute_layout, parse_graph
from scripts.openbook import build_model_graph
from scripts.realizer import (
    GainEntry,
    GainTable,
    Placement,
    ProminenceMap,
    RealizerParams,
    balance,
    build_one_handle_fragment,
    build_zero_handle_fragment,
    clearance,
    glue,
    input_itinerary,
    nudge,
    output_itinerary,
    place,
    prominence,
    raw_gain,
    realize,
    relative_gain,
    relative_gain_raw,
    select_distinguished_handle,
)
from scripts.ribbon import build_ribbon


def test_raw_gains_per_band():
    assert relative_gain_raw(1) == [0]
    assert relative_gain_raw(2) == [-1, 1]
    assert relative_gain_raw(3) == [-1, 0, 1]
    assert relative_gain_raw(4) == [-2, -1, 1, 2]
    with pytest.raises(ValueError):
        relative_gain_raw(0)


def _worked_segments(worked_graph, worked_curve):
    ribbon = build_ribbon(worked_graph)
    return ribbon, subdivide(ribbon, worked_curve)


def test_worked_example_gains(worked_graph, worked_curve):
    ribbon, segments = _worked_segments(worked_graph, worked_curve)
    raw = relative_gain(segments)
    assert [e.gain for e in raw.entries] == [-1, -1, -1, 0, -1, -1, -1, 0]
    assert raw.total() == -6
    assert raw.entry(7).count == 1

    hstar = select_distinguished_handle(ribbon, segments)
    assert hstar == 1
    gains = balance(raw, hstar)
    assert gains.gain(15) == 6
    assert gains.total() == 0


def test_worked_example_prominence(worked_graph, worked_curve):
    ribbon, segments = _worked_segments(worked_graph, worked_curve)
    gains = balance(relative_gain(segments), 1)
    prom = prominence(segments, gains)
    assert len(prom.values) == 17
    assert [prom.entry(2 * i - 1) for i in range(1, 9)] == [0, -1, -2, -3, -3, -4, -5, -6]
    assert prom.exit(16) == 0
    assert prom.spread() == 6


def test_unbalanced_gains_cannot_close(worked_graph, worked_curve):
    _, segments = _worked_segments(worked_graph, worked_curve)
    with pytest.raises(UnbalancedGains):
        prominence(segments, relative_gain(segments))


def test_balance_spreads_theta_over_the_distinguished_band():
    from scripts.realizer import GainEntry, GainTable

    def entry(seg, direction, gain):
        return GainEntry(seg, 0, direction, seg, 3, Fraction(0), 0, 1, Fraction(gain))

    table = GainTable(
        (
            entry(1, WITH_CORE, 1),
            entry(3, WITH_CORE, 1),
            entry(5, "against_core", 1),
        )
    )
    balanced = balance(table, 0)
    assert [e.gain for e in balanced.entries] == [-2, -2, 4]


def test_homologically_trivial_curve_has_no_odd_handle(graph_a):
    curve = parse_curve(fixture_data("trivial.crv.json"))
    with pytest.raises(NoOddHandle) as info:
        realize(graph_a, curve)
    assert info.value.exit_code == 3


def test_nudge_is_small_and_deterministic():
    assert nudge(0, 5) == 0
    values = [nudge(a, k) for a in range(1, 6) for k in range(8)]
    assert all(0 <= v < Fraction(1, 3) for v in values)
    assert nudge(3, 2) == nudge(3, 2)


def test_nudge_moves_keys_relative_to_each_other():
    gaps = {nudge(a, 3) - nudge(a, 1) for a in range(1, 12)}
    assert len(gaps) > 5


def test_clearance_is_positive(graph_a, worked_graph):
    assert clearance(graph_a) > 0
    assert clearance(worked_graph) > 0


def test_petal_curve_realizes_to_standard_unknot(graph_b):
    curve = parse_curve(fixture_data("minimal.crv.json"))
    knot, report = realize(graph_b, curve)
    assert report.clean
    assert report.theta == "0"
    assert report.tb == thurston_bennequin(knot) == -1
    assert report.rot == rotation_number(knot) == 0
    assert report.cusps == 2
    assert report.itinerary == {"e0:with_core": 1}


@pytest.mark.parametrize("handle", [0, 1])
def test_model_petals_of_graph_a(graph_a, handle):
    knot, report = realize(graph_a, CurveOnRibbon((Pass(handle, WITH_CORE, 1),)))
    assert report.clean
    assert report.tb == -1


@pytest.mark.slow
def test_worked_example_realization(worked_graph, worked_curve):
    layout = compute_layout(worked_graph)
    knot, report = realize(worked_graph, worked_curve, layout=layout)

    assert knot.closed
    assert closure_integral(knot) == 0
    assert check_generic(FrontDiagram((knot,))).ok
    assert check_embedded(knot)
    assert report.clean
    assert report.distinguished_handle == 1
    assert report.theta == "-6"
    assert report.segments == 16

    assert output_itinerary(knot, worked_graph, layout) == input_itinerary(worked_curve)
    assert report.itinerary_matches

    jumps = {g.segment: Fraction(g.jump) for g in report.gains}
    eps = Fraction(report.epsilon)
    assert jumps[15] == 6 * eps
    assert jumps[7] == 0


@pytest.mark.slow
def test_worked_example_reference_comparison(worked_graph, worked_curve):
    _, report = realize(worked_graph, worked_curve)
    ref = report.reference
    assert ref["printed"] == {"segment": 15, "gain": 5, "entry_prominence": -5}
    assert ref["recomputed"] == {"segment": 15, "gain": "6", "entry_prominence": "-6"}
    assert ref["agrees"] is False


@pytest.mark.slow
@pytest.mark.parametrize(
    "params",
    [
        RealizerParams(reverse=True),
        RealizerParams(start_pass=(3, 2)),
        RealizerParams(epsilon=Fraction(1, 2), mu=Fraction(1, 16)),
    ],
)
def test_worked_example_variants(worked_graph, worked_curve, params):
    knot, report = realize(worked_graph, worked_curve, params)
    assert report.clean
    assert closure_integral(knot) == 0
    assert Fraction(report.epsilon) <= params.epsilon


def test_raw_gains_are_antisymmetric():
    assert relative_gain_raw(5) == [-2, -1, 0, 1, 2]
    for k in range(1, 51):
        gains = relative_gain_raw(k)
        assert sum(gains) == 0
        assert gains == [-g for g in reversed(gains)]


def _corpus_graphs(worked_graph):
    graphs = [build_model_graph(g, b)[0] for g, b in [(0, 2), (0, 3), (1, 1), (1, 2), (2, 1)]]
    return [(g, build_ribbon(g)) for g in graphs + [worked_graph]]


@pytest.mark.slow
def test_random_curves_balance_and_close(worked_graph, rng, corpus_size):
    pool = _corpus_graphs(worked_graph)
    checked = 0
    for _ in range(corpus_size):
        graph, ribbon = rng.choice(pool)
        curve = random_simple_curve(rng, graph, ribbon, max_passes=30)
        if curve is None:
            continue
        segments = subdivide(ribbon, curve)
        gains = balance(relative_gain(segments), select_distinguished_handle(ribbon, segments))
        assert gains.total() == 0
        prom = prominence(segments, gains)
        assert prom.entry(1) == prom.exit(segments.n) == 0
        checked += 1
    assert checked > corpus_size // 2


@pytest.mark.slow
def test_random_curves_realize(worked_graph, rng, corpus_size):
    pool = [(graph, ribbon, compute_layout(graph)) for graph, ribbon in _corpus_graphs(worked_graph)]
    seen = set()
    for _ in range(corpus_size):
        graph, ribbon, layout = rng.choice(pool)
        curve = random_simple_curve(rng, graph, ribbon, max_passes=8)
        if curve is None or (id(graph), curve.passes) in seen:
            continue
        seen.add((id(graph), curve.passes))
        knot, report = realize(graph, curve, ribbon=ribbon, layout=layout)
        assert knot.closed
        assert closure_integral(knot) == 0
        assert check_generic(FrontDiagram((knot,))).ok
        assert check_embedded(knot)
        assert report.clean
        assert output_itinerary(knot, graph, layout) == input_itinerary(curve)
    assert seen


def _model_pages():
    pages = []
    for g in range(5):
        for b in range(1, 4):
            if 1 <= 2 * g + b - 1 <= 10:
                graph, ribbon = build_model_graph(g, b)
                pages.append((g, b, graph, ribbon, compute_layout(graph)))
    return pages


def _constructed_corpus(rng, size, max_passes):
    pages = _model_pages()
    corpus = []
    for _ in range(20 * size):
        if len(corpus) == size:
            break
        g, b, graph, ribbon, layout = rng.choice(pages)
        curve = constructed_simple_curve(rng, g, b, ribbon, max_passes)
        if curve is not None:
            corpus.append((graph, ribbon, layout, curve))
    return corpus


@pytest.mark.acceptance
def test_constructed_curves_balance_and_close(rng, acceptance_size):
    corpus = _constructed_corpus(rng, acceptance_size, max_passes=30)
    assert len(corpus) == acceptance_size
    for _, ribbon, _, curve in corpus:
        segments = subdivide(ribbon, curve)
        gains = balance(relative_gain(segments), select_distinguished_handle(ribbon, segments))
        assert gains.total() == 0
        prom = prominence(segments, gains)
        assert prom.entry(1) == prom.exit(segments.n) == 0
    assert max(len(curve.passes) for *_, curve in corpus) >= 20


@pytest.mark.acceptance
def test_constructed_curves_realize(rng, acceptance_size):
    corpus = _constructed_corpus(rng, acceptance_size, max_passes=30)
    assert len(corpus) == acceptance_size
    for graph, ribbon, layout, curve in corpus:
        knot, report = realize(graph, curve, ribbon=ribbon, layout=layout)
        assert knot.closed
        assert closure_integral(knot) == 0
        assert check_generic(FrontDiagram((knot,))).ok
        assert check_embedded(knot)
        assert report.clean
        assert output_itinerary(knot, graph, layout) == input_itinerary(curve)


# ---------------------------------------------------------------------------
# Fragments and gluing
# ---------------------------------------------------------------------------

EPS, MU = Fraction(1, 8), Fraction(1, 64)

# (P on the source side, P on the target side) per rank, bottom to top
BRAID = {1: (4, 1), 2: (2, 0), 3: (3, 2), 4: (3, 4), 5: (2, 4), 6: (0, 3)}


def _braid_fragment(graph_b):
    passes = [Segment(2 * r - 1, "pass", passage=Pass(0, WITH_CORE, r)) for r in BRAID]
    values = [Fraction(0)] * 13
    entries = []
    for r, (left, right) in BRAID.items():
        values[2 * r - 2], values[2 * r - 1] = Fraction(left), Fraction(right)
        a = Fraction(r) - Fraction(7, 2)
        entries.append(GainEntry(2 * r - 1, 0, WITH_CORE, r, 6, a, raw_gain(r, 6), 1, Fraction(right - left)))
    placement = Placement(EPS, MU, 2, Fraction(1), Fraction(1))
    layout = compute_layout(graph_b)
    return build_one_handle_fragment(layout[0], passes, GainTable(tuple(entries)), ProminenceMap(tuple(values)), placement)


def test_band_copies_are_stacked_by_prominence(graph_b):
    copies = {c.segment: c for c in _braid_fragment(graph_b).copies}
    by_rank = {r: copies[2 * r - 1] for r in BRAID}

    assert {r: c.source_label for r, c in by_rank.items()} == {6: 1, 2: 2, 5: 3, 3: 4, 4: 5, 1: 6}
    assert {r: c.target_label for r, c in by_rank.items()} == {2: 1, 1: 2, 3: 3, 6: 4, 5: 5, 4: 6}
    assert [c.source_level for c in sorted(by_rank.values(), key=lambda c: c.source_label)] == [0, 2, 2, 3, 3, 4]
    assert [c.target_level for c in sorted(by_rank.values(), key=lambda c: c.target_label)] == [0, 1, 2, 3, 4, 4]

    assert by_rank[5].source_offset == 2 * EPS + MU
    assert by_rank[4].target_offset == 4 * EPS + MU
    assert by_rank[1].target_offset == EPS
    for c in by_rank.values():
        assert c.jump() == EPS * c.gain
    assert {r: c.micro() for r, c in by_rank.items()} == {1: 0, 2: 0, 3: 0, 4: 0, 5: -MU, 6: 0}


def test_band_copies_cross_once_in_the_gap_iff_their_order_swaps(graph_b):
    copies = _braid_fragment(graph_b).copies
    gaps = [FrontStrand((c.source_points[-1], c.target_points[0])) for c in copies]
    total = 0
    for i in range(len(copies)):
        for j in range(i + 1, len(copies)):
            a, b = copies[i], copies[j]
            swapped = (a.source_label < b.source_label) != (a.target_label < b.target_label)
            found = len(crossings(FrontDiagram((gaps[i], gaps[j]))))
            assert found == (1 if swapped else 0)
            total += found
    assert total == 7


def _chords(graph, levels, nesting, ends):
    segments = [Segment(2 * k, "chord", chord=Chord(0, *ends[k])) for k in range(1, len(levels) + 1)]
    values = [Fraction(0)] * (2 * len(levels) + 1)
    for k, level in enumerate(levels, start=1):
        values[2 * k - 1] = Fraction(level)
    placement = Placement(EPS, MU, len(levels), Fraction(1), Fraction(1))
    layout = compute_layout(graph)
    keys = {2 * k: nesting[k - 1] for k in range(1, len(levels) + 1)}
    fragment = build_zero_handle_fragment(
        0, graph.vertex(0).position, segments, keys, ProminenceMap(tuple(values)), layout, placement
    )
    return fragment, layout


def test_disk_chords_are_stacked_by_prominence(graph_a):
    ends = {k: (ArcPoint(0, TARGET, 1), ArcPoint(1, SOURCE, 1)) for k in range(1, 6)}
    fragment, layout = _chords(graph_a, [3, 1, 2, 0, 4], [(k,) for k in range(5)], ends)
    stacked = sorted(fragment.pieces, key=lambda p: p.offset)
    assert [p.segment for p in stacked] == [8, 4, 6, 2, 10]
    for p in fragment.pieces:
        assert p.offset == EPS * p.level
        assert p.points[1] == graph_a.vertex(0).position.shifted(0, p.offset)
        assert p.points[0] == layout[0].zone(TARGET).inner.shifted(0, p.offset)


def test_equal_prominence_chords_follow_the_nesting(graph_a):
    ends = {k: (ArcPoint(0, TARGET, 1), ArcPoint(1, SOURCE, 1)) for k in range(1, 6)}
    fragment, _ = _chords(graph_a, [0] * 5, [(4 - k,) for k in range(5)], ends)
    assert [p.tie_rank for p in fragment.pieces] == [4, 3, 2, 1, 0]
    assert [p.offset for p in fragment.pieces] == [MU * r for r in (4, 3, 2, 1, 0)]


@pytest.mark.parametrize("levels,expected", [((0, 1), 1), ((1, 0), 2)])
def test_disk_chord_crossings_depend_on_the_stacking(graph_a, levels, expected):
    # slopes at the vertex: e0 source -3, e1 source -1, e0 target 1
    ends = {
        1: (ArcPoint(0, SOURCE, 1), ArcPoint(1, SOURCE, 1)),
        2: (ArcPoint(0, SOURCE, 2), ArcPoint(0, TARGET, 1)),
    }
    fragment, _ = _chords(graph_a, list(levels), [(0,), (1,)], ends)
    first, second = (FrontStrand(p.points) for p in fragment.pieces)
    assert len(crossings(FrontDiagram((first, second)))) == expected


def _pipeline(graph, curve):
    layout = compute_layout(graph)
    ribbon = build_ribbon(graph, layout)
    segments = subdivide(ribbon, curve)
    gains = balance(relative_gain(segments), select_distinguished_handle(ribbon, segments))
    prom = prominence(segments, gains)
    placement = place(segments, prom, RealizerParams(), clearance(graph, layout))
    nesting = {
        2 * dc.index + 2: nesting_key(dc) for chords in disk_chords(ribbon, segments.curve).values() for dc in chords
    }
    zeros = [
        build_zero_handle_fragment(
            v.id,
            v.position,
            [s for s in segments.chords() if s.chord.vertex == v.id],
            nesting,
            prom,
            layout,
            placement,
        )
        for v in graph.vertices
    ]
    return segments, gains, prom, placement, layout, zeros


def _ones(segments, gains, prom, placement, layout):
    return [
        build_one_handle_fragment(
            layout[h], [s for s in segments.passes() if s.passage.handle == h], gains, prom, placement
        )
        for h in sorted(segments.pass_counts())
    ]


def test_glue_closes_the_fragments(graph_b):
    segments, gains, prom, placement, layout, zeros = _pipeline(graph_b, parse_curve(fixture_data("minimal.crv.json")))
    ones = _ones(segments, gains, prom, placement, layout)
    knot = glue(ones, zeros, segments)
    assert knot.closed
    assert closure_integral(knot) == 0
    travel = sum(len(c.travel_points()) for f in ones for c in f.copies)
    assert len(knot.points) == travel + 3 * len(segments.chords())


def test_glue_rejects_a_corrupted_gain(graph_b):
    segments, gains, prom, placement, layout, zeros = _pipeline(graph_b, parse_curve(fixture_data("minimal.crv.json")))
    ones = _ones(segments, gains.with_gain(1, 1), prom, placement, layout)
    with pytest.raises(EndpointMismatch) as info:
        glue(ones, zeros, segments)
    assert info.value.exit_code == 4
    assert info.value.details == [{"kind": "jump", "segment": 1}]


def test_curve_through_crossing_bands(graph_a):
    layout = compute_layout(graph_a)
    assert len(layout.crossings) == 1
    knot, report = realize(graph_a, parse_curve(fixture_data("crossing_bands.crv.json")), layout=layout)
    assert report.clean
    assert report.segments == 4
    assert check_generic(FrontDiagram((knot,))).ok


def test_theta_graph_curve():
    graph = parse_graph(fixture_data("theta.lgf.json"))
    knot, report = realize(graph, parse_curve(fixture_data("theta.crv.json")))
    assert report.clean
    assert closure_integral(knot) == 0
    assert report.itinerary_matches
