"""
Shared builders for the legreal test suite
"""

import math
import os
import random
import sys
from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import pytest

# Project root on sys.path so `scripts.*` imports resolve
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from scripts.curve_model import (  # noqa: E402
    AGAINST_CORE,
    WITH_CORE,
    CurveOnRibbon,
    Pass,
    boundary_position,
    parse_curve,
    validate_curve,
)
from scripts.errors import LegrealError  # noqa: E402
from scripts.front_model import FrontPoint, FrontStrand  # noqa: E402
from scripts.legendrian_graph import SOURCE, TARGET, parse_graph  # noqa: E402
from scripts.openbook import model_petals  # noqa: E402
from scripts.path_utils import get_fixtures_dir  # noqa: E402
from scripts.ribbon import (  # noqa: E402
    AbstractRibbon,
    OneHandle,
    ZeroHandle,
    is_homologically_nontrivial,
    side_letter,
    trace_faces,
)
from scripts.utils import read_json  # noqa: E402


def P(y, z) -> FrontPoint:
    return FrontPoint(Fraction(y), Fraction(z))


def fixture_data(name: str):
    return read_json(get_fixtures_dir() / name)


def _validates(ribbon, curve: CurveOnRibbon) -> bool:
    try:
        validate_curve(ribbon, curve)
    except LegrealError:
        return False
    return True


# ---------------------------------------------------------------------------
# Simple curves by construction
# ---------------------------------------------------------------------------

def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _ranks_by_height(heights: Sequence[Fraction], flip: bool) -> List[int]:
    order = sorted(heights)
    ranks = [order.index(h) + 1 for h in heights]
    return [len(ranks) + 1 - r for r in ranks] if flip else ranks


def torus_curve(first: int, second: int, p: int, q: int, flips: Tuple[bool, bool] = (False, True)) -> CurveOnRibbon:
    """
    Line of slope q/p on the punctured torus spanned by two interleaved petals

    The line meets the cocore of `first` p times and the cocore of `second`
    q times (p, q coprime). Passes are read off along the line; ranks in
    each band follow the crossing heights, read downwards in `second`.
    """
    c = Fraction(1, 2 * p * q)
    events = [(Fraction(i, p), first, _frac(c + Fraction(q * i, p))) for i in range(1, p + 1)]
    events += [((j - c) / q, second, _frac(p * (j - c) / q)) for j in range(1, q + 1)]
    events.sort()
    ranks = {}
    for handle, flip in ((first, flips[0]), (second, flips[1])):
        ranks[handle] = iter(_ranks_by_height([h for _, e, h in events if e == handle], flip))
    return CurveOnRibbon(tuple(Pass(e, WITH_CORE, next(ranks[e])) for _, e, _ in events), f"T({p},{q})")


def simple_torus_curve(ribbon, first: int, second: int, p: int, q: int) -> Optional[CurveOnRibbon]:
    """First rank flip of torus_curve that validates on `ribbon`"""
    for flips in [(False, True), (False, False), (True, True), (True, False)]:
        curve = torus_curve(first, second, p, q, flips)
        if _validates(ribbon, curve):
            return curve
    return None


def _closing_rotation(ribbon, curve: CurveOnRibbon) -> Optional[int]:
    """Start index whose closing chord runs backwards along the disk and lies inside no other chord"""
    counts = curve.pass_counts()
    spans = [
        (boundary_position(ribbon, ch.start, counts), boundary_position(ribbon, ch.stop, counts))
        for ch in curve.chords(ribbon)
    ]
    for i, (leave, enter) in enumerate(spans):
        if leave <= enter:
            continue
        if any(min(s) < enter and leave < max(s) for k, s in enumerate(spans) if k != i):
            continue
        return (i + 1) % len(spans)
    return None


def constructed_simple_curve(rng: random.Random, g: int, b: int, ribbon, max_passes: int) -> Optional[CurveOnRibbon]:
    """
    Simple nontrivial curve on the model page (g, b), built block by block

    Every genus block contributes nothing, one petal or a torus word; every
    boundary petal at most one pass. Each block is rotated so its closing
    chord is outermost, then blocks are joined in petal order, which nests
    the joining chords. The result is validated before it is returned.
    """
    petals = model_petals(g, b)
    budget = rng.randint(1, max_passes)
    words = []
    for i in range(g):
        first, second = petals[2 * i].edge, petals[2 * i + 1].edge
        if budget <= 0 or rng.random() < 0.25:
            continue
        if budget == 1 or rng.random() < 0.2:
            words.append(CurveOnRibbon((Pass(rng.choice((first, second)), WITH_CORE, 1),)))
            budget -= 1
            continue
        p = rng.randint(1, budget - 1)
        q = rng.randint(1, budget - p)
        if math.gcd(p, q) != 1:
            q = 1
        word = simple_torus_curve(ribbon, first, second, p, q)
        if word is None:
            return None
        words.append(word)
        budget -= p + q
    for petal in petals[2 * g:]:
        if budget > 0 and rng.random() < 0.5:
            words.append(CurveOnRibbon((Pass(petal.edge, WITH_CORE, 1),)))
            budget -= 1
    if not words:
        return None

    passes: List[Pass] = []
    for word in words:
        i0 = _closing_rotation(ribbon, word)
        if i0 is None:
            return None
        passes.extend(word.passes[i0:] + word.passes[:i0])
    curve = CurveOnRibbon(tuple(passes), "constructed")
    if not _validates(ribbon, curve) or not is_homologically_nontrivial(ribbon, curve)[0]:
        return None
    return curve


# ---------------------------------------------------------------------------
# Small fatgraphs
# ---------------------------------------------------------------------------

def _cyclic_orders(half_edges: Sequence[Tuple[int, str]]) -> Iterator[Tuple[Tuple[int, str], ...]]:
    if not half_edges:
        yield ()
        return
    first, rest = half_edges[0], half_edges[1:]
    for order in permutations(rest):
        yield (first,) + order


def small_spines(max_edges: int) -> Iterator[Tuple[int, Tuple[Tuple[int, int], ...]]]:
    """(vertex count, edge ends) of every connected multigraph with 1..max_edges edges; relabelings repeat"""
    for n_edges in range(1, max_edges + 1):
        for n_vertices in range(1, n_edges + 2):
            pairs = list(combinations_with_replacement(range(n_vertices), 2))
            for ends in combinations_with_replacement(pairs, n_edges):
                spine = nx.MultiGraph()
                spine.add_nodes_from(range(n_vertices))
                spine.add_edges_from(ends)
                if nx.is_connected(spine):
                    yield n_vertices, ends


def small_fatgraphs(max_edges: int, spines=None) -> Iterator[AbstractRibbon]:
    """
    Every connected fatgraph with 1..max_edges edges, under every rotation system

    Cores are empty strands, so only the combinatorics is meaningful.
    """
    for n_vertices, ends in spines or small_spines(max_edges):
        one = tuple(OneHandle(eid, u, v, FrontStrand(())) for eid, (u, v) in enumerate(ends))
        incident = [
            [(eid, end) for eid, (u, v) in enumerate(ends) for end, w in ((SOURCE, u), (TARGET, v)) if w == vertex]
            for vertex in range(n_vertices)
        ]
        for rotation in product(*(list(_cyclic_orders(hs)) for hs in incident)):
            zero = tuple(ZeroHandle(vid, P(vid, 0), arcs) for vid, arcs in enumerate(rotation))
            words = tuple(tuple(side_letter(h) for h in face) for face in trace_faces(zero, one))
            yield AbstractRibbon(zero, one, words)


def random_walk_curve(rng: random.Random, graph, max_passes: int) -> Optional[CurveOnRibbon]:
    """
    Closed walk through the bands of `graph` with shuffled ranks

    Follows incidences, so consecutive passes always share a 0-handle. Returns
    None when the walk does not close up within max_passes.
    """
    if not graph.edges:
        return None
    start = vertex = rng.choice(graph.edges).source
    walk = []
    for _ in range(max_passes):
        options = [(e.id, WITH_CORE, e.target) for e in graph.edges if e.source == vertex]
        options += [(e.id, AGAINST_CORE, e.source) for e in graph.edges if e.target == vertex]
        handle, direction, vertex = rng.choice(options)
        walk.append((handle, direction))
        if vertex == start and rng.random() < 0.5:
            break
    if vertex != start:
        return None
    counts = Counter(h for h, _ in walk)
    ranks = {h: rng.sample(range(1, c + 1), c) for h, c in counts.items()}
    return CurveOnRibbon(tuple(Pass(h, d, ranks[h].pop()) for h, d in walk), "random")


def random_simple_curve(rng: random.Random, graph, ribbon, max_passes: int, tries: int = 200):
    """A random curve that validates and is homologically nontrivial, or None"""
    for _ in range(tries):
        curve = random_walk_curve(rng, graph, max_passes)
        if curve is None:
            continue
        if not _validates(ribbon, curve):
            continue
        if is_homologically_nontrivial(ribbon, curve)[0]:
            return curve
    return None


@pytest.fixture
def unknot() -> FrontStrand:
    return FrontStrand((P(0, 0), P(2, 1), P(4, 0), P(2, -1)), frozenset({0, 2}), True)


@pytest.fixture
def stabilized_unknot() -> FrontStrand:
    points = (P(0, 0), P(4, 2), P(8, 0), P(6, -1), P(3, -2), P(5, -3), P(2, -3))
    return FrontStrand(points, frozenset({0, 2, 4, 5}), True)


@pytest.fixture
def worked_graph():
    return parse_graph(fixture_data("worked_example.lgf.json"))


@pytest.fixture
def worked_curve():
    return parse_curve(fixture_data("worked_example.crv.json"))


@pytest.fixture
def graph_a():
    return parse_graph(fixture_data("graph_a.lgf.json"))


@pytest.fixture
def graph_b():
    return parse_graph(fixture_data("graph_b.lgf.json"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(int(os.getenv("LEGREAL_SEED", "20240601")))


@pytest.fixture
def corpus_size() -> int:
    return int(os.getenv("LEGREAL_CORPUS_SIZE", "200"))


@pytest.fixture
def acceptance_size() -> int:
    return int(os.getenv("LEGREAL_ACCEPTANCE_SIZE", "1000"))


@pytest.fixture
def tmp_output(tmp_path, monkeypatch):
    monkeypatch.setenv("LEGREAL_OUTPUT_DIR", str(tmp_path / "output"))
    monkeypatch.setenv("LEGREAL_LOG_DIR", str(tmp_path / "logs"))
    return tmp_path
