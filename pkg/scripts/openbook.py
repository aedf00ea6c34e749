"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Open book -> contact surgery diagram compiler

The page of genus g with b boundary components is the ribbon of a model
graph: one vertex at the origin with 2g + b - 1 loop petals, all leaving to
the right. An A-block is two petals with interleaved rays (a punctured
torus); a B-block is one petal with adjacent rays (an extra boundary
component).

Surgery link:
    word curves tau_1 ... tau_m realized on pages t_1 < ... < t_m < 0 with
    coefficient -sign, plus the cancellation link: every A<i>_2 and B<j> on
    the page eps and every A<i>_1 on the page 2 eps, all +1.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from scripts.curve_model import WITH_CORE, CurveOnRibbon, Pass, curve_from_walk, subdivide, validate_curve
from scripts.errors import HomologicallyTrivialWordCurve, RealizationFailed, SchemaError
from scripts.front_model import (
    FrontDiagram,
    FrontPoint,
    FrontStrand,
    check_embedded,
    check_generic,
    rotation_number,
    strand_from_doc,
    strand_to_doc,
    thurston_bennequin,
    translate,
)
from scripts.legendrian_graph import LegendrianGraphFront, assemble_graph, compute_layout
from scripts.realizer import (
    RealizationReport,
    RealizerParams,
    balance,
    clearance,
    nudge,
    prominence,
    realize,
    relative_gain,
    select_distinguished_handle,
)
from scripts.ribbon import AbstractRibbon, build_ribbon, is_homologically_nontrivial
from scripts.schemas import (
    OpenBookDocument,
    RationalDoc,
    SurgeryComponentDoc,
    SurgeryDocument,
    load_document,
    to_document,
)
from scripts.utils import format_rational

logger = logging.getLogger(__name__)

ORIGIN = FrontPoint(0, 0)


# ---------------------------------------------------------------------------
# Model graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Petal:
    name: str
    edge: int
    first_ray: int
    second_ray: int
    reach: int
    tip: int


def model_petals(g: int, b: int) -> List[Petal]:
    """Petals in edge-id order: A-blocks first, then B-blocks"""
    petals = []
    for i in range(g):
        j = 4 * i
        petals.append(Petal(f"A{i + 1}_1", 2 * i, j, j + 2, 2, 4))
        petals.append(Petal(f"A{i + 1}_2", 2 * i + 1, j + 1, j + 3, 6, 8))
    for k in range(b - 1):
        j = 4 * g + 2 * k
        petals.append(Petal(f"B{k + 1}", 2 * g + k, j, j + 1, 2, 4))
    return petals


def petal_front(petal: Petal, loops: int) -> FrontStrand:
    """
    V -> X on the first ray, up to the cusp C, back to W on the second ray, V

    Ray j has slope 2j - (2 * loops - 1).
    """
    s_p = 2 * petal.first_ray - (2 * loops - 1)
    s_q = 2 * petal.second_ray - (2 * loops - 1)
    a, c = petal.reach, petal.tip
    x = FrontPoint(a, s_p * a)
    tip = FrontPoint(c, Fraction((s_p + s_q) * c + 1, 2))
    w = FrontPoint(a, s_q * a)
    return FrontStrand((ORIGIN, x, tip, w, ORIGIN), frozenset({2}), False)


def build_model_graph(g: int, b: int) -> Tuple[LegendrianGraphFront, AbstractRibbon]:
    """
    Model graph of the page with genus g and b boundary components

    (0, 1) is the disk: a single vertex without edges.
    """
    if g < 0 or b < 1:
        raise SchemaError(f"no page with genus {g} and {b} boundary components")
    petals = model_petals(g, b)
    loops = len(petals)
    graph = assemble_graph(
        [(0, ORIGIN)],
        [(p.edge, 0, 0, petal_front(p, loops)) for p in petals],
        name=f"model_{g}_{b}",
        allow_isolated=not petals,
    )
    ribbon = build_ribbon(graph)
    if (ribbon.genus, ribbon.boundary_count) != (g, b):
        raise ValueError(
            f"model graph has genus {ribbon.genus} and {ribbon.boundary_count} boundary components, "
            f"expected {g} and {b}"
        )
    return graph, ribbon


def model_monodromy_curves(g: int, b: int) -> Dict[str, CurveOnRibbon]:
    """Named curves A<i>_1, A<i>_2, B<j> in factorization order, each once around its petal"""
    return {p.name: CurveOnRibbon((Pass(p.edge, WITH_CORE, 1),), p.name) for p in model_petals(g, b)}


def chain_curve(g: int, b: int, names: Sequence[str]) -> CurveOnRibbon:
    """Curve passing with the core through each listed petal in order"""
    edges = {p.name: p.edge for p in model_petals(g, b)}
    missing = [n for n in names if n not in edges]
    if missing or not names:
        raise SchemaError(f"unknown generator(s) in chain: {missing or names}")
    return curve_from_walk([(edges[n], WITH_CORE) for n in names], name="*".join(names))


# ---------------------------------------------------------------------------
# Open books
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WordEntry:
    curve: CurveOnRibbon
    sign: int


@dataclass(frozen=True)
class OpenBookSpec:
    """word[0] is tau_1, applied first"""

    genus: int
    boundary: int
    word: Tuple[WordEntry, ...] = ()


def parse_open_book(data) -> OpenBookSpec:
    doc = load_document(OpenBookDocument, data)
    named = model_monodromy_curves(doc.genus, doc.boundary)
    word = []
    for i, entry in enumerate(doc.word, start=1):
        if entry.generator is not None:
            if entry.generator not in named:
                raise SchemaError(f"word entry {i}: unknown generator {entry.generator!r}")
            curve = named[entry.generator]
        elif entry.chain is not None:
            curve = chain_curve(doc.genus, doc.boundary, entry.chain)
        else:
            curve = CurveOnRibbon(tuple(Pass(p.handle, p.direction, p.rank) for p in entry.passes), f"word{i}")
        word.append(WordEntry(curve, entry.sign))
    return OpenBookSpec(doc.genus, doc.boundary, tuple(word))


@dataclass(frozen=True)
class SurgeryComponent:
    name: str
    group: str  # "word" | "cancellation"
    coefficient: int
    level: Fraction
    knot: FrontStrand
    tb: int
    rot: int


@dataclass(frozen=True)
class SurgeryDiagram:
    genus: int
    boundary: int
    epsilon: Fraction
    components: Tuple[SurgeryComponent, ...] = ()
    reports: Dict[str, RealizationReport] = field(default_factory=dict, compare=False, hash=False)

    def diagram(self) -> FrontDiagram:
        return FrontDiagram(tuple(c.knot for c in self.components))

    def word_components(self) -> List[SurgeryComponent]:
        return [c for c in self.components if c.group == "word"]

    def cancellation_components(self) -> List[SurgeryComponent]:
        return [c for c in self.components if c.group == "cancellation"]

    def labels(self) -> List[str]:
        return [f"{c.name} ({'+1' if c.coefficient > 0 else '-1'})" for c in self.components]


def _curve_params(curve: CurveOnRibbon, params: RealizerParams) -> RealizerParams:
    """params with start_pass dropped when it is not a pass of this curve"""
    if params.start_pass is None or params.start_pass in {(p.handle, p.rank) for p in curve.passes}:
        return params
    logger.debug(f"start pass {params.start_pass} not on {curve.name or 'curve'}, using the default")
    return replace(params, start_pass=None)


def _prominence_units(ribbon: AbstractRibbon, curve: CurveOnRibbon, params: RealizerParams) -> Fraction:
    segments = subdivide(ribbon, curve, params.start_pass, params.reverse)
    gains = balance(relative_gain(segments), select_distinguished_handle(ribbon, segments))
    return prominence(segments, gains).spread()


def check_word(ribbon: AbstractRibbon, spec: OpenBookSpec) -> None:
    for i, entry in enumerate(spec.word, start=1):
        validate_curve(ribbon, entry.curve)
        nontrivial, _ = is_homologically_nontrivial(ribbon, entry.curve)
        if not nontrivial:
            counts = entry.curve.pass_counts()
            raise HomologicallyTrivialWordCurve(
                f"word curve {i} ({entry.curve.name or 'inline'}) is homologically trivial",
                [{"kind": "homologically trivial", "entry": i, "pass_counts": {str(h): c for h, c in counts.items()}}],
            )


def compile_open_book(spec: OpenBookSpec, params: Optional[RealizerParams] = None) -> SurgeryDiagram:
    """
    Contact (+1/-1) surgery diagram of the open book

    Raises:
        HomologicallyTrivialWordCurve: a word curve crosses every cocore evenly
        RealizationFailed: no generic link within the retry budget
    """
    params = params or RealizerParams.from_config()
    graph, ribbon = build_model_graph(spec.genus, spec.boundary)
    layout = compute_layout(graph)
    check_word(ribbon, spec)

    m = len(spec.word)
    units = max([_prominence_units(ribbon, e.curve, _curve_params(e.curve, params)) for e in spec.word] + [Fraction(0)])
    units += 1
    room = clearance(graph, layout)
    eps = params.epsilon
    span = 4 * m * units + units + 3
    while eps * span >= room / 2:
        eps /= 2
    mu = min(params.mu, eps / 8)
    inner = RealizerParams(eps, mu, params.start_pass, params.reverse, params.max_attempts)
    spacing = 4 * eps * units
    logger.info(
        f"compiling page ({spec.genus}, {spec.boundary}), {m} twist(s): eps={format_rational(eps)}, "
        f"page spacing {format_rational(spacing)}"
    )

    realized: List[Tuple[str, str, int, Fraction, FrontStrand]] = []
    reports: Dict[str, RealizationReport] = {}
    for i, entry in enumerate(spec.word, start=1):
        knot, report = realize(graph, entry.curve, _curve_params(entry.curve, inner), ribbon, layout)
        name = f"L{i}"
        reports[name] = report
        realized.append((name, "word", -entry.sign, -(m - i + 1) * spacing, knot))
    for name, curve in model_monodromy_curves(spec.genus, spec.boundary).items():
        knot, report = realize(graph, curve, RealizerParams(eps, mu, max_attempts=params.max_attempts), ribbon, layout)
        reports[name] = report
        level = 2 * eps if name.endswith("_1") else eps
        realized.append((name, "cancellation", 1, level, knot))

    components = _place_pages(realized, mu, params.max_attempts)
    result = SurgeryDiagram(spec.genus, spec.boundary, eps, tuple(components), reports)
    logger.info(f"surgery diagram: {len(components)} component(s)")
    return result


def _place_pages(realized, mu: Fraction, max_attempts: int) -> List[SurgeryComponent]:
    """
    Translate every knot to its page; knots sharing a page are separated by
    order-preserving shifts below mu. The recorded level stays nominal.

    Retries nudge every component by its own amount and, every second
    attempt, pull the word pages slightly towards 0 (order is kept).
    """
    shared: Dict[Fraction, int] = {}
    slots = []
    for _, _, _, level, _ in realized:
        slots.append(shared.get(level, 0))
        shared[level] = slots[-1] + 1

    unit = mu / (2 * (max(shared.values(), default=1) + 1))
    last = []
    for attempt in range(max_attempts):
        squeeze = 1 - Fraction(attempt // 2, 4 * max_attempts)
        components = []
        for k, ((name, group, coefficient, level, knot), slot) in enumerate(zip(realized, slots)):
            page = level * squeeze if level < 0 else level
            moved = translate(knot, 0, page + unit * (slot + nudge(attempt, k)))
            components.append(
                SurgeryComponent(name, group, coefficient, level, moved, thurston_bennequin(moved), rotation_number(moved))
            )
        report = check_generic(FrontDiagram(tuple(c.knot for c in components)))
        if report.ok and all(check_embedded(c.knot) for c in components):
            if attempt:
                logger.info(f"page placement generic after {attempt + 1} attempts")
            return components
        last = [v.model_dump(exclude_none=True) for v in report.violations]
        logger.info(f"page placement attempt {attempt + 1}: {report.kinds()}")
    raise RealizationFailed("surgery link is not generic", last)


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def serialize_surgery_diagram(diagram: SurgeryDiagram) -> dict:
    doc = SurgeryDocument(
        genus=diagram.genus,
        boundary=diagram.boundary,
        epsilon=RationalDoc.of(diagram.epsilon),
        components=[
            SurgeryComponentDoc(
                name=c.name,
                group=c.group,
                coefficient=c.coefficient,
                level=RationalDoc.of(c.level),
                tb=c.tb,
                rot=c.rot,
                front=strand_to_doc(c.knot),
            )
            for c in diagram.components
        ],
    )
    return to_document(doc)


def parse_surgery_diagram(data) -> SurgeryDiagram:
    doc = load_document(SurgeryDocument, data)
    return SurgeryDiagram(
        doc.genus,
        doc.boundary,
        doc.epsilon.value,
        tuple(
            SurgeryComponent(c.name, c.group, c.coefficient, c.level.value, strand_from_doc(c.front), c.tb, c.rot)
            for c in doc.components
        ),
    )
