#!/usr/bin/env python3
"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
legreal command line

    python -m scripts.legreal_cli validate GRAPH.lgf.json [CURVE.crv.json ...]
    python -m scripts.legreal_cli realize GRAPH.lgf.json CURVE.crv.json [--svg]
    python -m scripts.legreal_cli realize GRAPH.lgf.json --batch DIR
    python -m scripts.legreal_cli compile BOOK.obk.json
    python -m scripts.legreal_cli invariants FRONT.front.json
    python -m scripts.legreal_cli render DOC.json [--ribbon] [--out FILE]

Exit codes: 0 ok, 1 unexpected failure, 2 invalid document or geometry,
3 invalid curve, 4 internal check failed.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from scripts.curve_model import parse_curve, validate_curve
from scripts.errors import GenericityError, LegrealError, NoOddHandle, SchemaError
from scripts.front_model import (
    FrontDiagram,
    check_embedded,
    check_generic,
    closure_integral,
    component_count,
    crossings,
    parse_diagram,
    rotation_number,
    serialize_diagram,
    thurston_bennequin,
)
from scripts.legendrian_graph import compute_layout, graph_diagram, parse_graph
from scripts.openbook import (
    build_model_graph,
    check_word,
    compile_open_book,
    parse_open_book,
    parse_surgery_diagram,
    serialize_surgery_diagram,
)
from scripts.path_utils import ensure_output_dirs
from scripts.realizer import RealizerParams, realize
from scripts.ribbon import build_ribbon, is_homologically_nontrivial, render_ribbon_front, ribbon_summary
from scripts.schemas import (
    CurveDocument,
    FrontDocument,
    GraphDocument,
    OpenBookDocument,
    SurgeryDocument,
    detect_format,
)
from scripts.svg_renderer import RenderStyle, render_svg
from scripts.utils import RealizerConfig, dump_json, format_rational, parse_rational, read_json, setup_logging, write_json

logger = logging.getLogger("legreal")


def _load(path: str) -> Any:
    try:
        return read_json(path)
    except FileNotFoundError as e:
        raise SchemaError(f"no such file: {path}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not JSON: {e.msg}", [{"kind": "schema", "line": e.lineno}]) from e


def _stem(path: str) -> str:
    return Path(path).name.split(".")[0]


def _start_pass(value: str) -> Tuple[int, int]:
    try:
        handle, rank = value.split(":")
        return int(handle), int(rank)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HANDLE:RANK, got {value!r}")


def _rational(value: str):
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {value!r}")


def _params(args) -> RealizerParams:
    return RealizerParams.from_config(
        RealizerConfig(),
        epsilon=args.epsilon,
        mu=args.mu,
        start_pass=getattr(args, "start_pass", None),
        reverse=getattr(args, "reverse", False),
    )


def _emit(data: Dict[str, Any]) -> None:
    sys.stdout.write(dump_json(data))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(paths: Sequence[str]) -> int:
    """
    Validate every document; curves are checked against the first graph given

    Stops at the first error; the error report lists the documents that passed before it.
    """
    results: List[Dict[str, Any]] = []
    try:
        _validate_documents(paths, results)
    except LegrealError as e:
        logger.warning(f"{type(e).__name__}: {e.message} (after {len(results)} valid document(s))")
        _emit({"ok": False, **e.to_dict(), "documents": results})
        return e.exit_code
    _emit({"ok": True, "documents": results})
    return 0


def _validate_documents(paths: Sequence[str], results: List[Dict[str, Any]]) -> None:
    graph = ribbon = None
    for path in paths:
        data = _load(path)
        kind = detect_format(data)
        if kind is GraphDocument:
            graph = parse_graph(data)
            ribbon = build_ribbon(graph)
            results.append({"path": path, "type": "graph", "ribbon": ribbon_summary(ribbon)})
        elif kind is CurveDocument:
            if ribbon is None:
                raise SchemaError(f"{path}: a curve needs a graph document before it")
            curve = parse_curve(data)
            report = validate_curve(ribbon, curve)
            nontrivial, _ = is_homologically_nontrivial(ribbon, curve)
            if not nontrivial:
                raise NoOddHandle(
                    f"{path}: every handle is passed an even number of times",
                    [{"kind": "homologically trivial", "pass_counts": report.pass_counts}],
                )
            results.append({"path": path, "type": "curve", "report": report.model_dump(mode="json")})
        elif kind is OpenBookDocument:
            spec = parse_open_book(data)
            _, model = build_model_graph(spec.genus, spec.boundary)
            check_word(model, spec)
            results.append({"path": path, "type": "openbook", "word": len(spec.word)})
        else:
            diagram = (
                parse_diagram(data) if kind is FrontDocument else parse_surgery_diagram(data).diagram()
            )
            report = check_generic(diagram)
            if not report.ok or not all(check_embedded(s) for s in diagram.strands if s.closed):
                raise GenericityError(
                    f"{path}: front is not generic", [v.model_dump(exclude_none=True) for v in report.violations]
                )
            results.append({"path": path, "type": "front", "crossings": report.crossing_count})


def _realize_one(graph, ribbon, layout, curve_path: str, params: RealizerParams, out: Path, svg: bool) -> Dict:
    curve = parse_curve(_load(curve_path))
    knot, report = realize(graph, curve, params, ribbon, layout)
    stem = _stem(curve_path)
    write_json(out / "fronts" / f"{stem}.front.json", serialize_diagram(FrontDiagram((knot,))))
    write_json(out / "reports" / f"{stem}.report.json", report.model_dump(mode="json"))
    if svg:
        (out / "svg" / f"{stem}.svg").write_bytes(
            render_svg(FrontDiagram((knot,)), labels=[f"tb={report.tb} rot={report.rot}"], title=stem)
        )
    summary = {
        "curve": stem,
        "segments": report.segments,
        "distinguished_handle": report.distinguished_handle,
        "theta": report.theta,
        "tb": report.tb,
        "rot": report.rot,
        "crossings": report.crossings,
        "epsilon": report.epsilon,
        "clean": report.clean,
    }
    if report.reference is not None:
        summary["reference"] = report.reference
    return summary


def cmd_realize(graph_path: str, curve_paths: Sequence[str], args) -> int:
    graph = parse_graph(_load(graph_path))
    layout = compute_layout(graph)
    ribbon = build_ribbon(graph, layout)
    params = _params(args)
    out = ensure_output_dirs(args.out or RealizerConfig().output_dir)

    if args.batch:
        curve_paths = sorted(str(p) for p in Path(args.batch).glob("*.crv.json"))
        logger.info(f"batch: {len(curve_paths)} curve(s) in {args.batch}")
    if not curve_paths:
        raise SchemaError("no curve documents given")

    results, code = [], 0
    for path in curve_paths:
        try:
            results.append(_realize_one(graph, ribbon, layout, path, params, out, args.svg))
        except LegrealError as e:
            if not args.batch:
                raise
            logger.warning(f"{path}: {type(e).__name__}: {e.message}")
            results.append({"curve": _stem(path), **e.to_dict()})
            code = max(code, e.exit_code)
    _emit({"ok": code == 0, "output": str(out), "results": results})
    return code


def cmd_compile(path: str, args) -> int:
    spec = parse_open_book(_load(path))
    surgery = compile_open_book(spec, _params(args))
    out = ensure_output_dirs(args.out or RealizerConfig().output_dir)
    stem = _stem(path)
    write_json(out / "fronts" / f"{stem}.srg.json", serialize_surgery_diagram(surgery))
    (out / "svg" / f"{stem}.svg").write_bytes(render_svg(surgery.diagram(), labels=surgery.labels(), title=stem))
    _emit(
        {
            "ok": True,
            "output": str(out),
            "epsilon": format_rational(surgery.epsilon),
            "components": [
                {
                    "name": c.name,
                    "group": c.group,
                    "coefficient": c.coefficient,
                    "level": format_rational(c.level),
                    "tb": c.tb,
                    "rot": c.rot,
                }
                for c in surgery.components
            ],
        }
    )
    return 0


def invariants_report(diagram: FrontDiagram) -> Dict[str, Any]:
    knots = []
    for k, strand in enumerate(diagram.strands):
        if not strand.closed:
            continue
        knots.append(
            {
                "strand": k,
                "tb": thurston_bennequin(strand),
                "rot": rotation_number(strand),
                "cusps": len(strand.cusps),
                "closure": format_rational(closure_integral(strand)),
                "embedded": check_embedded(strand),
            }
        )
    return {
        "components": component_count(diagram),
        "crossings": len(crossings(diagram)),
        "generic": check_generic(diagram).ok,
        "knots": knots,
    }


def cmd_invariants(path: str) -> int:
    data = _load(path)
    kind = detect_format(data)
    if kind is FrontDocument:
        diagram = parse_diagram(data)
    elif kind is SurgeryDocument:
        diagram = parse_surgery_diagram(data).diagram()
    else:
        raise SchemaError(f"{path}: invariants need a front or surgery document")
    _emit(invariants_report(diagram))
    return 0


def cmd_render(path: str, args) -> int:
    data = _load(path)
    kind = detect_format(data)
    labels = None
    style = RenderStyle()
    if kind is GraphDocument:
        graph = parse_graph(data)
        if args.ribbon:
            diagram = render_ribbon_front(graph)
            style = RenderStyle(shade_ribbon=True)
        else:
            diagram = graph_diagram(graph)
    elif kind is SurgeryDocument:
        surgery = parse_surgery_diagram(data)
        diagram, labels = surgery.diagram(), surgery.labels()
    elif kind is FrontDocument:
        diagram = parse_diagram(data)
    else:
        raise SchemaError(f"{path}: nothing to render in a {kind.__name__}")

    if args.out:
        target = Path(args.out)
    else:
        target = ensure_output_dirs(RealizerConfig().output_dir) / "svg" / f"{_stem(path)}.svg"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(render_svg(diagram, style, labels, title=_stem(path)))
    _emit({"ok": True, "svg": str(target)})
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="legreal", description="Legendrian realization of curves on ribbons")
    parser.add_argument("--quiet", action="store_true", help="only warnings on the console")
    parser.add_argument("--log-dir", default=None, help="log directory (default LEGREAL_LOG_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate graph, curve, open book and front documents")
    p.add_argument("paths", nargs="+")

    for name, help_text in (("realize", "realize curves on the ribbon of a graph"), ("compile", "open book to surgery")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--epsilon", type=_rational, default=None)
        p.add_argument("--mu", type=_rational, default=None)
        p.add_argument("--out", default=None, help="output directory")
        if name == "realize":
            p.add_argument("graph")
            p.add_argument("curves", nargs="*")
            p.add_argument("--start-pass", type=_start_pass, default=None, metavar="HANDLE:RANK")
            p.add_argument("--reverse", action="store_true")
            p.add_argument("--svg", action="store_true")
            p.add_argument("--batch", default=None, metavar="DIR", help="realize every *.crv.json in DIR")
        else:
            p.add_argument("openbook")

    p = sub.add_parser("invariants", help="tb, rot and closure of a front or surgery document")
    p.add_argument("path")

    p = sub.add_parser("render", help="render a front, graph or surgery document to SVG")
    p.add_argument("path")
    p.add_argument("--ribbon", action="store_true", help="draw the ribbon boundary of a graph")
    p.add_argument("--out", default=None, help="SVG file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging("legreal", log_dir=args.log_dir, quiet=args.quiet)
    try:
        if args.command == "validate":
            return cmd_validate(args.paths)
        if args.command == "realize":
            return cmd_realize(args.graph, args.curves, args)
        if args.command == "compile":
            return cmd_compile(args.openbook, args)
        if args.command == "invariants":
            return cmd_invariants(args.path)
        return cmd_render(args.path, args)
    except LegrealError as e:
        logger.warning(f"{type(e).__name__}: {e.message}")
        _emit({"ok": False, **e.to_dict()})
        return e.exit_code
    except Exception:
        logger.exception("unexpected failure")
        return 1


if __name__ == "__main__":
    sys.exit(main())
