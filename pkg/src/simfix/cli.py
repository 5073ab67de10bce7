"""Command-line front end.

Exit codes: 0 success, 1 fuzz run with failures, 2 unreadable or malformed
input, 3 degenerate or non-similar correspondence, 4 no unique fixed point
(isometry or identity input), 5 construction failed or method not
applicable, 6 output could not be written.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import construction as cons
from . import geom_core as gc
from . import harness
from . import similarity as sim
from .construction import ConstructionTrace
from .errors import (
    GeometryError,
    IdentityInput,
    IsometryInput,
    NoUniqueFixedPoint,
    NotIndirect,
)
from .figure import render_svg
from .geom_core import Line, Point, Triangle
from .scene import Scene, SceneError, load_scene, similarity_doc

EXIT_OK = 0
EXIT_FUZZ_FAILED = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_NO_FIXED_POINT = 4
EXIT_CONSTRUCTION = 5
EXIT_WRITE = 6

METHODS = ("auto", "algorithm1", "theorem", "dilation", "algebraic")
FIGURES = ("construction", "dilation", "axis")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- formatting -------------------------------------------------------------------


def fmt_num(x: float) -> str:
    """Shortest string that reads back as the same double; integral values drop '.0'."""
    x = float(x)
    if x == 0.0:
        return "0"
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


def fmt_point(p: Point) -> str:
    return f"({fmt_num(p.x)},{fmt_num(p.y)})"


def fmt_line(l: Line) -> str:
    return f"line({fmt_num(l.a)},{fmt_num(l.b)},{fmt_num(l.c)})"


def _jnum(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def _jpoint(p: Point) -> list[float]:
    return [p.x, p.y]


def _jline(l: Line) -> dict:
    return {"a": l.a, "b": l.b, "c": l.c}


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)


def class_summary(cls: sim.SimilarityClass) -> tuple[str, dict]:
    """Human one-liner and structured form of a classification verdict."""
    parts = [cls.tag]
    doc: dict = {"tag": cls.tag, "is_dilatation": bool(cls.is_dilatation)}
    for name in getattr(cls, "__dataclass_fields__", {}):
        v = getattr(cls, name)
        key = "angle_deg" if name == "angle" else name
        if isinstance(v, Point):
            parts.append(f"{name}={fmt_point(v)}")
            doc[key] = _jpoint(v)
        elif isinstance(v, Line):
            parts.append(f"{name}=({fmt_num(v.a)},{fmt_num(v.b)},{fmt_num(v.c)})")
            doc[key] = _jline(v)
        else:
            parts.append(f"{name}={fmt_num(v)}")
            doc[key] = v
    return " ".join(parts), doc


def trace_lines(trace: ConstructionTrace) -> list[str]:
    out = []
    for e in trace:
        el = fmt_point(e.element) if isinstance(e.element, Point) else fmt_line(e.element)
        out.append(f"step {e.step}: {e.label} = {el}")
    return out


def trace_doc(trace: Optional[ConstructionTrace]) -> list[dict]:
    return trace.to_dict() if trace is not None else []


# -- commands ---------------------------------------------------------------------


def _scene(path: str) -> Scene:
    try:
        return load_scene(path)
    except SceneError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    except GeometryError as exc:
        raise CliError(EXIT_DEGENERATE, f"{type(exc).__name__}: {exc}") from exc


def _geometry_exit(exc: GeometryError) -> CliError:
    code = EXIT_NO_FIXED_POINT if isinstance(exc, (IsometryInput, NoUniqueFixedPoint, IdentityInput)) \
        else EXIT_CONSTRUCTION
    return CliError(code, f"{type(exc).__name__}: {exc}")


def cmd_classify(args) -> int:
    scene = _scene(args.scene)
    try:
        cls = sim.classify(scene.alpha, scene.tol)
    except GeometryError as exc:
        raise _geometry_exit(exc) from exc
    human, doc = class_summary(cls)
    if args.json:
        doc["scene"] = {"similarity": similarity_doc(scene.alpha)}
        print(_dumps(doc))
    else:
        print(human)
    return EXIT_OK


def solve(scene: Scene, method: str, probe: Optional[Point] = None) -> sim.FixedPointResult:
    """Fixed point by the named method; ``probe`` overrides the dilation's second probe."""
    alpha, tol = scene.alpha, scene.tol
    if method == "algebraic":
        return sim.fixed_point_algebraic(alpha, tol)
    if method == "auto":
        return cons.fixed_point(alpha, scene.witness, tol)
    if method == "dilation":
        return cons.dilation_center(alpha, probe_b=probe, tol=tol)
    if method == "theorem":
        return cons.fixed_point_via_theorem(alpha, tol)
    # algorithm1: the scene's triangles when admissible, else the generated witness
    cons.require_non_dilatation(alpha, tol)
    w = scene.witness
    if w is None or not w.check(alpha, tol):
        w = cons.witness_triangles(alpha, tol)
    res = cons.fixed_point_algorithm1(alpha, w, tol)
    return cons.refine(alpha, res, lambda a: cons.fixed_point_algorithm1(a, cons.witness_triangles(a, tol), tol))


def cmd_fixpoint(args) -> int:
    scene = _scene(args.scene)
    try:
        res = solve(scene, args.method, Point(*args.probe) if args.probe else None)
    except GeometryError as exc:
        raise _geometry_exit(exc) from exc
    residual = res.residual(scene.alpha)
    if args.json:
        doc = {
            "C": _jpoint(res.point),
            "method": res.method.value,
            "conditioning": _jnum(res.conditioning),
            "refinements": res.refinements,
            "residual": residual,
            "warnings": list(res.warnings),
        }
        if args.trace:
            doc["trace"] = trace_doc(res.trace)
        print(_dumps(doc))
        return EXIT_OK
    print(f"C={fmt_point(res.point)}")
    print(f"method={res.method.value}")
    print(f"conditioning={fmt_num(res.conditioning)}")
    print(f"residual={fmt_num(residual)}")
    if res.refinements:
        print(f"refinements={res.refinements}")
    for w in res.warnings:
        print(f"warning: {w}")
    if args.trace and res.trace is not None:
        for line in trace_lines(res.trace):
            print(line)
    return EXIT_OK


def _default_probe(scene: Scene, c: Point) -> Point:
    tri = scene.source_triangle
    if tri is not None and not gc.coincident(tri.p1, c, scene.tol):
        return tri.p1
    r = max(1.0, 0.25 * c.norm())
    return c + Point(r, r)


def _axis_trace(scene: Scene, c: Point, probe: Optional[Point]) -> ConstructionTrace:
    alpha, tol = scene.alpha, scene.tol
    p = probe if probe is not None else _default_probe(scene, c)
    tr = ConstructionTrace()
    tr.add("C", c, 0)
    tr.add("P", p, 1)
    p2 = tr.add("P'", alpha(p), 1)
    tr.add("CP", gc.line_through(c, p, tol), 2)
    tr.add("CP'", gc.line_through(c, p2, tol), 2)
    tr.add("axis", cons.reflection_axis(alpha, c, p, tol), 3)
    return tr


def build_figure(scene: Scene, which: str, probe: Optional[Point] = None) -> tuple[ConstructionTrace, list]:
    """Trace and triangles to draw for the chosen figure."""
    alpha, tol = scene.alpha, scene.tol
    triangles: list = []
    if which == "dilation":
        res = cons.dilation_center(alpha, probe_b=probe, tol=tol)
        return res.trace, triangles
    if which == "axis":
        if alpha.direct:
            raise NotIndirect("axis figure needs an indirect similarity")
        c = cons.fixed_point(alpha, scene.witness, tol).point
        return _axis_trace(scene, c, probe), triangles

    res = cons.fixed_point(alpha, scene.witness, tol)
    trace = ConstructionTrace(list(res.trace.entries))
    if all(k in trace for k in ("P", "Q", "R", "P'", "Q'", "R'")):
        pts = trace.points()
        triangles = [Triangle(pts["P"], pts["Q"], pts["R"]), Triangle(pts["P'"], pts["Q'"], pts["R'"])]
    elif scene.correspondence is not None:
        triangles = list(scene.correspondence)
    if not alpha.direct:
        trace.add("axis", cons.reflection_axis(alpha, res.point, _default_probe(scene, res.point), tol), 7)
    return trace, triangles


def cmd_figure(args) -> int:
    scene = _scene(args.scene)
    probe = Point(*args.probe) if args.probe else None
    try:
        trace, triangles = build_figure(scene, args.which, probe)
    except GeometryError as exc:
        raise _geometry_exit(exc) from exc
    svg = render_svg(trace, triangles, title=f"{args.which} figure")
    try:
        Path(args.out).write_text(svg, encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_WRITE, f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {args.out} ({len(trace.labels())} labelled elements)")
    return EXIT_OK


def fuzz_config(args) -> harness.GenConfig:
    d: dict = {}
    if args.config:
        try:
            d = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(EXIT_PARSE, f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(d, dict):
            raise CliError(EXIT_PARSE, "config must be a JSON object")
    if args.seed is not None:
        d["seed"] = args.seed
    if args.cases is not None:
        d["cases"] = args.cases
    try:
        return harness.GenConfig.from_dict(d)
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"invalid config: {exc}") from exc


def fuzz_report(config: harness.GenConfig) -> tuple[str, bool]:
    eq = harness.run_equivalence(config)
    inv = harness.run_invariants(config)
    doc = {"config": config.to_dict(), "equivalence": eq.to_dict(), "invariants": inv.to_dict()}
    return _dumps(doc) + "\n", eq.failed == 0 and inv.failed == 0


def cmd_fuzz(args) -> int:
    config = fuzz_config(args)
    text, ok = fuzz_report(config)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_WRITE, f"cannot write {args.out}: {exc}") from exc
        print(f"{'ok' if ok else 'FAILED'}: report written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FUZZ_FAILED


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simfix", description="Fixed points of plane similarities by construction.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="name the similarity and its parameters")
    c.add_argument("scene")
    c.add_argument("--json", action="store_true", help="structured output")
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("fixpoint", help="construct the fixed point")
    f.add_argument("scene")
    f.add_argument("--method", choices=METHODS, default="auto")
    f.add_argument("--trace", action="store_true", help="list every constructed element")
    f.add_argument("--json", action="store_true", help="structured output")
    f.add_argument("--probe", type=float, nargs=2, metavar=("X", "Y"), help="second probe B for --method dilation")
    f.set_defaults(func=cmd_fixpoint)

    g = sub.add_parser("figure", help="draw a construction as SVG")
    g.add_argument("scene")
    g.add_argument("--out", required=True)
    g.add_argument("--which", choices=FIGURES, default="construction")
    g.add_argument("--probe", type=float, nargs=2, metavar=("X", "Y"), help="probe P for the axis figure, or B for the dilation figure")
    g.set_defaults(func=cmd_figure)

    z = sub.add_parser("fuzz", help="seeded equivalence and invariant runs")
    z.add_argument("--seed", type=int)
    z.add_argument("--cases", type=int)
    z.add_argument("--config", help="JSON file with generator settings")
    z.add_argument("--out", help="report path (default: stdout)")
    z.set_defaults(func=cmd_fuzz)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"simfix: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
