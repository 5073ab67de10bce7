"""Straightedge-style constructions of the fixed point of a non-isometric
similarity, each recording the auxiliary points and lines it draws.

Every route here uses only the map's action on points and lines plus joins,
parallels and intersections; none of them solves the linear system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union

from . import geom_core as gc
from . import similarity as sim
from .errors import (
    ConstructionFailed,
    DegenerateProbe,
    DegenerateSelection,
    GeometryError,
    IdentityInput,
    IsDilatation,
    IsometryInput,
    LineThroughCenter,
    NotADilation,
    NotDirect,
    NotIndirect,
    ParallelImage,
    ParallelLines,
)
from .geom_core import DEFAULT_TOL, ORIGIN, Line, Point, Tolerances, Triangle
from .similarity import FixedPointResult, Method, Similarity

# Intersections whose angle sine falls below this are flagged as near-parallel.
NEAR_PARALLEL_SINE = 1e-6

# A constructed point is re-derived around itself while |alpha(C) - C| exceeds
# this fraction of (1 + |C|).
REFINE_RESIDUAL = 1e-12
MAX_REFINEMENTS = 6

CANDIDATE_DIRECTIONS_DEG = (0.0, 45.0, 90.0)

Element = Union[Point, Line]


@dataclass(frozen=True)
class TraceEntry:
    label: str
    element: Element
    step: int
    defined_by: tuple[str, ...] = ()


@dataclass
class ConstructionTrace:
    entries: list[TraceEntry] = field(default_factory=list)

    def add(self, label: str, element: Element, step: int, defined_by: tuple[str, ...] = ()) -> Element:
        self.entries.append(TraceEntry(label, element, step, defined_by))
        return element

    def __getitem__(self, label: str) -> Element:
        for e in reversed(self.entries):
            if e.label == label:
                return e.element
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(e.label == label for e in self.entries)

    def __iter__(self) -> Iterator[TraceEntry]:
        return iter(self.entries)

    def labels(self) -> list[str]:
        return [e.label for e in self.entries]

    def points(self) -> dict[str, Point]:
        return {e.label: e.element for e in self.entries if isinstance(e.element, Point)}

    def lines(self) -> dict[str, Line]:
        return {e.label: e.element for e in self.entries if isinstance(e.element, Line)}

    def incidence_ok(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        """Every point lies on the lines recorded as defining it."""
        for e in self.entries:
            if isinstance(e.element, Point):
                for name in e.defined_by:
                    if not gc.on_line(e.element, self[name], tol):
                        return False
        return True

    def to_dict(self) -> list[dict]:
        out = []
        for e in self.entries:
            if isinstance(e.element, Point):
                el = {"point": [e.element.x, e.element.y]}
            else:
                el = {"line": [e.element.a, e.element.b, e.element.c]}
            out.append({"label": e.label, "step": e.step, **el})
        return out


class _Meter:
    """Tracks the worst crossing angle met during one construction."""

    def __init__(self, tol: Tolerances):
        self.tol = tol
        self.conditioning = math.inf
        self.warnings: list[str] = []

    def meet(self, trace: ConstructionTrace, label: str, l1: str, l2: str, step: int) -> Point:
        a, b = trace[l1], trace[l2]
        s = gc.crossing_sine(a, b)
        self.conditioning = min(self.conditioning, s)
        if s < NEAR_PARALLEL_SINE:
            self.warnings.append(f"near-parallel intersection {label} = {l1} ∩ {l2} (sine {s:.3g})")
        return trace.add(label, gc.intersect(a, b, self.tol), step, (l1, l2))


@dataclass(frozen=True)
class WitnessTriangles:
    source: Triangle
    image: Triangle

    def check(self, alpha: Similarity, tol: Tolerances = DEFAULT_TOL) -> bool:
        src, img = self.source, self.image
        if not all(gc.coincident(alpha(p), q, tol) for p, q in zip(src, img)):
            return False
        if gc.orientation(*src, tol) == 0 or gc.orientation(*img, tol) == 0:
            return False
        P, Q, R = src
        P2, Q2, R2 = img
        return not (
            gc.is_parallel(gc.line_through(P, Q, tol), gc.line_through(P2, Q2, tol), tol)
            or gc.is_parallel(gc.line_through(Q, R, tol), gc.line_through(Q2, R2, tol), tol)
        )

    @classmethod
    def from_source(cls, alpha: Similarity, P: Point, Q: Point, R: Point) -> "WitnessTriangles":
        return cls(Triangle(P, Q, R), Triangle(alpha(P), alpha(Q), alpha(R)))


def require_non_dilatation(alpha: Similarity, tol: Tolerances) -> None:
    if sim.is_isometry(alpha, tol):
        raise IsometryInput(f"ratio {alpha.scale!r} is within {tol.eps_ratio} of 1")
    if sim.is_dilatation(alpha):
        raise IsDilatation("map is a dilation; use dilation_center")


def _candidate_lines(alpha: Similarity, tol: Tolerances) -> list[tuple[Line, Line]]:
    """Lines through the origin at the candidate directions whose image is not
    parallel, widest crossing angle first (ties keep the 0, 45, 90 order)."""
    found = []
    for deg in CANDIDATE_DIRECTIONS_DEG:
        q = gc.line_through_direction(ORIGIN, Point(*sim.cos_sin_deg(deg)))
        q2 = sim.apply_line(alpha, q, tol)
        if not gc.is_parallel(q, q2, tol):
            found.append((q, q2))
    found.sort(key=lambda pair: -gc.crossing_sine(*pair))
    return found


def witness_candidates(alpha: Similarity, tol: Tolerances = DEFAULT_TOL) -> Iterator[WitnessTriangles]:
    require_non_dilatation(alpha, tol)
    for q, q2 in _candidate_lines(alpha, tol):
        try:
            Q = gc.intersect(q, q2, tol)
            # spacing grows with |Q| so the joins stay well conditioned when Q is far out
            rho = max(1.0, Q.norm())
            w = WitnessTriangles.from_source(alpha, Q + q.direction * rho, Q, Q + q2.direction * rho)
            if w.check(alpha, tol):
                yield w
        except GeometryError:
            continue


def witness_triangles(alpha: Similarity, tol: Tolerances = DEFAULT_TOL) -> WitnessTriangles:
    for w in witness_candidates(alpha, tol):
        return w
    raise DegenerateSelection("no candidate direction gave admissible witness triangles")


def _half_pass(tr: ConstructionTrace, meter: _Meter, P: Point, Q: Point, R: Point,
               P2: Point, Q2: Point, R2: Point, names: dict[str, str],
               steps: tuple[int, int, int, int]) -> Line:
    """Steps 1-4: returns the line through the two constructed crossing points."""
    tol = meter.tol
    s1, s2, s3, s4 = steps
    m = tr.add(names["m"], gc.line_through(P, Q, tol), s1)
    tr.add(names["n"], gc.parallel_through(m, R), s1)
    m2 = tr.add(names["m'"], gc.line_through(P2, Q2, tol), s2)
    tr.add(names["n'"], gc.parallel_through(m2, R2), s2)
    D = meter.meet(tr, names["D"], names["m"], names["m'"], s3)
    E = meter.meet(tr, names["E"], names["n"], names["n'"], s3)
    return tr.add(names["a"], gc.line_through(D, E, tol), s4)


_FIRST = {"m": "m", "m'": "m'", "n": "n", "n'": "n'", "D": "D", "E": "E", "a": "a"}
_SECOND = {"m": "m2", "m'": "m2'", "n": "n2", "n'": "n2'", "D": "F", "E": "G", "a": "b"}


def fixed_point_algorithm1(alpha: Similarity, w: WitnessTriangles,
                           tol: Tolerances = DEFAULT_TOL) -> FixedPointResult:
    trace = ConstructionTrace()
    meter = _Meter(tol)
    P, Q, R = w.source
    P2, Q2, R2 = w.image
    for label, pt in zip(("P", "Q", "R", "P'", "Q'", "R'"), (P, Q, R, P2, Q2, R2)):
        trace.add(label, pt, 0)
    _half_pass(trace, meter, P, Q, R, P2, Q2, R2, _FIRST, (1, 2, 3, 4))
    # step 5 repeats 1-4 with P and R interchanged; lines carry a "2" suffix,
    # the crossings are F and G
    _half_pass(trace, meter, R, Q, P, R2, Q2, P2, _SECOND, (5, 5, 5, 5))
    C = meter.meet(trace, "C", "a", "b", 6)
    return FixedPointResult(C, Method.ALGORITHM1, trace, meter.conditioning, tuple(meter.warnings))


def dilation_center(delta: Similarity, probe_a: Point = ORIGIN, probe_b: Optional[Point] = None,
                    tol: Tolerances = DEFAULT_TOL) -> FixedPointResult:
    """Centre of a dilation from one or two probes and their images.

    ``probe_b`` overrides the default second probe, which sits one unit from
    ``probe_a`` perpendicular to line A A'.
    """
    if not sim.is_dilatation(delta):
        raise NotADilation("map does not send every line to a parallel")
    if sim.is_isometry(delta, tol) and sim.angles_close(delta.angle, 0.0):
        if Point(*delta.translation).norm() <= tol.eps_point:
            raise IdentityInput("identity fixes every point")
        raise NotADilation("a translation has no centre")

    trace = ConstructionTrace()
    meter = _Meter(tol)
    A = trace.add("A", probe_a, 1)
    A2 = trace.add("A'", delta(A), 1)
    if gc.coincident(A, A2, tol):
        trace.add("C", A, 1)
        return FixedPointResult(A, Method.DILATION, trace)
    if sim.is_isometry(delta, tol):
        C = trace.add("C", gc.midpoint(A, A2), 2)
        return FixedPointResult(C, Method.DILATION, trace)

    AA = trace.add("AA'", gc.line_through(A, A2, tol), 2)
    if probe_b is None:
        probe_b = A + AA.normal
    elif gc.on_line(probe_b, AA, tol):
        raise ParallelLines("probe B must lie off line AA'")
    B = trace.add("B", probe_b, 3)
    B2 = trace.add("B'", delta(B), 3)
    if gc.coincident(B, B2, tol):
        trace.add("C", B, 3)
        return FixedPointResult(B, Method.DILATION, trace)
    trace.add("BB'", gc.line_through(B, B2, tol), 4)
    C = meter.meet(trace, "C", "AA'", "BB'", 4)
    return FixedPointResult(C, Method.DILATION, trace, meter.conditioning, tuple(meter.warnings))


def recentered(alpha: Similarity, o: Point, h: float = 1.0) -> Similarity:
    """``alpha`` seen from a frame with origin ``o`` and unit length ``h``:
    x -> (alpha(o + h x) - o) / h. Its fixed point is (C - o) / h."""
    if not h > 0:
        raise ValueError("frame unit must be positive")
    t = (alpha(o) - o) * (1.0 / h)
    return Similarity(alpha.kind, alpha.scale, alpha.angle, (t.x, t.y))


def _shift_trace(trace: Optional[ConstructionTrace], o: Point,
                 h: float = 1.0) -> Optional[ConstructionTrace]:
    if trace is None:
        return None
    out = ConstructionTrace()
    for e in trace:
        el = e.element
        if isinstance(el, Point):
            el = o + el * h
        else:
            el = Line(el.a, el.b, h * el.c + el.a * o.x + el.b * o.y)
        out.add(e.label, el, e.step, e.defined_by)
    return out


def _needs_refinement(alpha: Similarity, res: FixedPointResult) -> bool:
    return res.residual(alpha) > REFINE_RESIDUAL * (1.0 + res.point.norm())


def refine(alpha: Similarity, res: FixedPointResult,
           construct: Callable[[Similarity], FixedPointResult]) -> FixedPointResult:
    """Repeat a construction with its witness lines through the current estimate.

    The repeat is carried out in coordinates centred on the estimate and scaled
    by its residual, so neither the rounding of far-away coordinates nor the
    absolute coincidence floor enters. The returned trace is
    mapped back to the original frame. Stops once the residual |alpha(C) - C|
    is at rounding level or stops improving.
    """
    best = res
    for k in range(MAX_REFINEMENTS):
        if not _needs_refinement(alpha, best):
            break
        o = best.point
        h = best.residual(alpha)
        try:
            local = construct(recentered(alpha, o, h))
        except GeometryError:
            break
        cand = FixedPointResult(o + local.point * h, local.method, _shift_trace(local.trace, o, h),
                                local.conditioning, local.warnings, k + 1)
        if cand.residual(alpha) >= best.residual(alpha):
            break
        best = cand
    return best


def betweenness_case(trace: ConstructionTrace, tol: Tolerances = DEFAULT_TOL) -> str:
    """Which ordering of A, B and the crossing point C a parallels construction produced."""
    pts = trace.points()
    if not all(k in pts for k in ("A", "B", "C")) or "AB" not in trace:
        return "early_exit"
    A, B, C = pts["A"], pts["B"], pts["C"]
    try:
        if gc.is_between(A, C, B, tol):
            return "case1"
        if gc.is_between(A, B, C, tol):
            return "case2"
        if gc.is_between(C, A, B, tol):
            return "case3"
    except GeometryError:
        pass
    return "degenerate"


def fixed_point_via_theorem(alpha: Similarity, tol: Tolerances = DEFAULT_TOL,
                            refined: bool = True) -> FixedPointResult:
    res = _via_theorem_once(alpha, tol)
    if refined:
        res = refine(alpha, res, lambda a: _via_theorem_once(a, tol))
    return res


def _via_theorem_once(alpha: Similarity, tol: Tolerances) -> FixedPointResult:
    require_non_dilatation(alpha, tol)
    last: Optional[GeometryError] = None
    for l, l2 in _candidate_lines(alpha, tol):
        trace = ConstructionTrace()
        meter = _Meter(tol)
        try:
            return _theorem_from_line(alpha, l, l2, trace, meter, tol)
        except GeometryError as exc:
            last = exc
    raise ConstructionFailed(f"parallels construction failed for every candidate line: {last}")


def _theorem_from_line(alpha, l, l2, trace, meter, tol):
    trace.add("l", l, 1)
    trace.add("l'", l2, 1)
    A = meter.meet(trace, "A", "l", "l'", 2)
    A2 = trace.add("A'", alpha(A), 2)
    if gc.coincident(A, A2, tol):
        trace.add("C", A, 2)
        return FixedPointResult(A, Method.THEOREM, trace, meter.conditioning, tuple(meter.warnings))
    m = trace.add("m", gc.parallel_through(l, A2), 3)
    trace.add("m'", sim.apply_line(alpha, m, tol), 3)
    B = meter.meet(trace, "B", "m", "m'", 4)
    B2 = trace.add("B'", alpha(B), 4)
    if gc.coincident(B, B2, tol):
        trace.add("C", B, 4)
        return FixedPointResult(B, Method.THEOREM, trace, meter.conditioning, tuple(meter.warnings))
    trace.add("AB", gc.line_through(A, B, tol), 5)
    trace.add("A'B'", gc.line_through(A2, B2, tol), 5)
    C = meter.meet(trace, "C", "AB", "A'B'", 6)
    return FixedPointResult(C, Method.THEOREM, trace, meter.conditioning, tuple(meter.warnings))


def fixed_point(alpha: Similarity, witness: Optional[WitnessTriangles] = None,
                tol: Tolerances = DEFAULT_TOL) -> FixedPointResult:
    """Construct the fixed point of a non-isometric similarity.

    Dilations go through ``dilation_center``. Otherwise the two-pass construction is tried on
    ``witness`` (if given and admissible) and then on up to three generated
    witnesses; a near-parallel result is kept only as a fallback. The parallels
    construction from the existence proof is the last resort.
    """
    if sim.is_isometry(alpha, tol):
        raise IsometryInput(f"ratio {alpha.scale!r} is within {tol.eps_ratio} of 1")
    if sim.is_dilatation(alpha):
        return dilation_center(alpha, tol=tol)

    notes: list[str] = []
    fallback: Optional[FixedPointResult] = None

    def consider(res: FixedPointResult) -> bool:
        nonlocal fallback
        if res.conditioning >= NEAR_PARALLEL_SINE:
            return True
        notes.append(f"{res.method.value}: conditioning {res.conditioning:.3g}")
        if fallback is None or res.conditioning > fallback.conditioning:
            fallback = res
        return False

    witnesses: list[WitnessTriangles] = []
    if witness is not None:
        if witness.check(alpha, tol):
            witnesses.append(witness)
        else:
            notes.append("supplied witness rejected")
    candidates = witness_candidates(alpha, tol)
    for _ in range(3):
        w = next(candidates, None)
        if w is None:
            break
        witnesses.append(w)

    def local_algorithm1(a: Similarity) -> FixedPointResult:
        return fixed_point_algorithm1(a, witness_triangles(a, tol), tol)

    for w in witnesses:
        try:
            res = fixed_point_algorithm1(alpha, w, tol)
        except GeometryError as exc:
            notes.append(f"algorithm1: {exc}")
            continue
        res = refine(alpha, res, local_algorithm1)
        if consider(res):
            return res

    try:
        res = fixed_point_via_theorem(alpha, tol)
        if consider(res):
            return res
    except GeometryError as exc:
        notes.append(f"theorem_parallels: {exc}")

    if fallback is not None:
        return fallback
    raise ConstructionFailed("no construction route succeeded", notes)


def collinearity_witness(alpha: Similarity, c: Point, l: Line, m: Optional[Line] = None,
                         tol: Tolerances = DEFAULT_TOL) -> tuple[Point, Point, bool]:
    """Crossings ``D = l ∩ α(l)`` and ``E = m ∩ α(m)`` and whether C, D, E line up.

    Without an explicit ``m`` the parallel is placed on the far side of ``l``
    from ``c``, at distance max(1, dist(c, l)).
    """
    dist = l.distance_to(c)
    if dist <= tol.eps_point * max(1.0, c.norm()):
        raise LineThroughCenter("l passes through the fixed point")
    l2 = sim.apply_line(alpha, l, tol)
    if gc.is_parallel(l, l2, tol):
        raise ParallelImage("l is parallel to its image")
    if m is None:
        away = -1.0 if l.residual(c) > 0 else 1.0
        m = Line(l.a, l.b, l.c + away * max(1.0, dist))
    elif not gc.is_parallel(l, m, tol) or m.distance_to(c) <= tol.eps_point * max(1.0, c.norm()):
        raise LineThroughCenter("m must be a parallel to l off the fixed point")
    D = gc.intersect(l, l2, tol)
    E = gc.intersect(m, sim.apply_line(alpha, m, tol), tol)
    return D, E, gc.collinear(c, D, E, tol)


def reflection_axis(alpha: Similarity, c: Point, p: Point, tol: Tolerances = DEFAULT_TOL) -> Line:
    """Axis of a stretch reflection: the bisector of angle P C P'."""
    if alpha.direct:
        raise NotIndirect("axis is defined for indirect similarities only")
    if gc.coincident(p, c, tol):
        raise DegenerateProbe("probe coincides with the fixed point")
    bis = gc.angle_bisector(c, p, alpha(p), tol)
    xi = sim.stretch(c, alpha.scale)
    samples = (c + Point(1.0, 0.0), c + Point(0.0, 1.0), p)
    scale = max(1.0, c.norm())
    for axis in (bis, gc.line_through_direction(c, bis.normal)):
        beta = sim.compose(sim.reflection(axis), xi)
        if all(gc.distance(beta(s), alpha(s)) <= 1e-8 * scale * max(1.0, alpha.scale) for s in samples):
            return axis
    raise ConstructionFailed("neither bisector recomposes the map")


def rotation_angle_at(alpha: Similarity, c: Point, p: Point, tol: Tolerances = DEFAULT_TOL) -> float:
    """Counterclockwise angle in degrees from ray c->p to ray c->alpha(p)."""
    if not alpha.direct:
        raise NotDirect("rotation angle is defined for direct similarities only")
    if gc.coincident(p, c, tol):
        raise DegenerateProbe("probe coincides with the fixed point")
    u, v = p - c, alpha(p) - c
    return sim.normalize_angle(math.degrees(math.atan2(u.cross(v), u.dot(v))))
