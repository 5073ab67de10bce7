"""Seeded random similarities and the bulk equivalence / invariant runs.

Random numbers come from MT19937 (``random.Random``). Case ``i`` of a run
with seed ``s`` draws from a generator seeded with the integer
``(s << 72) | (i << 8) | stream``; integer seeding and ``random()`` are
stable across platforms and Python versions, so reports reproduce
byte for byte.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Optional

from . import construction as cons
from . import geom_core as gc
from . import similarity as sim
from .errors import GeometryError
from .geom_core import DEFAULT_TOL, Line, Point, Tolerances
from .similarity import Kind, Similarity

REL_TOL = 1e-8
MIN_CONDITIONING = cons.NEAR_PARALLEL_SINE

_STREAM_SIMILARITY = 0
_STREAM_INVARIANTS = 1


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    cases: int = 1000
    scale_range: tuple[float, float] = (0.1, 10.0)
    exclude_isometry_band: float = 1e-3
    translation_range: float = 100.0
    kind_mix: float = 0.5
    dilation_mix: float = 0.2

    def __post_init__(self):
        lo, hi = self.scale_range
        object.__setattr__(self, "scale_range", (float(lo), float(hi)))
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.cases < 0:
            raise ValueError("cases must be non-negative")
        if not (0 < lo < hi):
            raise ValueError("scale_range must satisfy 0 < lo < hi")
        band = self.exclude_isometry_band
        if not (0 <= band < min(abs(1 - lo), abs(hi - 1))):
            raise ValueError("isometry band must be narrower than the scale range on both sides of 1")
        if not self.translation_range >= 0:
            raise ValueError("translation_range must be non-negative")
        for name in ("kind_mix", "dilation_mix"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")

    @classmethod
    def from_dict(cls, d: dict) -> "GenConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        if "scale_range" in d:
            d["scale_range"] = tuple(d["scale_range"])
        return cls(**d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scale_range"] = list(self.scale_range)
        return d


def case_rng(config: GenConfig, index: int, stream: int = _STREAM_SIMILARITY) -> random.Random:
    return random.Random((config.seed << 72) | (index << 8) | stream)


def _draw_scale(rng: random.Random, config: GenConfig) -> float:
    lo, hi = config.scale_range
    llo, lhi = math.log(lo), math.log(hi)
    while True:
        s = math.exp(llo + (lhi - llo) * rng.random())
        if abs(s - 1.0) > config.exclude_isometry_band:
            return s


def random_similarity(rng: random.Random, config: GenConfig) -> Similarity:
    indirect = rng.random() < config.kind_mix
    scale = _draw_scale(rng, config)
    if not indirect and rng.random() < config.dilation_mix:
        angle = 180.0 if rng.random() < 0.5 else 0.0
    else:
        angle = 360.0 * rng.random()
    T = config.translation_range
    t = (rng.uniform(-T, T), rng.uniform(-T, T))
    return Similarity(Kind.INDIRECT if indirect else Kind.DIRECT, scale, angle, t)


def gen_similarity(config: GenConfig, index: int) -> Similarity:
    return random_similarity(case_rng(config, index), config)


# -- reports --------------------------------------------------------------------


def _strict(obj):
    """Copy of ``obj`` with non-finite floats replaced by None, so the JSON is strict.

    An infinite conditioning (no intersection was needed) is reported as null.
    """
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _strict(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_strict(v) for v in obj]
    return obj


def _bucket(err: float) -> str:
    if err == 0.0:
        return "0"
    if not math.isfinite(err):
        return "inf"
    return f"1e{max(-17, math.floor(math.log10(err)))}"


def _fmt_sim(alpha: Similarity) -> dict:
    return {
        "kind": alpha.kind.value,
        "scale": alpha.scale,
        "angle_deg": alpha.angle,
        "translation": list(alpha.translation),
    }


@dataclass
class Report:
    total: int = 0
    passed: int = 0
    failed: int = 0
    max_abs_error: float = 0.0
    max_rel_error: float = 0.0
    min_conditioning: Optional[float] = None
    worst_case: Optional[dict] = None
    histograms: dict[str, dict[str, int]] = field(default_factory=dict)
    methods: dict[str, int] = field(default_factory=dict)
    refined: int = 0
    betweenness: dict[str, int] = field(default_factory=dict)
    three_way: dict[str, int] = field(default_factory=lambda: {"checked": 0, "agreed": 0})
    invariants: dict[str, dict[str, int]] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    MAX_FAILURES_LISTED = 20

    def to_dict(self) -> dict:
        return _strict({f.name: getattr(self, f.name) for f in fields(self)})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False)

    def _count(self, table: dict, key: str) -> None:
        table[key] = table.get(key, 0) + 1

    def _fail(self, record: dict) -> None:
        self.failed += 1
        if len(self.failures) < self.MAX_FAILURES_LISTED:
            self.failures.append(record)


# -- equivalence ----------------------------------------------------------------


def _rel(p: Point, q: Point, ref: Point) -> tuple[float, float]:
    d = gc.distance(p, q)
    return d, d / (1.0 + ref.norm())


def run_equivalence(config: GenConfig, tol: Tolerances = DEFAULT_TOL) -> Report:
    """Construction vs. linear-algebra fixed point on ``config.cases`` maps."""
    rep = Report()
    worst_key = -1.0
    for i in range(config.cases):
        alpha = gen_similarity(config, i)
        rep.total += 1
        record = {"index": i, "similarity": _fmt_sim(alpha)}
        ok = True
        try:
            oracle = sim.fixed_point_algebraic(alpha, tol).point
            res = cons.fixed_point(alpha, tol=tol)
        except GeometryError as exc:
            record["error"] = f"{type(exc).__name__}: {exc}"
            rep._fail(record)
            if worst_key < math.inf:
                worst_key = math.inf
                rep.worst_case = record
            continue

        abs_err, rel_err = _rel(res.point, oracle, oracle)
        rep._count(rep.methods, res.method.value)
        rep.refined += res.refinements > 0
        rep.histograms.setdefault(res.method.value, {})
        rep._count(rep.histograms[res.method.value], _bucket(rel_err))
        if rep.min_conditioning is None or res.conditioning < rep.min_conditioning:
            rep.min_conditioning = res.conditioning
        record.update(
            oracle=[oracle.x, oracle.y],
            construction=[res.point.x, res.point.y],
            method=res.method.value,
            conditioning=res.conditioning,
            rel_error=rel_err,
            trace=res.trace.to_dict() if res.trace else [],
        )
        ok = rel_err <= REL_TOL and res.conditioning > MIN_CONDITIONING
        case_rel = rel_err

        if not sim.is_dilatation(alpha):
            rep.three_way["checked"] += 1
            try:
                first = cons.fixed_point_via_theorem(alpha, tol, refined=False)
                # proof case is read off the unrefined pass, whose A and B are the proof's
                case = cons.betweenness_case(first.trace, tol)
                thm = cons.refine(alpha, first, lambda a: cons.fixed_point_via_theorem(a, tol, refined=False))
            except GeometryError as exc:
                record["theorem_error"] = f"{type(exc).__name__}: {exc}"
                ok = False
                case_rel = math.inf
            else:
                rep._count(rep.betweenness, case)
                _, t_rel = _rel(thm.point, oracle, oracle)
                _, pair_rel = _rel(thm.point, res.point, oracle)
                rep.histograms.setdefault("theorem_parallels", {})
                rep._count(rep.histograms["theorem_parallels"], _bucket(t_rel))
                record["theorem"] = [thm.point.x, thm.point.y]
                agreed = max(t_rel, pair_rel) <= REL_TOL
                rep.three_way["agreed"] += agreed
                ok = ok and agreed
                case_rel = max(case_rel, t_rel)

        rep.max_abs_error = max(rep.max_abs_error, abs_err)
        rep.max_rel_error = max(rep.max_rel_error, rel_err)
        if ok:
            rep.passed += 1
        else:
            rep._fail(record)
        if case_rel > worst_key:
            worst_key = case_rel
            rep.worst_case = record
    return rep


# -- invariants -----------------------------------------------------------------


def _close(u: Point, v: Point, rel: float, *refs: Point) -> bool:
    scale = max([1.0, u.norm(), v.norm()] + [r.norm() for r in refs])
    return gc.distance(u, v) <= rel * scale


def _rand_point(rng: random.Random, span: float = 10.0) -> Point:
    return Point(rng.uniform(-span, span), rng.uniform(-span, span))


def _rand_line(rng: random.Random, span: float = 20.0) -> Line:
    phi = rng.uniform(0.0, 2 * math.pi)
    return Line(math.cos(phi), math.sin(phi), rng.uniform(-span, span))


def _samples(rng: random.Random, n: int = 10) -> list[Point]:
    return [_rand_point(rng) for _ in range(n)]


def _pointwise(f: Similarity, g: Similarity, pts, rel: float = 1e-9) -> bool:
    return all(_close(f(p), g(p), rel, p) for p in pts)


def _inv_ratio_law(alpha, rng, ctx):
    P = _rand_point(rng)
    Q = _rand_point(rng)
    while gc.distance(P, Q) < 1.0:
        Q = _rand_point(rng)
    d2 = gc.distance(alpha(P), alpha(Q))
    expected = sim.ratio(alpha) * gc.distance(P, Q)
    return abs(d2 - expected) <= 1e-9 * expected


def _inv_betweenness(alpha, rng, ctx):
    P = _rand_point(rng)
    Q = _rand_point(rng)
    while gc.distance(P, Q) < 1.0:
        Q = _rand_point(rng)
    C = P + (Q - P) * rng.uniform(0.1, 0.9)
    tol = ctx["tol"]
    if not gc.is_between(P, C, Q, tol):
        return True  # premise false; nothing to check
    return gc.is_between(alpha(P), alpha(C), alpha(Q), tol)


def _inv_collineation(alpha, rng, ctx):
    l = _rand_line(rng)
    P = l.foot() + l.direction * rng.uniform(-20.0, 20.0)
    return gc.on_line(alpha(P), sim.apply_line(alpha, l, ctx["tol"]), ctx["tol"])


def _inv_dilatation(alpha, rng, ctx):
    tol = ctx["tol"]
    all_par = all(gc.is_parallel(l, sim.apply_line(alpha, l, tol), tol) for l in (_rand_line(rng) for _ in range(20)))
    return all_par == sim.is_dilatation(alpha)


def _inv_oracle(alpha, rng, ctx):
    return ctx["oracle"].is_fixed(alpha, ctx["tol"])


def _inv_classification(alpha, rng, ctx):
    tol = ctx["tol"]
    cls = sim.classify(alpha, tol)
    rebuilt = cls.build()
    return sim.approx_equal(rebuilt, alpha, 1e-8) and sim.classes_close(sim.classify(rebuilt, tol), cls, tol)


def _inv_associativity(alpha, rng, ctx):
    cfg = ctx["config"]
    beta = random_similarity(rng, cfg)
    gamma = random_similarity(rng, cfg)
    left = sim.compose(sim.compose(alpha, beta), gamma)
    right = sim.compose(alpha, sim.compose(beta, gamma))
    return _pointwise(left, right, _samples(rng))


def _inv_inverse(alpha, rng, ctx):
    return isinstance(sim.classify(sim.compose(alpha, sim.inverse(alpha)), ctx["tol"]), sim.Identity)


def _inv_fixed_point(alpha, rng, ctx):
    return ctx["construction"].is_fixed(alpha, ctx["tol"])


def _inv_trace_incidence(alpha, rng, ctx):
    tr = ctx["construction"].trace
    return tr is None or tr.incidence_ok(ctx["tol"])


def _inv_cde_collinearity(alpha, rng, ctx):
    if sim.is_dilatation(alpha):
        return None
    C, tol = ctx["oracle"].point, ctx["tol"]
    for _ in range(20):
        phi = rng.uniform(0.0, 2 * math.pi)
        n = Point(math.cos(phi), math.sin(phi))
        off = rng.uniform(0.5, 20.0) * (1 if rng.random() < 0.5 else -1)
        l = Line(n.x, n.y, n.dot(C) + off)
        if gc.crossing_sine(l, sim.apply_line(alpha, l, tol)) >= MIN_CONDITIONING:
            break
    else:
        return None
    return cons.collinearity_witness(alpha, C, l, tol=tol)[2]


def _inv_commute_stretch(alpha, rng, ctx):
    C = ctx["oracle"].point
    s = math.exp(rng.uniform(math.log(0.2), math.log(5.0)))
    xi = sim.stretch(C, s)
    return _pointwise(sim.compose(xi, alpha), sim.compose(alpha, xi), _samples(rng))


def _inv_commute_halfturn(alpha, rng, ctx):
    phi = sim.halfturn(ctx["oracle"].point)
    return _pointwise(sim.compose(phi, alpha), sim.compose(alpha, phi), _samples(rng))


def _inv_axis(alpha, rng, ctx):
    if alpha.direct:
        return None
    C, tol = ctx["oracle"].point, ctx["tol"]
    p = C + _rand_point(rng)
    while gc.distance(p, C) < 0.5:
        p = C + _rand_point(rng)
    axis = cons.reflection_axis(alpha, C, p, tol)
    recomposed = sim.compose(sim.reflection(axis), sim.stretch(C, alpha.scale))
    return _pointwise(recomposed, alpha, _samples(rng))


def _inv_rotation_angle(alpha, rng, ctx):
    if not alpha.direct:
        return None
    C, tol = ctx["oracle"].point, ctx["tol"]
    phi = rng.uniform(0.0, 2 * math.pi)
    p = C + Point(math.cos(phi), math.sin(phi)) * rng.uniform(1.0, 10.0)
    return sim.angles_close(cons.rotation_angle_at(alpha, C, p, tol), alpha.angle)


def _inv_decompose(alpha, rng, ctx):
    xi, iso = sim.decompose(alpha, ctx["tol"])
    return _pointwise(sim.compose(iso, xi), alpha, _samples(rng))


INVARIANTS: dict[str, Callable] = {
    "ratio_law": _inv_ratio_law,
    "betweenness": _inv_betweenness,
    "collineation": _inv_collineation,
    "dilatation_characterization": _inv_dilatation,
    "oracle_soundness": _inv_oracle,
    "classification_round_trip": _inv_classification,
    "group_associativity": _inv_associativity,
    "inverse_identity": _inv_inverse,
    "fixed_point_property": _inv_fixed_point,
    "trace_incidence": _inv_trace_incidence,
    "cde_collinearity": _inv_cde_collinearity,
    "commutation_stretch": _inv_commute_stretch,
    "commutation_halfturn": _inv_commute_halfturn,
    "axis_recomposition": _inv_axis,
    "rotation_angle_readoff": _inv_rotation_angle,
    "decomposition": _inv_decompose,
}


def run_invariants(config: GenConfig, tol: Tolerances = DEFAULT_TOL,
                   mutate: Optional[Callable[[Similarity], Similarity]] = None) -> Report:
    """Check every fuzzable law on each generated map.

    ``mutate`` is a fault-injection hook applied to each map before checking.
    Checks that do not apply to a map (e.g. the axis of a direct map) are
    skipped, not counted.
    """
    rep = Report()
    for name in INVARIANTS:
        rep.invariants[name] = {"checked": 0, "passed": 0, "failed": 0}
    for i in range(config.cases):
        alpha = gen_similarity(config, i)
        if mutate is not None:
            alpha = mutate(alpha)
        ctx: dict = {"tol": tol, "config": config}
        try:
            ctx["oracle"] = sim.fixed_point_algebraic(alpha, tol)
            ctx["construction"] = cons.fixed_point(alpha, tol=tol)
        except GeometryError as exc:
            ctx["setup_error"] = f"{type(exc).__name__}: {exc}"
        for k, (name, check) in enumerate(INVARIANTS.items()):
            rng = case_rng(config, i, _STREAM_INVARIANTS + k)
            try:
                if "setup_error" in ctx and name in (
                    "oracle_soundness", "fixed_point_property", "trace_incidence", "cde_collinearity",
                    "commutation_stretch", "commutation_halfturn", "axis_recomposition",
                    "rotation_angle_readoff",
                ):
                    raise GeometryError(ctx["setup_error"])
                verdict = check(alpha, rng, ctx)
            except GeometryError as exc:
                verdict = False
                detail = f"{type(exc).__name__}: {exc}"
            else:
                detail = None
            if verdict is None:
                continue
            tally = rep.invariants[name]
            tally["checked"] += 1
            rep.total += 1
            if verdict:
                tally["passed"] += 1
                rep.passed += 1
            else:
                tally["failed"] += 1
                rec = {"index": i, "invariant": name, "similarity": _fmt_sim(alpha)}
                if detail:
                    rec["error"] = detail
                rep._fail(rec)
                if rep.worst_case is None:
                    rep.worst_case = rec
    return rep
