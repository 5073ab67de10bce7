import math

import pytest
from hypothesis import given, strategies as st

import exact_oracle as exact
from simfix import construction as cons
from simfix import geom_core as gc
from simfix import similarity as sim
from simfix.errors import (
    ConstructionFailed,
    DegenerateProbe,
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
from simfix.geom_core import Line, Point
from simfix.similarity import Method, Similarity

O = Point(0.0, 0.0)


def close(p, q, tol=1e-12):
    return gc.distance(p, q) <= tol * max(1.0, p.norm(), q.norm())


def exact_c(alpha):
    return exact.fixed_point(alpha.kind.value, alpha.scale, alpha.angle, alpha.translation)


scales = st.one_of(st.floats(0.1, 0.9989), st.floats(1.0011, 10.0))
# keep clear of the dilatation angles, where the crossing sines vanish
angles = st.one_of(st.floats(0.5, 179.5), st.floats(180.5, 359.5))
trans = st.tuples(st.floats(-100, 100), st.floats(-100, 100))
direct_maps = st.builds(Similarity, st.just("direct"), scales, angles, trans)
indirect_maps = st.builds(Similarity, st.just("indirect"), scales, st.floats(0, 360, exclude_max=True), trans)
non_dilatations = st.one_of(direct_maps, indirect_maps)


@pytest.fixture
def star_witness(alpha_star):
    return cons.WitnessTriangles.from_source(alpha_star, Point(0, 0), Point(4, 0), Point(4, 2))


# -- dilation centre ----------------------------------------------------------------


def test_dilation_center_with_listed_probe(delta):
    res = cons.dilation_center(delta, O, probe_b=Point(1, 0))
    tr = res.trace
    assert tr["A'"] == Point(-4, -6) and tr["B'"] == Point(-1, -6)
    assert res.point == Point(2, 3)
    assert res.method is Method.DILATION


def test_dilation_center_default_probe(delta):
    res = cons.dilation_center(delta)
    assert close(res.point, Point(2, 3))
    B, A, A2 = res.trace["B"], res.trace["A"], res.trace["A'"]
    # default second probe: one unit from A, perpendicular to AA'
    assert math.isclose(gc.distance(A, B), 1.0) and abs((B - A).dot(A2 - A)) < 1e-12
    assert res.trace.incidence_ok()


def test_dilation_center_halfturn_and_fixed_probe():
    assert cons.dilation_center(sim.halfturn(Point(1, 2)), O).point == Point(1, 2)
    res = cons.dilation_center(sim.stretch(Point(5, 5), 2), Point(5, 5))
    assert res.point == Point(5, 5) and res.trace.labels() == ["A", "A'", "C"]


def test_dilation_center_errors(alpha_star):
    with pytest.raises(NotADilation):
        cons.dilation_center(alpha_star)
    with pytest.raises(IdentityInput):
        cons.dilation_center(sim.identity())
    with pytest.raises(NotADilation):
        cons.dilation_center(sim.translation(Point(1, 0)))


@given(st.builds(Point, st.floats(-100, 100), st.floats(-100, 100)), scales, st.booleans())
def test_dilation_center_recovers_center(c, r, turn):
    res = cons.dilation_center(sim.dilation(c, r, turn))
    assert close(res.point, c, 1e-9)


# -- witness triangles ------------------------------------------------------------------


def test_listed_witness_is_admissible(alpha_star, star_witness):
    assert star_witness.image.p1 == Point(4, 0)
    assert star_witness.image.p2 == Point(4, 8)
    assert star_witness.image.p3 == Point(0, 8)
    assert star_witness.check(alpha_star)


def test_witness_for_alpha_star_uses_x_axis(alpha_star):
    w = cons.witness_triangles(alpha_star)
    assert w.source.p2 == Point(4, 0)
    assert w.check(alpha_star)


def test_beta_star_rejects_horizontal_candidate(beta_star):
    q = Line(0, 1, 0)
    assert gc.is_parallel(q, sim.apply_line(beta_star, q))
    w = cons.witness_triangles(beta_star)
    assert w.check(beta_star)
    m = gc.line_through(w.source.p1, w.source.p2)
    assert not gc.is_parallel(m, Line(0, 1, 0)) and not gc.is_parallel(m, Line(1, 0, 0))


def test_witness_refuses_dilatations():
    with pytest.raises(IsDilatation):
        cons.witness_triangles(sim.stretch(Point(1, 1), 2))


@given(non_dilatations)
def test_generated_witness_is_admissible(alpha):
    assert cons.witness_triangles(alpha).check(alpha)


# -- the two-pass construction ------------------------------------------------------------


def test_algorithm1_trace_for_alpha_star(alpha_star, star_witness):
    res = cons.fixed_point_algorithm1(alpha_star, star_witness)
    tr = res.trace
    assert tr["m"] == Line(0, 1, 0) and tr["m'"] == Line(1, 0, 4)
    assert tr["n"] == Line(0, 1, 2) and tr["n'"] == Line(1, 0, 0)
    assert tr["D"] == Point(4, 0) and tr["E"] == Point(0, 2)
    assert tr["a"].approx_eq(Line(1, 2, 4))
    assert tr["F"] == Point(4, 8) and tr["G"] == Point(0, 0)
    assert tr["b"].approx_eq(Line(2, -1, 0))
    assert close(res.point, Point(0.8, 1.6), 1e-15)
    assert tr.incidence_ok()


def test_algorithm1_matches_exact_crossings(alpha_star, star_witness):
    got = cons.fixed_point_algorithm1(alpha_star, star_witness).trace
    want = exact.algorithm1_crossings(*star_witness.source, *star_witness.image)
    for label, p in want.items():
        assert exact.rel_error(got[label], p) <= 1e-15, label


def test_algorithm1_step_numbers(alpha_star, star_witness):
    steps = {e.label: e.step for e in cons.fixed_point_algorithm1(alpha_star, star_witness).trace}
    assert [steps[k] for k in ("m", "n", "m'", "n'", "D", "E", "a")] == [1, 1, 2, 2, 3, 3, 4]
    assert {steps[k] for k in ("F", "G", "b")} == {5} and steps["C"] == 6


def test_algorithm1_beta_star(beta_star):
    w = cons.WitnessTriangles.from_source(beta_star, Point(0, 0), Point(1, 1), Point(2, 0))
    assert w.check(beta_star)
    assert close(cons.fixed_point_algorithm1(beta_star, w).point, Point(-3, 0))


def test_algorithm1_parallel_witness_raises(beta_star):
    # PQ along the axis direction: its image is parallel, so D is undefined
    bad = cons.WitnessTriangles.from_source(beta_star, Point(0, 0), Point(1, 0), Point(1, 1))
    assert not bad.check(beta_star)
    with pytest.raises(ParallelLines):
        cons.fixed_point_algorithm1(beta_star, bad)


# -- parallels construction -----------------------------------------------------------


def test_via_theorem_trace_for_alpha_star(alpha_star):
    res = cons.fixed_point_via_theorem(alpha_star)
    tr = res.trace
    assert tr["l"] == Line(0, 1, 0) and tr["l'"] == Line(1, 0, 4)
    assert tr["A"] == Point(4, 0) and tr["A'"] == Point(4, 8)
    assert tr["m"] == Line(0, 1, 8) and tr["m'"].approx_eq(Line(1, 0, -12))
    assert tr["B"] == Point(-12, 8) and tr["B'"] == Point(-12, -24)
    assert tr["AB"].approx_eq(Line(1, 2, 4)) and tr["A'B'"].approx_eq(Line(2, -1, 0))
    assert close(res.point, Point(0.8, 1.6))
    assert res.method is Method.THEOREM


def test_via_theorem_beta_star(beta_star):
    assert close(cons.fixed_point_via_theorem(beta_star).point, Point(-3, 0))


def test_via_theorem_returns_fixed_first_crossing():
    # a stretch rotation about the x=4, y=0 crossing of the x-axis and its image
    alpha = sim.compose(sim.rotation(Point(4, 0), 90), sim.stretch(Point(4, 0), 2))
    res = cons.fixed_point_via_theorem(alpha)
    assert res.point == Point(4, 0) and "B" not in res.trace


def test_via_theorem_refuses_dilatation():
    with pytest.raises(IsDilatation):
        cons.fixed_point_via_theorem(sim.stretch(O, 3))


@given(non_dilatations)
def test_construction_routes_agree_with_exact_solve(alpha):
    want = exact_c(alpha)
    a1 = cons.fixed_point(alpha)
    th = cons.fixed_point_via_theorem(alpha)
    assert exact.rel_error(a1.point, want) <= 1e-8
    assert exact.rel_error(th.point, want) <= 1e-8
    assert a1.is_fixed(alpha, gc.Tolerances(eps_point=1e-8))


# -- dispatcher -------------------------------------------------------------------------


def test_fixed_point_dispatch(alpha_star, delta):
    res = cons.fixed_point(alpha_star)
    assert close(res.point, Point(0.8, 1.6)) and res.method is Method.ALGORITHM1
    res = cons.fixed_point(delta)
    assert close(res.point, Point(2, 3)) and res.method is Method.DILATION
    with pytest.raises(IsometryInput):
        cons.fixed_point(sim.rotation(Point(1, 1), 90))


def test_fixed_point_uses_admissible_witness(alpha_star, star_witness):
    res = cons.fixed_point(alpha_star, star_witness)
    assert res.trace["D"] == Point(4, 0) and res.trace["P"] == Point(0, 0)


def test_fixed_point_skips_bad_witness(beta_star):
    bad = cons.WitnessTriangles.from_source(beta_star, Point(0, 0), Point(1, 0), Point(1, 1))
    assert close(cons.fixed_point(beta_star, bad).point, Point(-3, 0))


def test_construction_failed_carries_notes(monkeypatch, alpha_star):
    def broken(*args, **kwargs):
        raise ParallelLines("forced")

    monkeypatch.setattr(cons, "fixed_point_algorithm1", broken)
    monkeypatch.setattr(cons, "_theorem_from_line", broken)
    with pytest.raises(ConstructionFailed) as info:
        cons.fixed_point(alpha_star)
    assert info.value.diagnostics


def test_refinement_reaches_near_dilatation_fixed_point():
    alpha = Similarity("direct", 1.0011, 359.95066760630317, (3.9444606612777307, 17.697515753858255))
    want = exact_c(alpha)
    res = cons.fixed_point_via_theorem(alpha)
    assert res.refinements >= 1
    assert exact.rel_error(res.point, want) <= 1e-8


def test_recentered_map_fixes_shifted_point(alpha_star):
    o, h = Point(3, -1), 0.25
    local = cons.recentered(alpha_star, o, h)
    c = sim.fixed_point_algebraic(local).point
    assert close(o + c * h, Point(0.8, 1.6))


def test_near_parallel_is_flagged():
    alpha = Similarity("direct", 1.5, 1e-5, (10.0, -3.0))
    res = cons.fixed_point_via_theorem(alpha, refined=False)
    assert res.conditioning < cons.NEAR_PARALLEL_SINE
    assert any("near-parallel" in w for w in res.warnings)


# -- betweenness configuration ---------------------------------------------------------


def test_betweenness_case_of_alpha_star(alpha_star):
    tr = cons.fixed_point_via_theorem(alpha_star).trace
    # A=(4,0), B=(-12,8), C=(0.8,1.6): C lies between A and B
    assert cons.betweenness_case(tr) == "case1"


def test_betweenness_case_labels():
    tr = cons.ConstructionTrace()
    tr.add("A", Point(0, 0), 2)
    tr.add("B", Point(1, 0), 4)
    tr.add("AB", Line(0, 1, 0), 5)
    tr.add("C", Point(2, 0), 6)
    assert cons.betweenness_case(tr) == "case2"
    tr.add("C", Point(-1, 0), 6)
    assert cons.betweenness_case(tr) == "case3"


# -- collinearity witness ----------------------------------------------------------------


def test_collinearity_witness_example(alpha_star):
    c = Point(0.8, 1.6)
    D, E, ok = cons.collinearity_witness(alpha_star, c, Line(0, 1, 0), Line(0, 1, 2))
    assert D == Point(4, 0) and E == Point(0, 2) and ok


def test_collinearity_witness_default_parallel(alpha_star):
    D, E, ok = cons.collinearity_witness(alpha_star, Point(0.8, 1.6), Line(0, 1, 0))
    assert D == Point(4, 0) and ok and not gc.coincident(D, E)


def test_collinearity_witness_errors(alpha_star):
    with pytest.raises(LineThroughCenter):
        cons.collinearity_witness(alpha_star, Point(0.8, 1.6), Line(0, 1, 1.6))
    c = Point(2, 3)
    with pytest.raises(ParallelImage):
        cons.collinearity_witness(sim.stretch(c, 2), c, Line(1, 1, 0))


@given(non_dilatations, st.floats(0, 2 * math.pi), st.floats(0.5, 20), st.booleans())
def test_collinearity_holds(alpha, phi, off, flip):
    c = sim.fixed_point_algebraic(alpha).point
    n = Point(math.cos(phi), math.sin(phi))
    l = Line(n.x, n.y, n.dot(c) + (off if flip else -off))
    if gc.crossing_sine(l, sim.apply_line(alpha, l)) < 1e-6:
        return
    assert cons.collinearity_witness(alpha, c, l)[2]


# -- axis and angle read-off -----------------------------------------------------------


def test_reflection_axis_examples(beta_star, alpha_star):
    c = Point(-3, 0)
    assert cons.reflection_axis(beta_star, c, Point(0, 1)).approx_eq(Line(0, 1, 0))
    assert cons.reflection_axis(beta_star, c, Point(0, 0)).approx_eq(Line(0, 1, 0))
    with pytest.raises(NotIndirect):
        cons.reflection_axis(alpha_star, Point(0.8, 1.6), O)
    with pytest.raises(DegenerateProbe):
        cons.reflection_axis(beta_star, c, c)


def test_reflection_axis_picks_recomposing_bisector():
    # axis at 30 degrees through (1, 2); a probe at 100 degrees makes angle P C P' reflex
    c = Point(1, 2)
    axis = gc.line_through_direction(c, Point(math.cos(math.radians(30)), math.sin(math.radians(30))))
    alpha = sim.compose(sim.reflection(axis), sim.stretch(c, 3))
    p = c + Point(math.cos(math.radians(100)), math.sin(math.radians(100)))
    assert cons.reflection_axis(alpha, c, p).approx_eq(axis, gc.Tolerances(eps_parallel=1e-9, eps_point=1e-9))


def test_rotation_angle_examples(alpha_star):
    assert cons.rotation_angle_at(alpha_star, Point(0.8, 1.6), Point(4, 0)) == pytest.approx(90, abs=1e-9)
    c = Point(2, -1)
    assert cons.rotation_angle_at(sim.stretch(c, 2), c, O) == pytest.approx(0, abs=1e-9)
    assert cons.rotation_angle_at(sim.dilation(c, 2, True), c, O) == pytest.approx(180, abs=1e-9)
    with pytest.raises(NotDirect):
        cons.rotation_angle_at(Similarity("indirect", 2, 0), O, Point(1, 0))
    with pytest.raises(DegenerateProbe):
        cons.rotation_angle_at(alpha_star, O, O)


# -- trace container ------------------------------------------------------------------


def test_trace_lookup_and_serialization(alpha_star, star_witness):
    tr = cons.fixed_point_algorithm1(alpha_star, star_witness).trace
    assert "D" in tr and "Z" not in tr
    with pytest.raises(KeyError):
        tr["Z"]
    d = tr.to_dict()
    assert d[0] == {"label": "P", "step": 0, "point": [0.0, 0.0]}
    assert {"label": "m", "step": 1, "line": [0.0, 1.0, 0.0]} in d
    assert set(tr.points()) >= {"D", "E", "F", "G", "C"}
    assert set(tr.lines()) >= {"m", "n", "a", "b"}
