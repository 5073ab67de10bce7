"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line."""

import math
import random
import subprocess
import sys
import time

import pytest

import exact_oracle as exact
from simfix import construction as cons
from simfix import geom_core as gc
from simfix import similarity as sim
from simfix.cli import fuzz_report
from simfix.geom_core import Line, Point
from simfix.harness import GenConfig, gen_similarity, run_equivalence, run_invariants

REL = 1e-8
N = 10_000


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def population():
    cfg = GenConfig(seed=1, cases=N)
    return [gen_similarity(cfg, i) for i in range(N)]


@pytest.fixture(scope="module")
def equivalence_report():
    return run_equivalence(GenConfig(seed=1, cases=N))


def test_c1_construction_matches_oracle(population, verdict):
    t0 = time.perf_counter()
    results = [cons.fixed_point(a) for a in population]
    elapsed = time.perf_counter() - t0
    worst, bad, oracle_drift = 0.0, 0, 0.0
    for a, r in zip(population, results):
        c = sim.fixed_point_algebraic(a).point
        rel = gc.distance(r.point, c) / (1 + c.norm())
        worst = max(worst, rel)
        bad += rel > REL
        # the float oracle itself against an exact rational solve
        oracle_drift = max(oracle_drift, exact.rel_error(c, exact.fixed_point(a.kind.value, a.scale, a.angle, a.translation)))
    ok = bad == 0 and elapsed < 10.0 and oracle_drift <= 1e-12
    verdict("C1 construction vs oracle", ok,
            f"{N - bad}/{N} within {REL:g}, max rel {worst:.2e}, oracle drift {oracle_drift:.1e}, {elapsed:.2f}s")


def test_c2_three_method_agreement(population, equivalence_report, verdict):
    non_dil = sum(not sim.is_dilatation(a) for a in population)
    tw = equivalence_report.three_way
    ok = tw["checked"] == non_dil and tw["agreed"] == non_dil
    verdict("C2 three-method agreement", ok, f"{tw['agreed']}/{non_dil} non-dilatation cases agree")


def test_c3_worked_examples(verdict):
    alpha = sim.Similarity("direct", 2, 90, (4, 0))
    w = cons.WitnessTriangles.from_source(alpha, Point(0, 0), Point(4, 0), Point(4, 2))
    res = cons.fixed_point(alpha, w)
    tr = res.trace
    star_ok = (tr["D"] == Point(4, 0) and tr["E"] == Point(0, 2) and tr["F"] == Point(4, 8)
               and tr["G"] == Point(0, 0) and gc.distance(res.point, Point(0.8, 1.6)) <= 1e-15)

    beta = sim.Similarity("indirect", 2, 0, (3, 0))
    cb = cons.fixed_point(beta).point
    axis = cons.reflection_axis(beta, cb, Point(0, 1))
    beta_ok = gc.distance(cb, Point(-3, 0)) <= 1e-12 and axis.approx_eq(Line(0, 1, 0))

    delta = sim.stretch(Point(2, 3), 3)
    cd = cons.fixed_point(delta).point
    listed = cons.dilation_center(delta, probe_b=Point(1, 0)).point
    dil_ok = gc.distance(cd, Point(2, 3)) <= 1e-12 and listed == Point(2, 3)

    verdict("C3 worked examples", star_ok and beta_ok and dil_ok,
            f"alpha* D,E,F,G,C {'match' if star_ok else 'MISMATCH'}; "
            f"beta* C=({cb.x:.15g},{cb.y:.15g}) axis y=0 {'ok' if beta_ok else 'MISMATCH'}; "
            f"dilation C=({cd.x:.15g},{cd.y:.15g})")


def test_c4_cde_collinearity(verdict):
    cfg = GenConfig(seed=4, dilation_mix=0.0)
    rng = random.Random(4)
    pairs, collinear, i = 0, 0, 0
    while pairs < 1000:
        alpha = gen_similarity(cfg, i)
        i += 1
        c = sim.fixed_point_algebraic(alpha).point
        phi = rng.uniform(0, 2 * math.pi)
        off = rng.uniform(0.5, 20.0) * rng.choice((-1, 1))
        l = Line(math.cos(phi), math.sin(phi), math.cos(phi) * c.x + math.sin(phi) * c.y + off)
        if gc.crossing_sine(l, sim.apply_line(alpha, l)) < cons.NEAR_PARALLEL_SINE:
            continue
        pairs += 1
        collinear += cons.collinearity_witness(alpha, c, l)[2]
    verdict("C4 C, D, E collinearity", collinear == pairs, f"{collinear}/{pairs} pairs collinear")


LAWS = ("ratio_law", "betweenness", "collineation", "dilatation_characterization",
        "commutation_stretch", "commutation_halfturn")


def test_c5_law_suite(verdict):
    rep = run_invariants(GenConfig(seed=2, cases=1000))
    axis = run_invariants(GenConfig(seed=2, cases=1000, kind_mix=1.0)).invariants["axis_recomposition"]
    tallies = {name: rep.invariants[name] for name in LAWS}
    tallies["axis_recomposition"] = axis
    ok = all(t["checked"] == 1000 and t["passed"] == 1000 for t in tallies.values())
    detail = ", ".join(f"{k} {t['passed']}/{t['checked']}" for k, t in tallies.items())
    verdict("C5 law suite", ok, detail)


def test_c6_proof_case_coverage(equivalence_report, verdict):
    tally = equivalence_report.betweenness
    ok = all(tally.get(k, 0) >= 50 for k in ("case1", "case2", "case3"))
    verdict("C6 betweenness coverage", ok, ", ".join(f"{k}={v}" for k, v in sorted(tally.items())))


def test_c7_determinism(tmp_path, verdict):
    # two separate interpreters, so nothing is shared between the runs
    paths = [tmp_path / "run1.json", tmp_path / "run2.json"]
    for p in paths:
        subprocess.run([sys.executable, "-m", "simfix", "fuzz", "--seed", "1", "--cases", "1000", "--out", str(p)],
                       check=True, capture_output=True)
    a, b = (p.read_bytes() for p in paths)
    in_process = fuzz_report(GenConfig(seed=1, cases=1000))[0].encode()
    ok = a == b == in_process
    verdict("C7 determinism", ok, f"{len(a)}-byte reports identical across processes: {ok}")
