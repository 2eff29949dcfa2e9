"""End-to-end acceptance checks; each records one pass/fail line for the terminal summary."""

import random
import time
from fractions import Fraction

import pytest

from conftest import record
from tautdual.cekoszul import CEComplex
from tautdual.cli import run
from tautdual.dualpar import LFDWindow, b_symmetry_check, finite_exception_set, gkz_dual, lfd_window_check
from tautdual.instance import load_instance
from tautdual.repdata import Character
from tautdual.selftest import right_module_failures
from tautdual.tautsys import build_taut, compute_bfunction, is_nonzero
from tautdual.weyl import BFunction, is_root

EXAMPLES = ("quadric-cone", "segre-cone", "gkz-twisted-cubic-plane")
ALL_EXAMPLES = EXAMPLES + ("gkz-identity",)


def complex_for(name):
    inst = load_instance(name)
    _, beta = inst.character()
    return inst, beta, CEComplex.for_beta(inst.rep, inst.orbit, beta)


def test_bfunction_reproduction():
    start = time.perf_counter()
    code, rep = run(["bfun", "quadric-cone"])
    elapsed = time.perf_counter() - start
    res = rep.get("result", {})
    ok = code == 0 and res.get("coefficients") == ["0", "-1", "1"] and elapsed < 60
    record(1, "quadric b-function is s(s-1)", ok, f"b = {res.get('b')}, {elapsed:.1f}s")
    assert ok


def test_bfunction_symmetry():
    quad, segre = load_instance("quadric-cone"), load_instance("segre-cone")
    bq = compute_bfunction(quad.rep, quad.orbit).bfunction
    bs = compute_bfunction(segre.rep, segre.orbit).bfunction
    ok = (bq == BFunction.from_roots([0, 1]) and bs == BFunction.from_roots([0, 2])
          and b_symmetry_check(bq, bq, 1) and b_symmetry_check(bs, bs, 2))
    record(2, "b(s) = b(gamma(e) - s) for quadric and Segre cones", ok, f"{bq}; {bs}")
    assert ok


def test_nonvanishing_dichotomy():
    inst = load_instance("quadric-cone")
    b = compute_bfunction(inst.rep, inst.orbit).bfunction
    grid = [Fraction(v) for v in ("-2", "-1", "-1/2", "0", "1/2", "1", "3/2", "2")]
    agree = 0
    for v in grid:
        T = build_taut(inst.rep, inst.orbit, Character.scaling(inst.rep.lie, v))
        agree += is_nonzero(T) == is_root(b, v)
    record(3, "nonvanishing agrees with roots of b", agree == len(grid), f"{agree}/{len(grid)}")
    assert agree == len(grid)


def test_zeta_cycle():
    start = time.perf_counter()
    code, rep = run(["cycle", "--veronese", "2", "2"])
    elapsed = time.perf_counter() - start
    res = rep.get("result", {})
    ok = code == 0 and res.get("passed") and res.get("residual") == "" and elapsed < 10
    stretch_code, stretch = run(["cycle", "--veronese", "3", "3"])
    stretch_ok = stretch_code == 0 and stretch["result"]["passed"]
    record(4, "Veronese cochain zeta is a cycle", ok,
           f"n=d=2 in {elapsed:.2f}s; stretch n=d=3 {'passes' if stretch_ok else 'fails'}")
    assert ok


def test_degree_zero_cohomology():
    agree = []
    for name in EXAMPLES:
        inst, beta, C = complex_for(name)
        T = build_taut(inst.rep, inst.orbit, beta)
        agree.append(C.h0_presentation().same_ideal(T.weyl_ideal))
    ok = all(agree)
    record(5, "degree-zero cohomology equals the tautological presentation", ok,
           f"{sum(agree)}/{len(agree)} examples")
    assert ok


def test_differential_squares_to_zero():
    rng = random.Random(20240601)
    failures = {}
    for name in ALL_EXAMPLES:
        C = complex_for(name)[2]
        bad = 0
        for k in range(200):
            # every wedge degree where delta o delta is defined
            ell = 2 + k % (C.m - 1)
            c = C.random_cochain(rng, ell, max_degree=3)
            if not C.differential(C.differential(c)).is_zero():
                bad += 1
        failures[name] = bad
    ok = not any(failures.values())
    record(6, "delta o delta = 0 on 200 random cochains per example", ok, str(failures))
    assert ok


def test_right_module_axiom():
    rng = random.Random(7)
    failures = {name: right_module_failures(complex_for(name)[2], rng, samples=3) for name in ALL_EXAMPLES}
    ok = not any(failures.values())
    record(7, "right-module axiom on all basis pairs", ok, str(failures))
    assert ok


def test_gkz_dual_parameter():
    A = [[1, 1, 1], [0, 1, 2]]
    r = gkz_dual(A, [0, 0])
    # independent oracle: gamma = (row sums of A) - (A-degree of the binomial x1 x3 - x2^2)
    binomial_degree = [row[0] + row[2] for row in A]
    assert binomial_degree == [2 * row[1] for row in A]
    gamma = tuple(sum(row) - d for row, d in zip(A, binomial_degree))
    ok = r.gamma.values == gamma and r.trace_ad.values == (0, 0) and r.beta_tilde.values == (1, 1)
    record(8, "GKZ dual parameter is (1,1) - beta", ok, f"beta~ = {r.beta_tilde}")
    assert ok


def test_lfd_window_calculus():
    roots = [Fraction(-1), Fraction(-2, 3)]
    exc = finite_exception_set(roots, 3)
    rng = random.Random(11)
    violations = 0
    for _ in range(100):
        beta = Fraction(rng.randint(-30, 30), rng.randint(1, 6))
        c = lfd_window_check(LFDWindow(3, tuple(roots), beta))
        if "simple-pure" in c.conclusions and not {"dag-image", "plus-image"} <= set(c.conclusions):
            violations += 1
    ok = exc == {1} and violations == 0
    record(9, "LFD exception set is {1}; window containment holds", ok,
           f"exceptions {[str(x) for x in sorted(exc)]}, {violations} violations in 100 samples")
    assert ok


@pytest.mark.parametrize("character", ["beta_e=0", "beta_e=1"])
def test_truncated_homology(character):
    code, rep = run(["profile", "quadric-cone", "--cap", "8", "--character", character])
    res = rep.get("result", {})
    rows = res.get("profile", {}).get("rows", [])
    bound = res.get("dim_Y_minus_m")
    below = {r["degree"]: r["apparent_homology"] for r in rows if bound is not None and r["degree"] < bound}
    unchanged = set(res.get("stabilization", {}).get("unchanged_degrees", []))
    ok = (code == 0 and res["profile"]["truncated"] and below and not any(below.values())
          and set(below) <= unchanged)
    record(10, "truncated homology vanishes below dim_Y - m at caps 6 and 8 (TRUNCATED)", ok,
           f"{character}: {below}")
    assert ok
