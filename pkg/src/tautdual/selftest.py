"""Quick internal consistency suite behind ``tautdual selftest``."""

from __future__ import annotations

import random
from fractions import Fraction

from .cekoszul import CEComplex, cycle_check, veronese_setup, veronese_zeta
from .dualpar import b_symmetry_check, finite_exception_set, gkz_dual
from .instance import load_instance
from .repdata import Character, check_bracket_compatibility
from .tautsys import build_taut, compute_bfunction, is_nonzero
from .weyl import BFunction, WeylElement


def _examples():
    out = []
    for name in ("quadric-cone", "segre-cone", "gkz-twisted-cubic-plane"):
        inst = load_instance(name)
        _, beta = inst.character()
        out.append((name, inst.rep, inst.orbit, beta))
    return out


def right_module_failures(C: CEComplex, rng: random.Random, samples: int = 2) -> int:
    bad = 0
    m = C.m
    for _ in range(samples):
        P = C.random_cochain(rng, 0, max_degree=2, nterms=1).terms.get((), WeylElement.const(1, C.N))
        for i in range(m):
            for j in range(i + 1, m):
                lhs = C.right_action(C.right_action(P, i), j) - C.right_action(C.right_action(P, j), i)
                br = C.rep.lie.structure[i][j]
                rhs = WeylElement(C.N)
                for k, c in enumerate(br):
                    if c:
                        rhs = rhs + C.right_action(P, k) * c
                if not C.ring.is_zero(lhs - rhs):
                    bad += 1
    return bad


def run_selftest(seed: int = 0, samples: int = 20) -> list:
    checks = []

    def record(name, passed, detail=""):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    quad = load_instance("quadric-cone")
    segre = load_instance("segre-cone")
    bq = compute_bfunction(quad.rep, quad.orbit).bfunction
    bs = compute_bfunction(segre.rep, segre.orbit).bfunction
    record("quadric b-function", bq == BFunction.from_roots([0, 1]), str(bq))
    record("segre b-function", bs == BFunction.from_roots([0, 2]), str(bs))
    record("b-function symmetry", b_symmetry_check(bq, bq, 1) and b_symmetry_check(bs, bs, 2))
    grid = [Fraction(v) for v in ("-2", "-1", "-1/2", "0", "1/2", "1", "3/2", "2")]
    agree = sum(is_nonzero(build_taut(quad.rep, quad.orbit, Character.scaling(quad.rep.lie, v))) == (bq(v) == 0)
                for v in grid)
    record("nonvanishing dichotomy", agree == len(grid), f"{agree}/{len(grid)}")
    C = veronese_setup(2, 2)
    record("veronese cycle", cycle_check(veronese_zeta(2, 2, C), C).passed)
    rng = random.Random(seed)
    for name, rep, Y, beta in _examples():
        record(f"bracket compatibility {name}", not check_bracket_compatibility(rep))
        T = build_taut(rep, Y, beta)
        Cx = CEComplex.for_beta(rep, Y, beta)
        record(f"degree-zero cohomology {name}", Cx.h0_presentation().same_ideal(T.weyl_ideal))
        bad = 0
        for _ in range(samples):
            c = Cx.random_cochain(rng, rng.randint(2, Cx.m))
            if not Cx.differential(Cx.differential(c)).is_zero():
                bad += 1
        record(f"differential squares to zero {name}", bad == 0, f"{bad} failures")
        record(f"right-module axiom {name}", right_module_failures(Cx, rng) == 0)
    rep = gkz_dual([[1, 1, 1], [0, 1, 2]], [0, 0])
    record("gkz dual parameter", rep.beta_tilde.values == (1, 1))
    record("lfd exception set", finite_exception_set([-1, Fraction(-2, 3)], 3) == {1})
    return checks
