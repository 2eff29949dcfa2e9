"""Duality parameters: ``beta~ = trace(ad) + gamma - beta`` and its special cases."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .exactpoly import PolyIdeal, format_fraction, minimal_generators, to_fraction, toric_ideal
from .repdata import Character, DataInconsistencyError, LieAlgebra, RepData, beta_prime, torus_rep, trace_ad, trace_drho
from .tautsys import OrbitClosureData
from .weyl import BFunction, upoly_compose_affine, upoly_derivative, upoly_eval

ORBITS_CAVEAT = "finitely many orbits assumed (not verified)"
THEOREM_TAGS = ("Gorenstein-general", "dim-equal", "CM-only", "LFD", "GKZ")


@dataclass
class DualityReport:
    beta: Character
    beta_prime: Character | None
    gamma: Character | None
    gamma_source: str                # "user", "CI-formula", "GKZ-degrees" or "unknown"
    trace_ad: Character
    beta_tilde: Character | None
    shift: int
    theorem: str | None
    caveats: list = field(default_factory=list)
    statement: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.theorem is not None and self.theorem not in THEOREM_TAGS:
            raise ValueError(f"unknown theorem tag {self.theorem!r}")
        if self.gamma is not None and self.beta_tilde is not None:
            if self.beta_tilde != self.trace_ad + self.gamma - self.beta:
                raise ValueError("beta_tilde must equal trace_ad + gamma - beta")

    def to_json(self) -> dict:
        def ch(c):
            return None if c is None else c.to_json()

        out = {
            "beta": ch(self.beta),
            "beta_prime": ch(self.beta_prime),
            "gamma": {"value": ch(self.gamma), "source": self.gamma_source},
            "trace_ad": ch(self.trace_ad),
            "beta_tilde": ch(self.beta_tilde),
            "shift": self.shift,
            "theorem": self.theorem,
            "statement": self.statement,
            "caveats": list(self.caveats),
        }
        out.update(self.extra)
        return out


class MissingDataError(ValueError):
    """Required data (complete-intersection degrees, a Gorenstein character...) is absent."""


def gorenstein_gamma_ci(rep: RepData, Y: OrbitClosureData) -> Character:
    """``gamma(e) = N - sum(d_i)`` and ``gamma = 0`` on the complement of ``e``."""
    if Y.ci_degrees is None:
        raise MissingDataError("complete-intersection degrees are required")
    lie = rep.lie
    if lie.scaling_element is None:
        raise MissingDataError("a scaling element must be flagged")
    if not lie.subalgebra_is_perfect(lie.complement_indices()):
        raise DataInconsistencyError("the complement of the scaling element is not a perfect Lie algebra")
    return Character.scaling(lie, rep.N - sum(Y.ci_degrees))


def dual_parameter(beta: Character, gamma: Character, lie: LieAlgebra) -> Character:
    if beta.lie != lie or gamma.lie != lie:
        raise DataInconsistencyError("characters must live on the given Lie algebra")
    return trace_ad(lie) + gamma - beta


def reflect_bfunction(b: BFunction, gamma_e) -> tuple:
    """Monic coefficients of ``b(gamma_e - s)``."""
    coeffs = upoly_compose_affine(list(b.coefficients), gamma_e, -1)
    lead = coeffs[-1]
    return tuple(c / lead for c in coeffs)


def b_symmetry_check(b_beta0: BFunction, b_dual: BFunction, gamma_e) -> bool:
    return tuple(b_beta0.coefficients) == reflect_bfunction(b_dual, to_fraction(gamma_e))


def simple_root_duality(b: BFunction, beta: Character, gamma: Character, lie: LieAlgebra,
                        dim_condition: bool = False) -> DualityReport:
    """Duality statement when ``beta(e)`` is a simple root of ``b``.

    ``dim_condition`` is the caller's assertion that ``dim g = dim Y + 1``.
    """
    be = beta.at_scaling()
    delta = trace_ad(lie)
    tilde = dual_parameter(beta, gamma, lie)
    caveats = [ORBITS_CAVEAT]
    if not dim_condition:
        caveats.append("dim g = dim Y + 1 not asserted by the caller")
    if b(be) != 0:
        return DualityReport(beta, None, gamma, "user", delta, tilde, 0, None, caveats,
                             statement=f"b({format_fraction(be)}) != 0, so the module vanishes",
                             extra={"root": False, "simple": False, "module_zero": True})
    simple = upoly_eval(upoly_derivative(list(b.coefficients)), be) != 0
    if not simple:
        return DualityReport(beta, None, gamma, "user", delta, tilde, 0, None, caveats,
                             statement=f"{format_fraction(be)} is a multiple root of {b}; no duality statement",
                             extra={"root": True, "simple": False, "module_zero": False})
    tag = "Gorenstein-general" if dim_condition else None
    return DualityReport(beta, None, gamma, "user", delta, tilde, 0, tag, caveats,
                         statement="dual of the module for beta is the module for beta_tilde",
                         extra={"root": True, "simple": True, "module_zero": False})


def choose_gamma(rep: RepData, Y: OrbitClosureData) -> tuple:
    """Gorenstein character by provenance: user > CI formula > GKZ degrees > unknown."""
    if Y.gorenstein_gamma is not None:
        return Y.gorenstein_gamma, "user"
    if Y.ci_degrees is not None and rep.lie.scaling_element is not None:
        try:
            return gorenstein_gamma_ci(rep, Y), "CI-formula"
        except DataInconsistencyError:
            pass
    if rep.lie.is_abelian() and _is_diagonal(rep):
        gamma = _torus_gamma(rep, Y.ideal)
        if gamma is not None:
            return gamma, "GKZ-degrees"
    return None, "unknown"


def duality_report(rep: RepData, Y: OrbitClosureData, beta: Character) -> DualityReport:
    gamma, source = choose_gamma(rep, Y)
    m = rep.lie.dim
    shift = Y.dim_Y - m
    delta = trace_ad(rep.lie)
    bp = beta_prime(rep, beta)
    caveats = [ORBITS_CAVEAT]
    if gamma is None:
        caveats.append("Gorenstein character unknown: only the Cohen-Macaulay statement applies")
        formula = trace_drho(rep) - delta + beta
        return DualityReport(beta, bp, None, source, delta, None, shift, "CM-only", caveats,
                             statement=("dual of the derived system is C(omega_Y, "
                                        f"{formula}) shifted by {shift}; omega_Y is not computed"),
                             extra={"cm_twist": formula.to_json()})
    if source != "user":
        caveats.append(f"Gorenstein character derived via {source}")
    tilde = dual_parameter(beta, gamma, rep.lie)
    if m == Y.dim_Y:
        tag, stmt = "dim-equal", "dual of the module for beta is the module for beta_tilde"
    else:
        tag = "Gorenstein-general"
        stmt = f"dual of the module for beta is H^{shift} of the derived system for beta_tilde"
    return DualityReport(beta, bp, gamma, source, delta, tilde, shift, tag, caveats, statement=stmt)


# --------------------------------------------------------------------------
# GKZ
# --------------------------------------------------------------------------


def _is_diagonal(rep: RepData) -> bool:
    return all(M[i][j] == 0 for M in rep.matrices for i in range(rep.N) for j in range(rep.N) if i != j)


def _positive_grading(weights_rows: list):
    for row in weights_rows:
        if all(v > 0 for v in row):
            return row
    total = [sum(col) for col in zip(*weights_rows)]
    if all(v > 0 for v in total):
        return total
    return None


def _torus_gamma(rep: RepData, ideal: PolyIdeal) -> Character | None:
    """``trace(drho) - sum deg(f_i)`` if the ideal is a complete intersection, else None."""
    rows = [[M[i][i] for i in range(rep.N)] for M in rep.matrices]
    if any(v.denominator != 1 for r in rows for v in r):
        return None
    rows_int = [[int(v) for v in r] for r in rows]
    grading = _positive_grading(rows_int)
    if grading is None:
        return None
    gens = [g for g in ideal.generators if not g.is_zero()]
    mins = minimal_generators(ideal, grading) if gens else []
    codim = rep.N - linalg.rank(rows)
    if len(mins) != codim:
        return None
    total = [Fraction(0)] * rep.lie.dim
    for g in mins:
        mono = next(iter(g.terms))
        for r in range(rep.lie.dim):
            total[r] += sum(a * e for a, e in zip(rows[r], mono))
    tr = trace_drho(rep)
    return Character(rep.lie, tuple(t - s for t, s in zip(tr.values, total)))


def ideal_degrees(A: Sequence[Sequence[int]], ideal: PolyIdeal) -> list:
    """A-degrees of the generators of a homogeneous binomial ideal."""
    out = []
    for g in ideal.generators:
        mono = next(iter(g.terms))
        out.append(tuple(sum(a * e for a, e in zip(row, mono)) for row in A))
    return out


def gkz_dual(A: Sequence[Sequence[int]], beta: Sequence, gamma: Sequence | None = None) -> DualityReport:
    """Duality report for the GKZ system of ``A``, with ``beta~ = gamma - beta``."""
    A = [[int(v) for v in row] for row in A]
    d = len(A)
    if linalg.rank(A) != d:
        raise DataInconsistencyError("A must have full row rank")
    scaling = next((i for i, row in enumerate(A) if all(v == 1 for v in row)), None)
    rep = torus_rep(A, scaling_row=scaling)
    ideal = toric_ideal(A)
    beta_c = Character(rep.lie, tuple(to_fraction(b) for b in beta))
    caveats = [ORBITS_CAVEAT]
    if gamma is not None:
        gamma_c, source = Character(rep.lie, tuple(to_fraction(g) for g in gamma)), "user"
    else:
        gamma_c, source = _torus_gamma(rep, ideal), "GKZ-degrees"
        if gamma_c is None:
            source = "unknown"
    delta = trace_ad(rep.lie)
    bp = beta_prime(rep, beta_c)
    extra = {"toric_ideal": [str(g) for g in ideal.generators],
             "generator_degrees": [[v for v in deg] for deg in ideal_degrees(A, ideal)]}
    if gamma_c is None:
        caveats.append("toric ideal is not a complete intersection and no gamma supplied: gamma unknown")
        return DualityReport(beta_c, bp, None, source, delta, None, 0, "CM-only", caveats,
                             statement="gamma unknown; no Gorenstein duality statement", extra=extra)
    tilde = dual_parameter(beta_c, gamma_c, rep.lie)
    return DualityReport(beta_c, bp, gamma_c, source, delta, tilde, 0, "GKZ", caveats,
                         statement="dual of the GKZ module for beta is the module for beta_tilde", extra=extra)


# --------------------------------------------------------------------------
# linear free divisors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LFDWindow:
    n: int
    roots_bD: tuple
    beta_e: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.roots_bD:
            raise ValueError("at least one root of b_D is required")
        object.__setattr__(self, "roots_bD", tuple(to_fraction(r) for r in self.roots_bD))
        object.__setattr__(self, "beta_e", to_fraction(self.beta_e))

    @property
    def shifted_roots(self) -> tuple:
        """The set ``n * (1 + roots)``."""
        return tuple(sorted({self.n * (1 + r) for r in self.roots_bD}))


def _in_shifted(beta: Fraction, S, predicate) -> bool:
    for s in S:
        diff = beta - s
        if diff.denominator == 1 and predicate(int(diff)):
            return True
    return False


LFD_CONCLUSIONS = ("dag-image", "plus-image", "duality-morphism", "simple-pure")


@dataclass
class LFDClassification:
    window: LFDWindow
    in_positive_shift: bool      # beta in S + Z_{>0}
    in_nonpositive_shift: bool   # beta in S + Z_{<=0}
    in_integer_shift: bool       # beta in S + Z
    half_integer: bool
    conclusions: tuple
    mhm_remark: bool

    def to_json(self) -> dict:
        return {
            "n": self.window.n,
            "roots_bD": [format_fraction(r) for r in self.window.roots_bD],
            "beta_e": format_fraction(self.window.beta_e),
            "shifted_roots": [format_fraction(s) for s in self.window.shifted_roots],
            "in_S_plus_Zpos": self.in_positive_shift,
            "in_S_plus_Znonpos": self.in_nonpositive_shift,
            "in_S_plus_Z": self.in_integer_shift,
            "half_integer": self.half_integer,
            "conclusions": list(self.conclusions),
            "mhm_remark": self.mhm_remark,
            "dual_parameter": format_fraction(1 - self.window.beta_e),
        }


def lfd_window_check(w: LFDWindow) -> LFDClassification:
    S = w.shifted_roots
    b = w.beta_e
    pos = _in_shifted(b, S, lambda k: k > 0)
    nonpos = _in_shifted(b, S, lambda k: k <= 0)
    anyint = _in_shifted(b, S, lambda k: True)
    half = (2 * b).denominator == 1
    concl = []
    if not pos:
        concl.append("dag-image")
    if not nonpos:
        concl.append("plus-image")
    if half and not pos:
        concl.append("duality-morphism")
    if not anyint:
        concl.append("simple-pure")
    return LFDClassification(w, pos, nonpos, anyint, half, tuple(concl), (not pos) or (not nonpos))


def finite_exception_set(roots_bD: Sequence, n: int) -> set:
    """``(S + Z_{>0}) & (S + Z_{<=0})`` for ``S = n * (1 + roots)``."""
    S = sorted({n * (1 + to_fraction(r)) for r in roots_bD})
    out = set()
    for s1 in S:
        for s2 in S:
            k = s2 - s1
            if k.denominator == 1 and k >= 1:
                out.update(s1 + j for j in range(1, int(k) + 1))
    return out


__all__ = [
    "DualityReport", "LFDClassification", "LFDWindow", "MissingDataError", "b_symmetry_check",
    "choose_gamma", "dual_parameter", "duality_report", "finite_exception_set", "gkz_dual",
    "gorenstein_gamma_ci", "ideal_degrees", "lfd_window_check", "reflect_bfunction",
    "simple_root_duality",
]
