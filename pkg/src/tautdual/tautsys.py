"""Cyclic presentations ``D / (D*I + D*(Z(xi) - beta'(xi)))`` and their well-posedness."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from .exactpoly import DimensionError, Poly, PolyIdeal, monomial_exponents
from .repdata import Character, DataInconsistencyError, RepData, beta_prime, vector_field
from .weyl import (
    BFunction,
    BFunctionResult,
    WeylElement,
    WeylIdeal,
    evaluate_at_operator,
    is_root,
    minimal_polynomial_of_theta,
)


class StabilityError(ValueError):
    """The ideal of the orbit closure is not stable under the Lie algebra."""


class DefectError(RuntimeError):
    """Two independent computations that must agree did not."""


@dataclass
class OrbitClosureData:
    """Ideal of an orbit closure ``Y`` in ``V``, its dimension, and optional Gorenstein data."""

    ideal: PolyIdeal
    dim_Y: int
    gorenstein_gamma: Character | None = None
    ci_degrees: tuple | None = None

    def __post_init__(self):
        N = self.ideal.nvars
        if not 0 <= self.dim_Y <= N:
            raise DimensionError(f"dim_Y={self.dim_Y} must lie in [0, {N}]")
        if self.ci_degrees is not None:
            self.ci_degrees = tuple(int(d) for d in self.ci_degrees)
            gens = [g for g in self.ideal.generators if not g.is_zero()]
            if len(gens) != len(self.ci_degrees):
                raise DataInconsistencyError(
                    f"{len(self.ci_degrees)} complete-intersection degrees for {len(gens)} generators")
            for g, d in zip(gens, self.ci_degrees):
                if not g.is_homogeneous() or g.degree() != d:
                    raise DataInconsistencyError(f"generator {g} is not homogeneous of degree {d}")

    @property
    def N(self) -> int:
        return self.ideal.nvars


@dataclass
class StabilityReport:
    """Outcome of testing ``Z(xi_j)(f) in I`` for every basis element and generator."""

    checks: list = field(default_factory=list)  # (j, generator index, passed)

    @property
    def ok(self) -> bool:
        return all(p for _, _, p in self.checks)

    @property
    def failures(self) -> list:
        return [(j, g) for j, g, p in self.checks if not p]


def check_g_stability(rep: RepData, Y: OrbitClosureData) -> StabilityReport:
    if rep.N != Y.N:
        raise DimensionError(f"representation has N={rep.N}, ideal lives in {Y.N} variables")
    report = StabilityReport()
    for j in range(rep.lie.dim):
        Z = vector_field(rep, j)
        for gi, f in enumerate(Y.ideal.generators):
            report.checks.append((j, gi, Y.ideal.contains(Z.apply_to(f))))
    return report


@dataclass
class TautPresentation:
    weyl_ideal: WeylIdeal
    rep: RepData
    beta: Character
    beta_prime: Character
    includes_scaling: bool
    orbit: OrbitClosureData

    @property
    def basis_indices(self) -> list:
        lie = self.rep.lie
        return list(range(lie.dim)) if self.includes_scaling else lie.complement_indices()


def taut_generators(rep: RepData, Y: OrbitClosureData, bprime: Character, indices: Sequence[int]) -> list:
    gens = [WeylElement.from_poly(f) for f in Y.ideal.generators if not f.is_zero()]
    for j in indices:
        gens.append(vector_field(rep, j) - bprime[j])
    return gens


def build_taut(rep: RepData, Y: OrbitClosureData, beta: Character, includes_scaling: bool = True,
               check: bool = True) -> TautPresentation:
    """Presentation of the tautological system; with ``includes_scaling=False`` the
    generator for the scaling element is dropped."""
    if beta.lie != rep.lie:
        raise DimensionError("character and representation use different Lie algebras")
    if not includes_scaling and rep.lie.scaling_element is None:
        raise DataInconsistencyError("dropping the scaling generator needs a flagged scaling element")
    if check:
        rep_report = check_g_stability(rep, Y)
        if not rep_report.ok:
            j, g = rep_report.failures[0]
            raise StabilityError(
                f"Z({rep.lie.labels[j]}) applied to generator {Y.ideal.generators[g]} leaves the ideal")
    bp = beta_prime(rep, beta)
    idx = list(range(rep.lie.dim)) if includes_scaling else rep.lie.complement_indices()
    J = WeylIdeal(taut_generators(rep, Y, bp, idx), rep.N)
    return TautPresentation(J, rep, beta, bp, includes_scaling, Y)


def theta_operator(rep: RepData) -> WeylElement:
    """``N - Z(e)``, which equals ``N + sum x_i d_i`` for the scaling element."""
    e = rep.lie.scaling_element
    if e is None:
        raise DataInconsistencyError("no scaling element flagged")
    return WeylElement.const(rep.N, rep.N) - vector_field(rep, e)


def compute_bfunction(rep: RepData, Y: OrbitClosureData, beta: Character | None = None,
                      cap: int = 16) -> BFunctionResult:
    """b-function of the system without the scaling generator, for ``beta`` restricted
    to the complement of the scaling element."""
    if beta is None:
        beta = Character.zero(rep.lie)
    T0 = build_taut(rep, Y, beta, includes_scaling=False)
    return minimal_polynomial_of_theta(T0.weyl_ideal, theta_operator(rep), cap)


def is_nonzero(T: TautPresentation, b: BFunction | None = None) -> bool:
    """False iff ``1`` lies in the ideal. If the b-function of the scaling-free system
    is given, the answer is cross-checked against ``is_root``."""
    nonzero = not T.weyl_ideal.is_unit()
    if b is not None and T.includes_scaling:
        predicted = is_root(b, T.beta.at_scaling())
        if predicted != nonzero:
            raise DefectError(
                f"Groebner basis says nonzero={nonzero} but b({T.beta.at_scaling()}) root test says {predicted}")
    return nonzero


def certificate_in_context(T0: TautPresentation, b: BFunction) -> bool:
    """Re-check that ``b(theta)`` lies in the scaling-free ideal."""
    return T0.weyl_ideal.contains(evaluate_at_operator(b.coefficients, theta_operator(T0.rep)))


# --------------------------------------------------------------------------
# ideal constructors
# --------------------------------------------------------------------------


def veronese_ideal(n: int, d: int) -> PolyIdeal:
    """Quadratic binomials ``y_a y_b - y_c y_e`` (``a + b = c + e``) cutting out the
    Veronese cone in ``Sym^d``, coordinates ordered as :func:`monomial_exponents`."""
    basis = list(monomial_exponents(n, d))
    N = len(basis)
    by_sum: dict = {}
    for i, j in combinations_with_replacement(range(N), 2):
        key = tuple(a + b for a, b in zip(basis[i], basis[j]))
        by_sum.setdefault(key, []).append((i, j))
    gens = []
    for pairs in by_sum.values():
        first = pairs[0]
        for other in pairs[1:]:
            gens.append(_quad(first, N) - _quad(other, N))
    ideal = PolyIdeal(gens, N)
    # keep a tidy generating set: the reduced Groebner basis
    return PolyIdeal(ideal.groebner_basis(), N) if gens else ideal


def _quad(pair, N) -> Poly:
    e = [0] * N
    e[pair[0]] += 1
    e[pair[1]] += 1
    return Poly.monomial(e)


def segre_ideal(p: int, q: int) -> PolyIdeal:
    """2x2 minors of the generic ``p x q`` matrix with row-major coordinates."""
    N = p * q
    gens = []
    for r1, r2 in combinations(range(p), 2):
        for c1, c2 in combinations(range(q), 2):
            a, b = r1 * q + c1, r2 * q + c2
            c, d = r1 * q + c2, r2 * q + c1
            gens.append(Poly.var(a, N) * Poly.var(b, N) - Poly.var(c, N) * Poly.var(d, N))
    return PolyIdeal(gens, N)


__all__ = [
    "DefectError", "OrbitClosureData", "StabilityError", "StabilityReport", "TautPresentation",
    "build_taut", "certificate_in_context", "check_g_stability", "compute_bfunction", "is_nonzero",
    "segre_ideal", "taut_generators", "theta_operator", "veronese_ideal",
]
