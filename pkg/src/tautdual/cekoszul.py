"""The Chevalley-Eilenberg (Euler-Koszul) complex with terms ``D/D*I (x) wedge^l g``.

Coefficients live in ``M = D/D*I``. Writing operators antinormally
(``d^b x^a``) gives ``M = sum_b d^b O_Y``, so a canonical representative is
obtained by reducing each x-part modulo a Groebner basis of ``I`` in
antinormal form. Representatives are stored back in normal order.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .exactpoly import (
    DEGREVLEX,
    DimensionError,
    PolyIdeal,
    ResourceError,
    commutative_term_mul,
    monomial_exponents,
    reduce_terms,
)
from .linalg import SparseEchelon
from .repdata import Character, RepData, beta_prime, trace_drho, vector_field, veronese_rep
from .tautsys import DefectError, OrbitClosureData, TautPresentation, veronese_ideal
from .weyl import WeylElement, WeylIdeal, antinormal_to_normal, normal_to_antinormal, parse_weyl


class PreconditionError(ValueError):
    """Inputs violate a stated precondition (e.g. ``d`` does not divide ``n``)."""


class CoefficientRing:
    """Canonical forms in ``D/D*I``."""

    def __init__(self, ideal: PolyIdeal):
        self.ideal = ideal
        self.N = ideal.nvars
        nonzero = [g for g in ideal.generators if not g.is_zero()]
        self.trivial = not nonzero
        self._reducer = ideal.reducer(DEGREVLEX) if nonzero else []

    def reduce_antinormal(self, anti: dict) -> dict:
        """Reduce the x-part of every ``d^b`` block of an antinormal term map."""
        if self.trivial:
            return anti
        blocks: dict = {}
        for (b, a), c in anti.items():
            blocks.setdefault(b, {})[a] = c
        out = {}
        for b, xpart in blocks.items():
            for a, c in reduce_terms(xpart, self._reducer, DEGREVLEX, commutative_term_mul).items():
                out[(b, a)] = c
        return out

    def coordinates(self, P: WeylElement) -> dict:
        """Antinormal coordinates ``{(b, a): c}`` of the class of ``P``."""
        return self.reduce_antinormal(normal_to_antinormal(P.terms, self.N))

    def canon(self, P: WeylElement) -> WeylElement:
        if self.trivial or not P.terms:
            return P
        return WeylElement(self.N, antinormal_to_normal(self.coordinates(P), self.N))

    def is_zero(self, P: WeylElement) -> bool:
        return not self.coordinates(P)


def wedge_insert(k: int, rest: tuple):
    """``xi_k ^ rest`` as (sign, sorted wedge), or None if ``k`` already occurs."""
    pos = bisect_left(rest, k)
    if pos < len(rest) and rest[pos] == k:
        return None
    return (-1) ** pos, rest[:pos] + (k,) + rest[pos:]


@dataclass
class Cochain:
    """Element of ``M (x) wedge^ell g``: increasing wedge tuple -> coefficient."""

    ell: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, P in self.terms.items():
            w = tuple(w)
            if len(w) != self.ell:
                raise DimensionError(f"wedge {w} does not have length {self.ell}")
            if any(w[i] >= w[i + 1] for i in range(len(w) - 1)):
                raise ValueError(f"wedge {w} is not strictly increasing")
            if not P.is_zero():
                clean[w] = P
        self.terms = clean

    @property
    def degree(self) -> int:
        return -self.ell

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.ell == other.ell and self.terms == other.terms

    def to_text(self) -> str:
        lines = []
        for w in sorted(self.terms):
            lines.append("[" + "^".join(str(i) for i in w) + "] " + str(self.terms[w]))
        return "\n".join(lines)

    def __str__(self):
        return self.to_text() or "0"


def parse_cochain(text: str, nvars: int, ell: int | None = None) -> Cochain:
    """Parse lines ``[i1^i2^...] <operator>`` (0-based wedge indices, any order)."""
    acc: dict = {}
    found_ell = ell
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.startswith("[") or "]" not in line:
            raise ValueError(f"line {lineno}: expected '[i^j^...] operator'")
        head, body = line[1:].split("]", 1)
        idx = [int(t) for t in head.split("^") if t.strip()]
        if found_ell is None:
            found_ell = len(idx)
        elif len(idx) != found_ell:
            raise DimensionError(f"line {lineno}: mixed wedge degrees")
        # sort the wedge and track the sign of the permutation
        sign = 1
        arr = list(idx)
        for i in range(len(arr)):
            for j in range(len(arr) - 1 - i):
                if arr[j] > arr[j + 1]:
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
                    sign = -sign
        if len(set(arr)) != len(arr):
            continue
        P = parse_weyl(body, nvars) * sign
        w = tuple(arr)
        acc[w] = acc.get(w, WeylElement(nvars)) + P
    return Cochain(found_ell or 0, acc)


class CEComplex:
    """The complex ``M (x) wedge^* g`` with right action ``P.xi = P Z(xi) - twist(xi) P``."""

    def __init__(self, rep: RepData, Y: OrbitClosureData, twist: Character):
        if rep.N != Y.N:
            raise DimensionError("representation and orbit closure live on different spaces")
        if twist.lie != rep.lie:
            raise DimensionError("twist is a character of a different Lie algebra")
        self.rep = rep
        self.Y = Y
        self.twist = twist
        self.m = rep.lie.dim
        self.N = rep.N
        self.ring = CoefficientRing(Y.ideal)
        self.Z = [vector_field(rep, j) for j in range(self.m)]

    @classmethod
    def for_beta(cls, rep: RepData, Y: OrbitClosureData, beta: Character) -> "CEComplex":
        """The complex whose degree-zero cohomology is the tautological system for ``beta``."""
        return cls(rep, Y, beta_prime(rep, beta))

    def canon(self, P: WeylElement) -> WeylElement:
        return self.ring.canon(P)

    def canon_cochain(self, c: Cochain) -> Cochain:
        return Cochain(c.ell, {w: self.canon(P) for w, P in c.terms.items()})

    def right_action(self, P: WeylElement, j: int) -> WeylElement:
        return self.canon(P * self.Z[j] - P * self.twist[j])

    def differential(self, c: Cochain) -> Cochain:
        if c.ell < 1:
            raise ValueError("the differential is not defined on degree 0")
        structure = self.rep.lie.structure
        acc: dict = {}

        def add(w, P):
            acc[w] = acc[w] + P if w in acc else P

        for w, P in c.terms.items():
            ell = len(w)
            for i in range(ell):
                # i is the 0-based position of the removed factor
                add(w[:i] + w[i + 1:], self.right_action(P, w[i]) * (-1) ** i)
            for i in range(ell):
                for j in range(i + 1, ell):
                    rest = w[:i] + w[i + 1:j] + w[j + 1:]
                    sign = (-1) ** (i + j)
                    for k, ck in enumerate(structure[w[i]][w[j]]):
                        if not ck:
                            continue
                        ins = wedge_insert(k, rest)
                        if ins is None:
                            continue
                        s, nw = ins
                        add(nw, P * (sign * s * ck))
        return Cochain(c.ell - 1, {w: self.canon(P) for w, P in acc.items()})

    def h0_presentation(self, check_against: TautPresentation | None = None) -> WeylIdeal:
        """Ideal of ``I`` and the images ``1.xi_j``; optionally checked against a presentation."""
        gens = [WeylElement.from_poly(f) for f in self.Y.ideal.generators if not f.is_zero()]
        one = WeylElement.const(1, self.N)
        for j in range(self.m):
            img = self.differential(Cochain(1, {(j,): one}))
            gens.append(img.terms.get((), WeylElement(self.N)))
        J = WeylIdeal(gens, self.N)
        if check_against is not None and not J.same_ideal(check_against.weyl_ideal):
            raise DefectError("degree-zero cohomology ideal differs from the tautological presentation")
        return J

    def random_cochain(self, rng: random.Random, ell: int, max_degree: int = 3, nterms: int = 3,
                       coeff_range: int = 3) -> Cochain:
        """Random cochain with coefficients of Bernstein degree at most ``max_degree``."""
        wedges = list(combinations(range(self.m), ell))
        terms: dict = {}
        for _ in range(nterms):
            w = rng.choice(wedges)
            P = WeylElement(self.N)
            for _ in range(rng.randint(1, 3)):
                deg = rng.randint(0, max_degree)
                mono = [0] * (2 * self.N)
                for _ in range(deg):
                    mono[rng.randrange(2 * self.N)] += 1
                c = rng.randint(-coeff_range, coeff_range) or 1
                P = P + WeylElement(self.N, {tuple(mono): c})
            terms[w] = terms[w] + P if w in terms else P
        return self.canon_cochain(Cochain(ell, terms))


@dataclass
class CycleResult:
    passed: bool
    residual: Cochain


def cycle_check(c: Cochain, C: CEComplex) -> CycleResult:
    if c.ell == 0:
        # the complex ends in degree 0, so everything there is a cycle
        return CycleResult(True, Cochain(0))
    d = C.differential(c)
    return CycleResult(d.is_zero(), d)


# --------------------------------------------------------------------------
# Veronese example
# --------------------------------------------------------------------------


def veronese_setup(n: int, d: int) -> CEComplex:
    """``gl(n)`` on ``Sym^d``, the Veronese cone, twist ``trace(drho)`` (beta = 0)."""
    if n < 1 or d < 1:
        raise PreconditionError("n and d must be positive")
    if n % d:
        raise PreconditionError(f"d={d} must divide n={n}")
    rep = veronese_rep(n, d)
    Y = OrbitClosureData(veronese_ideal(n, d), n)
    return CEComplex(rep, Y, trace_drho(rep))


def _split_monomial(alpha: Sequence[int], d: int) -> list:
    """Greedy split of an exponent vector of degree ``k*d`` into ``k`` exponent vectors of degree ``d``."""
    flat = [i for i, e in enumerate(alpha) for _ in range(e)]
    chunks = []
    for s in range(0, len(flat), d):
        e = [0] * len(alpha)
        for i in flat[s:s + d]:
            e[i] += 1
        chunks.append(tuple(e))
    return chunks


def veronese_zeta(n: int, d: int, C: CEComplex | None = None) -> Cochain:
    """``sum_a (-1)^(a_1+...+a_n) x_a1...x_an  E_11^...^E_nn`` with each ``E_{i a_i}`` removed.

    Indices ``a_i`` are 1-based in the sign. The product ``x_a1...x_an`` is written
    in the ``Sym^d`` coordinates and reduced on the Veronese cone.
    """
    if n % d:
        raise PreconditionError(f"d={d} must divide n={n}")
    if C is None:
        C = veronese_setup(n, d)
    coords = {a: i for i, a in enumerate(monomial_exponents(n, d))}
    N = len(coords)
    full = tuple(range(n * n))
    terms: dict = {}

    def rec(i, picks):
        if i == n:
            yield tuple(picks)
            return
        for a in range(n):
            picks.append(a)
            yield from rec(i + 1, picks)
            picks.pop()

    for a in rec(0, []):
        removed = {i * n + a[i] for i in range(n)}
        w = tuple(k for k in full if k not in removed)
        alpha = [0] * n
        for ai in a:
            alpha[ai] += 1
        mono = [0] * (2 * N)
        for chunk in _split_monomial(alpha, d):
            mono[coords[chunk]] += 1
        sign = (-1) ** sum(ai + 1 for ai in a)
        P = WeylElement(N, {tuple(mono): sign})
        terms[w] = terms[w] + P if w in terms else P
    return C.canon_cochain(Cochain(n * n - n, terms))


# --------------------------------------------------------------------------
# truncated homology
# --------------------------------------------------------------------------


def slice_basis(C: CEComplex, weight: int, bernstein_cap: int) -> list:
    """Antinormal monomials ``(b, a)`` with ``|a| - |b| = weight``, ``|a| + |b| <= cap``
    and ``x^a`` standard modulo the ideal; these span the slice of ``D/D*I``."""
    N = C.N
    lms = [] if C.ring.trivial else [lm for lm, _, _ in C.ring._reducer]
    out = []
    for total in range(bernstein_cap + 1):
        if (total + weight) % 2:
            continue
        da = (total + weight) // 2
        db = (total - weight) // 2
        if da < 0 or db < 0:
            continue
        std = [a for a in monomial_exponents(N, da)
               if not any(all(x >= y for x, y in zip(a, lm)) for lm in lms)]
        for b in monomial_exponents(N, db):
            for a in std:
                out.append((b, a))
    return out


@dataclass
class ProfileRow:
    degree: int
    slice_dim: int
    term_dim: int
    rank_out: int          # rank of the differential leaving this degree
    boundaries: int        # images from degree - 1 that stay inside the cap
    apparent_homology: int


@dataclass
class HomologyProfile:
    weight: int
    bernstein_cap: int
    rows: list
    truncated: bool = True

    def apparent(self, degree: int) -> int:
        for r in self.rows:
            if r.degree == degree:
                return r.apparent_homology
        raise KeyError(degree)

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "bernstein_cap": self.bernstein_cap,
            "truncated": self.truncated,
            "rows": [r.__dict__ for r in self.rows],
        }


def _differential_ranks(C: CEComplex, basis: list, ell: int, cap: int):
    """Rank of ``delta`` on the slice in wedge degree ``ell`` and the rank of its
    component above the cap; their difference counts boundaries inside the cap."""
    if ell == 0:
        return 0, 0
    N = C.N
    full = SparseEchelon()
    high = SparseEchelon()
    index: dict = {}
    for w in combinations(range(C.m), ell):
        for b, a in basis:
            P = WeylElement(N, antinormal_to_normal({(b, a): Fraction(1)}, N))
            img = C.differential(Cochain(ell, {w: P}))
            row = {}
            hrow = {}
            for wt, Q in img.terms.items():
                for key, c in C.ring.coordinates(Q).items():
                    col = index.setdefault((wt, key), len(index))
                    row[col] = c
                    if sum(key[0]) + sum(key[1]) > cap:
                        hrow[col] = c
            full.add(row)
            if hrow:
                high.add(hrow)
    return full.rank, high.rank


def truncated_homology_profile(C: CEComplex, weight: int, bernstein_cap: int,
                               max_columns: int = 20000) -> HomologyProfile:
    """Apparent cohomology of the weight slice truncated at a Bernstein-degree cap.

    In each degree ``-l`` this reports ``dim Z - dim B`` where ``Z`` are the cycles
    of Bernstein degree at most the cap and ``B`` the boundaries of elements of
    degree at most the cap that themselves stay below the cap. A zero therefore
    means every cycle below the cap bounds; nonzero values may be artifacts.
    """
    if bernstein_cap < 0:
        raise ValueError("bernstein_cap must be non-negative")
    basis = slice_basis(C, weight, bernstein_cap)
    biggest = max(comb(C.m, l) for l in range(C.m + 1)) * len(basis)
    if biggest > max_columns:
        raise ResourceError(f"slice term of dimension {biggest} exceeds the limit {max_columns}",
                            partial={"slice_dim": len(basis)})
    ranks = {}
    for ell in range(C.m + 1):
        ranks[ell] = _differential_ranks(C, basis, ell, bernstein_cap)
    rows = []
    for ell in range(C.m + 1):
        term_dim = comb(C.m, ell) * len(basis)
        rank_out = ranks[ell][0]
        if ell + 1 <= C.m:
            full, high = ranks[ell + 1]
            bounds = full - high
        else:
            bounds = 0
        rows.append(ProfileRow(-ell, len(basis), term_dim, rank_out, bounds, term_dim - rank_out - bounds))
    return HomologyProfile(weight, bernstein_cap, rows)


__all__ = [
    "CEComplex", "Cochain", "CoefficientRing", "CycleResult", "HomologyProfile", "PreconditionError",
    "ProfileRow", "cycle_check", "parse_cochain", "slice_basis", "truncated_homology_profile",
    "veronese_setup", "veronese_zeta", "wedge_insert",
]
