"""The Weyl algebra ``D_N = Q<x1..xN, d1..dN>`` and its left ideals.

Elements are stored normally ordered: a term ``(a1..aN, b1..bN) -> c`` means
``c * x^a * d^b``. Left Groebner bases reuse the Buchberger engine of
:mod:`tautdual.exactpoly` with Weyl term multiplication.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Sequence

from .exactpoly import (
    DEGREVLEX,
    DimensionError,
    Poly,
    ResourceError,
    TermOrder,
    add_terms,
    buchberger,
    format_fraction,
    format_terms,
    parse_factor_tokens,
    reduce_terms,
    split_terms,
    to_fraction,
)


class ConfigurationError(ValueError):
    """A term order that cannot be used for left Groebner bases in D_N."""


def _leibniz(b: int, a: int):
    """Coefficients of ``d^b x^a = sum_k k! C(b,k) C(a,k) x^(a-k) d^(b-k)``."""
    return [(k, factorial(k) * comb(b, k) * comb(a, k)) for k in range(min(a, b) + 1)]


def _antileibniz(a: int, b: int):
    """Coefficients of ``x^a d^b = sum_k (-1)^k k! C(a,k) C(b,k) d^(b-k) x^(a-k)``."""
    return [(k, (-1) ** k * factorial(k) * comb(b, k) * comb(a, k)) for k in range(min(a, b) + 1)]


def weyl_term_mul(mono: tuple, coeff: Fraction, p: dict) -> dict:
    """Left multiplication ``coeff * x^alpha d^beta * p`` (all normally ordered)."""
    n = len(mono) // 2
    alpha, beta = mono[:n], mono[n:]
    out: dict = {}
    for m, c in p.items():
        a, b = m[:n], m[n:]
        if not any(beta[i] and a[i] for i in range(n)):
            key = tuple(x + y for x, y in zip(mono, m))
            out[key] = out.get(key, 0) + coeff * c
            continue
        choices = [_leibniz(beta[i], a[i]) for i in range(n)]
        for pick in product(*choices):
            mult = 1
            for _, w in pick:
                mult *= w
            ks = [k for k, _ in pick]
            key = tuple(alpha[i] + a[i] - ks[i] for i in range(n)) + tuple(beta[i] + b[i] - ks[i] for i in range(n))
            out[key] = out.get(key, 0) + coeff * c * mult
    return {k: v for k, v in out.items() if v}


def _mul_terms(p: dict, q: dict) -> dict:
    out: dict = {}
    for m, c in p.items():
        out = add_terms(out, weyl_term_mul(m, c, q))
    return out


def normal_to_antinormal(p: dict, n: int) -> dict:
    """Rewrite normally ordered terms as ``{(b, a): c}`` meaning ``c * d^b x^a``."""
    out: dict = {}
    for m, c in p.items():
        a, b = m[:n], m[n:]
        for pick in product(*[_antileibniz(a[i], b[i]) for i in range(n)]):
            mult = 1
            for _, w in pick:
                mult *= w
            key = (tuple(b[i] - pick[i][0] for i in range(n)), tuple(a[i] - pick[i][0] for i in range(n)))
            v = out.get(key, 0) + c * mult
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def antinormal_to_normal(p: dict, n: int) -> dict:
    """Inverse of :func:`normal_to_antinormal`."""
    out: dict = {}
    for (b, a), c in p.items():
        for pick in product(*[_leibniz(b[i], a[i]) for i in range(n)]):
            mult = 1
            for _, w in pick:
                mult *= w
            key = tuple(a[i] - pick[i][0] for i in range(n)) + tuple(b[i] - pick[i][0] for i in range(n))
            v = out.get(key, 0) + c * mult
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


class WeylElement:
    """Element of ``D_N``, normally ordered (all x's left of all d's). Immutable."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = int(nvars)
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != 2 * self.nvars:
                    raise DimensionError(f"Weyl monomial {m} needs {2 * self.nvars} exponents")
                c = to_fraction(c)
                if c:
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def const(cls, c, n):
        return cls(n, {(0,) * (2 * n): to_fraction(c)})

    @classmethod
    def x(cls, i, n):
        e = [0] * (2 * n)
        e[i] = 1
        return cls(n, {tuple(e): Fraction(1)})

    @classmethod
    def d(cls, i, n):
        e = [0] * (2 * n)
        e[n + i] = 1
        return cls(n, {tuple(e): Fraction(1)})

    @classmethod
    def from_poly(cls, p: Poly) -> "WeylElement":
        n = p.nvars
        return cls(n, {m + (0,) * n: c for m, c in p.terms.items()})

    @classmethod
    def parse(cls, text: str, nvars: int | None = None) -> "WeylElement":
        return parse_weyl(text, nvars)

    def _coerce(self, other) -> "WeylElement":
        if isinstance(other, WeylElement):
            if other.nvars != self.nvars:
                raise DimensionError(f"ambient dimensions differ: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise DimensionError(f"ambient dimensions differ: {self.nvars} vs {other.nvars}")
            return WeylElement.from_poly(other)
        return WeylElement.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        return WeylElement(self.nvars, add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return WeylElement(self.nvars, add_terms(self.terms, other.terms, Fraction(-1)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return WeylElement(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (WeylElement, Poly)):
            return weyl_mul(self, self._coerce(other))
        c = to_fraction(other)
        return WeylElement(self.nvars, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return weyl_mul(self._coerce(other), self)
        return self * other

    def __pow__(self, k: int):
        out = WeylElement.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == WeylElement.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def bernstein_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def weights(self) -> set:
        n = self.nvars
        return {sum(m[:n]) - sum(m[n:]) for m in self.terms}

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def commutator(self, other: "WeylElement") -> "WeylElement":
        return self * other - other * self

    def apply_to(self, f: Poly) -> Poly:
        """Act on a polynomial as a differential operator."""
        n = self.nvars
        if f.nvars != n:
            raise DimensionError("operator and polynomial live on different spaces")
        out = Poly(n)
        for m, c in self.terms.items():
            g = f
            for i in range(n):
                for _ in range(m[n + i]):
                    g = g.diff(i)
            out = out + Poly(n, {tuple(x + y for x, y in zip(m[:n], mm)): c * cc for mm, cc in g.terms.items()})
        return out

    def sorted_terms(self, order: TermOrder = DEGREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        return format_terms(self.sorted_terms(), _weyl_mono_parts(self.nvars))

    def __repr__(self):
        return f"WeylElement({self.nvars}, {str(self)!r})"


def _weyl_mono_parts(n):
    def parts(m):
        out = []
        for i in range(n):
            if m[i] == 1:
                out.append(f"x{i + 1}")
            elif m[i]:
                out.append(f"x{i + 1}^{m[i]}")
        for i in range(n):
            e = m[n + i]
            if e == 1:
                out.append(f"d{i + 1}")
            elif e:
                out.append(f"d{i + 1}^{e}")
        return out

    return parts


def parse_weyl(text: str, nvars: int | None = None) -> WeylElement:
    """Parse e.g. ``"x1 d1 - 2 d2^2"``. Factors multiply in written order, so
    ``"d1 x1"`` parses to ``x1 d1 + 1``."""
    parsed = []
    top = 0
    for sign, tokens in split_terms(text):
        coeff, factors = parse_factor_tokens(tokens, allow_d=True)
        parsed.append((sign * coeff, factors))
        for _, i, _ in factors:
            top = max(top, i + 1)
    n = top if nvars is None else nvars
    if top > n:
        raise DimensionError(f"{text!r} needs at least {top} variables, ring has {n}")
    total: dict = {}
    for c, factors in parsed:
        term = {(0,) * (2 * n): c}
        for kind, i, k in factors:
            e = [0] * (2 * n)
            e[i if kind == "x" else n + i] = k
            term = _mul_terms(term, {tuple(e): Fraction(1)})
        total = add_terms(total, term)
    return WeylElement(n, total)


def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    if a.nvars != b.nvars:
        raise DimensionError(f"ambient dimensions differ: {a.nvars} vs {b.nvars}")
    return WeylElement(a.nvars, _mul_terms(a.terms, b.terms))


# --------------------------------------------------------------------------
# left ideals
# --------------------------------------------------------------------------


class WeylIdeal:
    """Left ideal ``D * (g1, ..., gk)`` with a lock-protected left Groebner cache."""

    def __init__(self, generators: Sequence[WeylElement], nvars: int | None = None):
        gens = list(generators)
        if nvars is None:
            if not gens:
                raise ValueError("nvars is required for an ideal without generators")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise DimensionError(f"generator {g} is not in D_{nvars}")
        self.nvars = nvars
        self.generators = tuple(gens)
        self._gb: dict = {}
        self._lock = threading.Lock()

    def groebner_basis(self, order: TermOrder = DEGREVLEX, max_pairs: int | None = None) -> list:
        if not order.degree_compatible:
            raise ConfigurationError(f"term order {order.name} is not degree compatible")
        with self._lock:
            if order not in self._gb:
                gb = buchberger((g.terms for g in self.generators), order, weyl_term_mul,
                                commutative=False, max_pairs=max_pairs)
                self._gb[order] = [WeylElement(self.nvars, p) for p in gb]
            return self._gb[order]

    def reducer(self, order: TermOrder = DEGREVLEX) -> list:
        out = []
        for g in self.groebner_basis(order):
            lm = max(g.terms, key=order.key)
            out.append((lm, g.terms[lm], g.terms))
        return out

    def reduce(self, p: WeylElement, order: TermOrder = DEGREVLEX) -> WeylElement:
        return WeylElement(self.nvars, reduce_terms(p.terms, self.reducer(order), order, weyl_term_mul))

    def contains(self, p: WeylElement) -> bool:
        return self.reduce(p).is_zero()

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.groebner_basis())

    def same_ideal(self, other: "WeylIdeal") -> bool:
        return (all(other.contains(g) for g in self.generators)
                and all(self.contains(g) for g in other.generators))

    def normalized_by(self, theta: WeylElement) -> bool:
        """True if ``J * theta`` is contained in ``J``, so right multiplication
        by ``theta`` is well defined on ``D/J``."""
        return all(self.contains(g * theta) for g in self.generators)


def weyl_left_groebner(J: WeylIdeal, order: TermOrder = DEGREVLEX) -> list:
    return list(J.groebner_basis(order))


def weyl_normal_form(p: WeylElement, J: WeylIdeal, order: TermOrder = DEGREVLEX) -> WeylElement:
    return J.reduce(p, order)


# --------------------------------------------------------------------------
# univariate polynomials and the b-function engine
# --------------------------------------------------------------------------


def upoly_eval(coeffs: Sequence[Fraction], v) -> Fraction:
    """Evaluate ``sum coeffs[k] s^k`` at ``v`` (Horner)."""
    v = to_fraction(v)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * v + c
    return acc


def upoly_str(coeffs: Sequence[Fraction], var: str = "s") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mag = abs(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        body = mono if (mag == 1 and mono) else (format_fraction(mag) + (" " + mono if mono else ""))
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def upoly_derivative(coeffs: Sequence[Fraction]) -> list:
    return [k * coeffs[k] for k in range(1, len(coeffs))]


def upoly_compose_affine(coeffs: Sequence[Fraction], a, b) -> list:
    """Coefficients of ``p(a + b*s)``."""
    a, b = to_fraction(a), to_fraction(b)
    out = [Fraction(0)] * len(coeffs)
    power = [Fraction(1)]
    for c in coeffs:
        for k, pc in enumerate(power):
            out[k] += c * pc
        nxt = [Fraction(0)] * (len(power) + 1)
        for k, pc in enumerate(power):
            nxt[k] += a * pc
            nxt[k + 1] += b * pc
        power = nxt
    return out


def upoly_divmod_linear(coeffs: Sequence[Fraction], r) -> tuple:
    """Divide by ``(s - r)``; returns (quotient, remainder)."""
    r = to_fraction(r)
    n = len(coeffs) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for k in range(n, 0, -1):
        acc = acc * r + coeffs[k]
        q[k - 1] = acc
    return q, acc * r + coeffs[0]


def rational_roots(coeffs: Sequence[Fraction]) -> list:
    """Distinct rational roots, ascending (rational root theorem)."""
    from math import gcd, lcm

    coeffs = list(coeffs)
    roots = set()
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots.add(Fraction(0))
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return sorted(roots)
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]

    def divisors(v):
        v = abs(v)
        return [d for d in range(1, v + 1) if v % d == 0]

    for p in divisors(ints[0]):
        for q in divisors(ints[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if upoly_eval(coeffs, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


@dataclass(frozen=True)
class BFunction:
    """Monic ``b(s) = sum coefficients[k] s^k`` and the operator it was computed for."""

    coefficients: tuple
    theta: WeylElement | None = None

    def __post_init__(self):
        if not self.coefficients or self.coefficients[-1] != 1:
            raise ValueError("b-function must be monic")

    @classmethod
    def from_roots(cls, roots, theta=None):
        coeffs = [Fraction(1)]
        for r in roots:
            r = to_fraction(r)
            nxt = [Fraction(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                nxt[k + 1] += c
                nxt[k] -= r * c
            coeffs = nxt
        return cls(tuple(coeffs), theta)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, v) -> Fraction:
        return upoly_eval(self.coefficients, v)

    def roots(self) -> list:
        return rational_roots(self.coefficients)

    def __str__(self):
        return upoly_str(self.coefficients)

    def __eq__(self, other):
        return isinstance(other, BFunction) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)


@dataclass
class BFunctionResult:
    """Outcome of the minimal-polynomial search.

    ``status`` is ``"found"``, ``"zero-module"`` or ``"cap-exhausted"``.
    """

    status: str
    bfunction: BFunction | None = None
    residues: list = field(default_factory=list)
    certificate_ok: bool | None = None
    independent_below: bool | None = None
    divisor_witnesses: list = field(default_factory=list)


class ZeroModuleError(ValueError):
    """The cyclic module is zero, so its b-function is undefined."""


def _solve_dependency(residues: list):
    """Find c with ``residues[-1] + sum_{j<k} c_j residues[j] = 0``; None if impossible."""
    # Gaussian elimination on rows = monomials, columns = residues
    k = len(residues) - 1
    monos = sorted({m for r in residues for m in r.terms})
    rows = [[r.terms.get(m, Fraction(0)) for r in residues[:k]] + [-residues[k].terms.get(m, Fraction(0))]
            for m in monos]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][k] != 0:
            return None
    sol = [Fraction(0)] * k
    for i, col in enumerate(pivots):
        sol[col] = rows[i][k]
    return sol


def _independent(residues: list) -> bool:
    monos = sorted({m for r in residues for m in r.terms})
    rows = [[r.terms.get(m, Fraction(0)) for m in monos] for r in residues]
    rank = 0
    ncols = len(monos)
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank == len(rows)


def evaluate_at_operator(coeffs: Sequence[Fraction], theta: WeylElement) -> WeylElement:
    out = WeylElement(theta.nvars)
    power = WeylElement.const(1, theta.nvars)
    for c in coeffs:
        out = out + power * c
        power = power * theta
    return out


def minimal_polynomial_of_theta(J0: WeylIdeal, theta: WeylElement, cap: int = 16,
                                check_normalizes: bool = True) -> BFunctionResult:
    """Minimal monic ``b`` with ``b(theta)`` in ``J0``, by dependency search on the
    residues ``NF(theta^k)``.

    Raises :class:`ZeroModuleError` if ``J0`` is the unit ideal.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if J0.is_unit():
        raise ZeroModuleError("module is zero (1 lies in the ideal); b-function undefined")
    if check_normalizes and not J0.normalized_by(theta):
        raise ValueError("theta does not normalise the ideal; right multiplication is ill defined")
    one = WeylElement.const(1, J0.nvars)
    residues = [J0.reduce(one)]
    for k in range(1, cap + 1):
        # NF(P theta) = NF(NF(P) theta) because J0 * theta lies in J0
        residues.append(J0.reduce(residues[-1] * theta))
        sol = _solve_dependency(residues)
        if sol is None:
            continue
        b = BFunction(tuple(sol) + (Fraction(1),), theta)
        res = BFunctionResult("found", b, residues)
        res.certificate_ok = J0.contains(evaluate_at_operator(b.coefficients, theta))
        res.independent_below = _independent(residues[:-1])
        for r in b.roots():
            q, _ = upoly_divmod_linear(list(b.coefficients), r)
            if len(q) >= 1:
                rem = J0.reduce(evaluate_at_operator(q, theta))
                res.divisor_witnesses.append((r, upoly_str(q), not rem.is_zero()))
        return res
    return BFunctionResult("cap-exhausted", None, residues)


def is_root(b: BFunction, v) -> bool:
    return b(v) == 0


__all__ = [
    "BFunction", "BFunctionResult", "ConfigurationError", "WeylElement", "WeylIdeal",
    "ZeroModuleError", "antinormal_to_normal", "evaluate_at_operator", "is_root",
    "minimal_polynomial_of_theta", "normal_to_antinormal", "parse_weyl", "rational_roots",
    "upoly_compose_affine", "upoly_derivative", "upoly_eval", "upoly_str", "weyl_left_groebner",
    "weyl_mul", "weyl_normal_form", "weyl_term_mul", "ResourceError",
]
