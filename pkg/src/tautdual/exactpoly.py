"""Exact multivariate polynomials over Q, term orders and Groebner bases.

Polynomials are sparse maps from exponent tuples to :class:`fractions.Fraction`.
The Buchberger engine here is shared with :mod:`tautdual.weyl`; it is
parametrised by the left multiplication of a term with a polynomial, so the
same pair bookkeeping serves the commutative ring and the Weyl algebra.
"""

from __future__ import annotations

import heapq
import re
import threading
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Mono = tuple  # tuple[int, ...]
Terms = dict  # dict[Mono, Fraction]


class DimensionError(ValueError):
    """Operands live in rings with different numbers of variables."""


class ResourceError(RuntimeError):
    """A configured computation budget was exhausted.

    ``partial`` carries whatever data had been produced when the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# --------------------------------------------------------------------------
# term orders
# --------------------------------------------------------------------------


class TermOrder:
    """A monomial order given by an integer sort key (larger key = larger monomial)."""

    def __init__(self, name: str, keyfunc: Callable[[Mono], tuple], degree_compatible: bool):
        self.name = name
        self._keyfunc = keyfunc
        self.degree_compatible = degree_compatible
        self._cache: dict = {}

    def key(self, m: Mono) -> tuple:
        k = self._cache.get(m)
        if k is None:
            k = self._keyfunc(m)
            self._cache[m] = k
        return k

    def __repr__(self):
        return f"TermOrder({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, TermOrder) and other.name == self.name

    def __hash__(self):
        return hash(self.name)


def _degrevlex_key(m):
    return (sum(m),) + tuple(-e for e in reversed(m))


DEGREVLEX = TermOrder("degrevlex", _degrevlex_key, True)
LEX = TermOrder("lex", tuple, False)


def weighted_order(weights: Sequence[int]) -> TermOrder:
    """Weight order with degrevlex tie-break."""
    w = tuple(int(x) for x in weights)

    def key(m):
        return (sum(a * b for a, b in zip(w, m)),) + _degrevlex_key(m)

    return TermOrder(f"weighted{list(w)}", key, all(x > 0 for x in w))


def elimination_order(k: int) -> TermOrder:
    """Block order: degrevlex on the first ``k`` variables, then degrevlex on the rest."""

    def key(m):
        return _degrevlex_key(m[:k]) + _degrevlex_key(m[k:])

    return TermOrder(f"elim{k}", key, True)


def order_by_name(name: str) -> TermOrder:
    name = name.strip().lower()
    if name == "degrevlex":
        return DEGREVLEX
    if name == "lex":
        return LEX
    m = re.fullmatch(r"weighted\[?([-\d,\s]+)\]?", name)
    if m:
        return weighted_order([int(t) for t in m.group(1).split(",") if t.strip()])
    raise ValueError(f"unknown term order {name!r}")


# --------------------------------------------------------------------------
# Poly
# --------------------------------------------------------------------------


class Poly:
    """Polynomial in ``x1..xN`` with rational coefficients. Treated as immutable."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = int(nvars)
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != self.nvars:
                    raise DimensionError(f"monomial {m} does not have {self.nvars} exponents")
                c = to_fraction(c)
                if c:
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, c, nvars):
        return cls(nvars, {(0,) * nvars: to_fraction(c)})

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps, c=1):
        return cls(len(exps), {tuple(exps): to_fraction(c)})

    @classmethod
    def parse(cls, text: str, nvars: int | None = None) -> "Poly":
        return parse_poly(text, nvars)

    # arithmetic
    def _check(self, other):
        if not isinstance(other, Poly):
            return False
        if other.nvars != self.nvars:
            raise DimensionError(f"ambient dimensions differ: {self.nvars} vs {other.nvars}")
        return True

    def __add__(self, other):
        if not self._check(other):
            other = Poly.const(other, self.nvars)
        return Poly(self.nvars, add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not self._check(other):
            other = Poly.const(other, self.nvars)
        return Poly(self.nvars, add_terms(self.terms, other.terms, Fraction(-1)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not self._check(other):
            c = to_fraction(other)
            return Poly(self.nvars, {m: c * v for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self, weights=None) -> bool:
        w = weights or (1,) * self.nvars
        degs = {sum(a * b for a, b in zip(w, m)) for m in self.terms}
        return len(degs) <= 1

    def leading_monomial(self, order: TermOrder = DEGREVLEX) -> Mono:
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: TermOrder = DEGREVLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def diff(self, i: int) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Poly(self.nvars, out)

    def sorted_terms(self, order: TermOrder = DEGREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        return format_terms(self.sorted_terms(), _format_x_mono)

    def __repr__(self):
        return f"Poly({self.nvars}, {str(self)!r})"


def add_terms(a: dict, b: dict, scale: Fraction = Fraction(1)) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if a.nvars != b.nvars:
        raise DimensionError(f"ambient dimensions differ: {a.nvars} vs {b.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------


def _format_x_mono(m):
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e:
            parts.append(f"x{i + 1}^{e}")
    return parts


def format_terms(sorted_terms, mono_parts) -> str:
    if not sorted_terms:
        return "0"
    out = []
    for idx, (m, c) in enumerate(sorted_terms):
        parts = mono_parts(m)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = parts if mag == 1 and parts else [format_fraction(mag)] + parts
        text = " ".join(body)
        if idx == 0:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"([xd])(\d+)(?:\^(\d+))?$")
_COEFF = re.compile(r"\d+(?:/\d+)?$")


def split_terms(text: str):
    """Yield ``(sign, factor_tokens)`` for each ``+``/``-`` separated term."""
    text = text.strip()
    if not text:
        raise ValueError("empty expression")
    pieces = _TERM_SPLIT.split(text)
    sign = 1
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    for i in range(0, len(pieces), 2):
        op, body = pieces[i], pieces[i + 1] if i + 1 < len(pieces) else ""
        sign = -1 if op == "-" else 1
        tokens = [t for t in re.split(r"[\s*]+", body) if t]
        if not tokens:
            raise ValueError(f"dangling sign in {text!r}")
        yield sign, tokens


def parse_factor_tokens(tokens, allow_d: bool):
    """Return (coefficient, [(kind, index0, exponent), ...]) in written order."""
    coeff = Fraction(1)
    factors = []
    for tok in tokens:
        if _COEFF.match(tok):
            coeff *= Fraction(tok)
            continue
        m = _FACTOR.match(tok)
        if not m:
            raise ValueError(f"cannot parse factor {tok!r}")
        kind, idx, exp = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        if kind == "d" and not allow_d:
            raise ValueError(f"derivative symbol {tok!r} in a commutative polynomial")
        if idx < 1:
            raise ValueError(f"variables are numbered from 1: {tok!r}")
        factors.append((kind, idx - 1, exp))
    return coeff, factors


def parse_poly(text: str, nvars: int | None = None) -> Poly:
    """Parse e.g. ``"-3/2 x1^2 x3 + x2"``; ``nvars`` defaults to the largest index seen."""
    parsed = []
    top = 0
    for sign, tokens in split_terms(text):
        coeff, factors = parse_factor_tokens(tokens, allow_d=False)
        parsed.append((sign * coeff, factors))
        for _, i, _ in factors:
            top = max(top, i + 1)
    n = top if nvars is None else nvars
    if top > n:
        raise DimensionError(f"{text!r} uses x{top} but the ring has {n} variables")
    out: dict = {}
    for c, factors in parsed:
        e = [0] * n
        for _, i, k in factors:
            e[i] += k
        m = tuple(e)
        out[m] = out.get(m, 0) + c
    return Poly(n, out)


# --------------------------------------------------------------------------
# Groebner engine (shared with the Weyl algebra)
# --------------------------------------------------------------------------


def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Mono, b: Mono) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def commutative_term_mul(mono: Mono, coeff: Fraction, p: dict) -> dict:
    return {tuple(x + y for x, y in zip(mono, m)): coeff * c for m, c in p.items()}


class _Basis:
    """Polynomials with cached leading data, for one term order."""

    def __init__(self, order: TermOrder):
        self.order = order
        self.polys: list = []
        self.lms: list = []
        self.lcs: list = []

    def add(self, p: dict) -> int:
        lm = max(p, key=self.order.key)
        self.polys.append(p)
        self.lms.append(lm)
        self.lcs.append(p[lm])
        return len(self.polys) - 1


def reduce_terms(p: dict, basis: Sequence[tuple], order: TermOrder, term_mul, full: bool = True) -> dict:
    """Remainder of ``p`` modulo ``basis`` = [(lm, lc, polydict), ...].

    ``term_mul(mono, coeff, poly)`` is left multiplication by a term.
    """
    p = dict(p)
    if not p or not basis:
        return p
    key = order.key
    rem: dict = {}
    heap = [(tuple(-k for k in key(m)), m) for m in p]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        for lm, lc, g in basis:
            if _divides(lm, m):
                shift = tuple(a - b for a, b in zip(m, lm))
                prod = term_mul(shift, -c / lc, g)
                for mm, cc in prod.items():
                    v = p.get(mm)
                    if v is None:
                        p[mm] = cc
                        heapq.heappush(heap, (tuple(-k for k in key(mm)), mm))
                    else:
                        v += cc
                        if v:
                            p[mm] = v
                        else:
                            del p[mm]
                break
        else:
            rem[m] = c
            del p[m]
            if not full:
                rem.update(p)
                return rem
    return rem


def buchberger(gens: Iterable[dict], order: TermOrder, term_mul=commutative_term_mul,
               commutative: bool = True, max_pairs: int | None = None) -> list:
    """Reduced Groebner basis (as monic term dicts) of the (left) ideal spanned by ``gens``.

    Pair management follows Gebauer-Moeller; the coprime-leading-monomial
    criterion is only applied when ``commutative`` is true.
    """
    B = _Basis(order)
    key = order.key
    G: list = []
    pairs: set = set()
    processed = 0

    def basis_view():
        return [(B.lms[i], B.lcs[i], B.polys[i]) for i in G]

    def update(h: int):
        nonlocal G, pairs
        lh = B.lms[h]
        C = list(G)
        D: list = []
        lcm_of = {g: _lcm(lh, B.lms[g]) for g in C}
        while C:
            g1 = C.pop()
            l1 = lcm_of[g1]
            if commutative and _coprime(lh, B.lms[g1]):
                D.append(g1)
                continue
            if any(_divides(lcm_of[g2], l1) for g2 in C) or any(_divides(lcm_of[g2], l1) for g2 in D):
                continue
            D.append(g1)
        E = [g for g in D if not (commutative and _coprime(lh, B.lms[g]))]
        kept = set()
        for (g1, g2) in pairs:
            l12 = _lcm(B.lms[g1], B.lms[g2])
            if (_divides(lh, l12) and _lcm(B.lms[g1], lh) != l12 and _lcm(lh, B.lms[g2]) != l12):
                continue
            kept.add((g1, g2))
        for g in E:
            kept.add((g, h))
        pairs = kept
        G = [g for g in G if not _divides(lh, B.lms[g])] + [h]

    # seed with interreduced input, smallest first keeps pair lcms low
    seeds = [dict(g) for g in gens if g]
    seeds.sort(key=lambda p: key(max(p, key=key)))
    for p in seeds:
        r = reduce_terms(p, basis_view(), order, term_mul)
        if r:
            update(B.add(r))

    while pairs:
        best = min(pairs, key=lambda pr: (key(_lcm(B.lms[pr[0]], B.lms[pr[1]])), pr))
        pairs.discard(best)
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise ResourceError(f"Groebner pair budget {max_pairs} exhausted",
                                partial=[B.polys[i] for i in G])
        i, j = best
        l = _lcm(B.lms[i], B.lms[j])
        s = add_terms(
            term_mul(tuple(a - b for a, b in zip(l, B.lms[i])), 1 / B.lcs[i], B.polys[i]),
            term_mul(tuple(a - b for a, b in zip(l, B.lms[j])), 1 / B.lcs[j], B.polys[j]),
            Fraction(-1),
        )
        r = reduce_terms(s, basis_view(), order, term_mul)
        if r:
            update(B.add(r))
    return _interreduce([B.polys[i] for i in G], order, term_mul)


def _interreduce(polys: list, order: TermOrder, term_mul) -> list:
    key = order.key
    polys = [p for p in polys if p]
    lms = [max(p, key=key) for p in polys]
    # minimal basis: drop elements whose leading monomial is divisible by another's
    keep = []
    for i, lm in enumerate(lms):
        dominated = False
        for j, other in enumerate(lms):
            if j != i and _divides(other, lm) and (other != lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    basis = [polys[i] for i in keep]
    basis.sort(key=lambda p: key(max(p, key=key)))
    out = []
    for idx, p in enumerate(basis):
        others = [(max(q, key=key), q[max(q, key=key)], q) for k, q in enumerate(basis) if k != idx]
        r = reduce_terms(p, others, order, term_mul)
        lm = max(r, key=key)
        lc = r[lm]
        out.append({m: c / lc for m, c in r.items()})
    out.sort(key=lambda p: key(max(p, key=key)))
    return out


# --------------------------------------------------------------------------
# ideals
# --------------------------------------------------------------------------


class PolyIdeal:
    """Ideal of ``Q[x1..xN]`` with a lazily computed, lock-protected Groebner cache."""

    def __init__(self, generators: Sequence[Poly], nvars: int | None = None):
        gens = list(generators)
        if nvars is None:
            if not gens:
                raise ValueError("nvars is required for an ideal without generators")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise DimensionError(f"generator {g} is not in a ring with {nvars} variables")
        self.nvars = nvars
        self.generators = tuple(gens)
        self._gb: dict = {}
        self._lock = threading.Lock()

    def groebner_basis(self, order: TermOrder = DEGREVLEX) -> list:
        with self._lock:
            if order not in self._gb:
                gb = buchberger((g.terms for g in self.generators), order)
                self._gb[order] = [Poly(self.nvars, p) for p in gb]
            return self._gb[order]

    def reducer(self, order: TermOrder = DEGREVLEX) -> list:
        return [(g.leading_monomial(order), g.leading_coefficient(order), g.terms)
                for g in self.groebner_basis(order)]

    def reduce(self, p: Poly, order: TermOrder = DEGREVLEX) -> Poly:
        return Poly(self.nvars, reduce_terms(p.terms, self.reducer(order), order, commutative_term_mul))

    def contains(self, p: Poly) -> bool:
        return self.reduce(p).is_zero()

    def is_unit(self) -> bool:
        return any(g.degree() == 0 for g in self.groebner_basis())

    def is_zero_ideal(self) -> bool:
        return not self.groebner_basis()

    def leading_monomials(self, order: TermOrder = DEGREVLEX) -> list:
        return [g.leading_monomial(order) for g in self.groebner_basis(order)]

    def is_standard(self, m: Mono, order: TermOrder = DEGREVLEX) -> bool:
        """True if ``m`` is not divisible by any leading monomial of the basis."""
        return not any(_divides(lm, m) for lm in self.leading_monomials(order))

    def same_ideal(self, other: "PolyIdeal") -> bool:
        return (all(other.contains(g) for g in self.generators)
                and all(self.contains(g) for g in other.generators))

    def __repr__(self):
        return f"PolyIdeal([{', '.join(str(g) for g in self.generators)}])"


def groebner(I: PolyIdeal, order: TermOrder = DEGREVLEX) -> list:
    return list(I.groebner_basis(order))


def normal_form(p: Poly, I: PolyIdeal, order: TermOrder = DEGREVLEX) -> Poly:
    return I.reduce(p, order)


def minimal_generators(I: PolyIdeal, weights=None) -> list:
    """Minimal generating set of a homogeneous ideal (positive grading ``weights``)."""
    w = weights or (1,) * I.nvars
    gb = I.groebner_basis()
    for g in gb:
        if not g.is_homogeneous(w):
            raise ValueError(f"{g} is not homogeneous for weights {list(w)}")
    ordered = sorted(gb, key=lambda g: (sum(a * b for a, b in zip(w, next(iter(g.terms)))), DEGREVLEX.key(g.leading_monomial())))
    kept: list = []
    for g in ordered:
        if kept and PolyIdeal(kept, I.nvars).contains(g):
            continue
        kept.append(g)
    return kept


# --------------------------------------------------------------------------
# toric ideals
# --------------------------------------------------------------------------


def integer_kernel_basis(A: Sequence[Sequence[int]]) -> list:
    """Basis of the saturated lattice ``{u in Z^N : A u = 0}``.

    Column-style Hermite reduction of ``[A; I]``: unimodular column operations
    bring ``A`` to echelon form, and the identity block records them.
    """
    d = len(A)
    N = len(A[0]) if d else 0
    cols = [[int(A[r][c]) for r in range(d)] + [1 if k == c else 0 for k in range(N)] for c in range(N)]
    piv_col = 0
    for r in range(d):
        if piv_col >= N:
            break
        while True:
            nz = [c for c in range(piv_col, N) if cols[c][r] != 0]
            if not nz:
                break
            best = min(nz, key=lambda c: abs(cols[c][r]))
            cols[piv_col], cols[best] = cols[best], cols[piv_col]
            done = True
            for c in range(piv_col + 1, N):
                if cols[c][r]:
                    q = cols[c][r] // cols[piv_col][r]
                    cols[c] = [a - q * b for a, b in zip(cols[c], cols[piv_col])]
                    if cols[c][r]:
                        done = False
            if done:
                piv_col += 1
                break
    return [col[d:] for col in cols[piv_col:]]


def _binomial(u: Sequence[int], nvars: int, offset: int = 0) -> dict:
    plus = [0] * nvars
    minus = [0] * nvars
    for i, x in enumerate(u):
        if x > 0:
            plus[i + offset] = x
        elif x < 0:
            minus[i + offset] = -x
    return add_terms({tuple(plus): Fraction(1)}, {tuple(minus): Fraction(1)}, Fraction(-1))


def toric_ideal(A: Sequence[Sequence[int]], max_pairs: int | None = 20000) -> PolyIdeal:
    """Toric ideal ``I_A``: lattice-basis binomials saturated by ``x1*...*xN``.

    Saturation adds ``t*x1*...*xN - 1`` and eliminates ``t``.
    """
    A = [[int(v) for v in row] for row in A]
    N = len(A[0])
    for c in range(N):
        if all(row[c] == 0 for row in A):
            raise ValueError(f"column {c} of A is zero")
    basis = integer_kernel_basis(A)
    if not basis:
        return PolyIdeal([], N)
    gens = [_binomial(u, N + 1, offset=1) for u in basis]
    gens.append(add_terms({(1,) * (N + 1): Fraction(1)}, {(0,) * (N + 1): Fraction(1)}, Fraction(-1)))
    order = elimination_order(1)
    try:
        gb = buchberger(gens, order, max_pairs=max_pairs)
    except ResourceError as exc:
        raise ResourceError(f"toric saturation: {exc}", partial=exc.partial) from exc
    eliminated = [Poly(N, {m[1:]: c for m, c in p.items()}) for p in gb if all(m[0] == 0 for m in p)]
    ideal = PolyIdeal(eliminated, N)
    return PolyIdeal(ideal.groebner_basis(), N)


def monomial_exponents(nvars: int, degree: int):
    """All exponent vectors of the given total degree, lex-descending."""
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomial_exponents(nvars - 1, degree - first):
            yield (first,) + rest


__all__ = [
    "DEGREVLEX", "LEX", "DimensionError", "Poly", "PolyIdeal", "ResourceError", "TermOrder",
    "buchberger", "elimination_order", "groebner", "integer_kernel_basis", "minimal_generators",
    "monomial_exponents", "normal_form", "order_by_name", "parse_poly", "poly_arith",
    "reduce_terms", "to_fraction", "toric_ideal", "weighted_order",
]
