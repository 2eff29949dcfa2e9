"""Lie algebras by structure constants, their representations, and characters.

Conventions: ``[xi_i, xi_j] = sum_k c[i][j][k] xi_k`` and the induced vector
field ``Z(xi) = -sum_{k,l} drho(xi)[k][l] x_l d_k``. With this sign ``xi -> Z(xi)``
is a Lie algebra homomorphism into the Weyl algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, prod
from typing import Sequence

from . import linalg
from .exactpoly import DimensionError, format_fraction, monomial_exponents, to_fraction
from .weyl import WeylElement


class DataInconsistencyError(ValueError):
    """Input data violates an algebraic identity (antisymmetry, Jacobi, homomorphism...)."""


def _frac_matrix(M) -> tuple:
    return tuple(tuple(to_fraction(v) for v in row) for row in M)


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q, validated at construction."""

    def __init__(self, dim: int, brackets: dict | None = None, labels: Sequence[str] | None = None,
                 scaling_element: int | None = None):
        self.dim = int(dim)
        if self.dim < 1:
            raise ValueError("Lie algebra dimension must be positive")
        m = self.dim
        c = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
        for (i, j), vec in (brackets or {}).items():
            if not (0 <= i < m and 0 <= j < m):
                raise DataInconsistencyError(f"bracket entry ({i},{j}) out of range for dim {m}")
            if len(vec) != m:
                raise DataInconsistencyError(f"bracket entry ({i},{j}) needs {m} coefficients, got {len(vec)}")
            vec = [to_fraction(v) for v in vec]
            if i == j:
                if any(vec):
                    raise DataInconsistencyError(f"bracket entry ({i},{j}): [x,x] must vanish")
                continue
            for target, sign in (((i, j), 1), ((j, i), -1)):
                a, b = target
                existing = c[a][b]
                new = [sign * v for v in vec]
                if any(existing) and existing != new:
                    raise DataInconsistencyError(f"bracket entry ({i},{j}) is not antisymmetric")
                c[a][b] = new
        self.structure = tuple(tuple(tuple(v) for v in row) for row in c)
        self.labels = tuple(labels) if labels else tuple(f"xi{i + 1}" for i in range(m))
        if len(self.labels) != m:
            raise DimensionError("one label per basis element required")
        if scaling_element is not None and not 0 <= scaling_element < m:
            raise DataInconsistencyError(f"scaling element index {scaling_element} out of range")
        self.scaling_element = scaling_element
        self._check_jacobi()

    def _check_jacobi(self):
        m, c = self.dim, self.structure
        for i in range(m):
            for j in range(i + 1, m):
                for k in range(j + 1, m):
                    for r in range(m):
                        s = sum((c[i][j][l] * c[l][k][r] + c[j][k][l] * c[l][i][r] + c[k][i][l] * c[l][j][r]
                                 for l in range(m)), Fraction(0))
                        if s:
                            raise DataInconsistencyError(f"Jacobi identity fails for ({i},{j},{k}) at component {r}")

    def bracket_of_basis(self, i: int, j: int) -> tuple:
        return self.structure[i][j]

    def bracket(self, u: Sequence, v: Sequence) -> list:
        m = self.dim
        out = [Fraction(0)] * m
        for i in range(m):
            if not u[i]:
                continue
            for j in range(m):
                if not v[j]:
                    continue
                for k, cc in enumerate(self.structure[i][j]):
                    if cc:
                        out[k] += u[i] * v[j] * cc
        return out

    def is_abelian(self) -> bool:
        return not any(any(v) for row in self.structure for v in row)

    def derived_rank(self, indices: Sequence[int] | None = None) -> int:
        """Dimension of the span of all brackets among the given basis elements."""
        idx = list(range(self.dim)) if indices is None else list(indices)
        rows = [self.structure[i][j] for a, i in enumerate(idx) for j in idx[a + 1:]]
        return linalg.rank(rows) if rows else 0

    def is_perfect(self) -> bool:
        return self.derived_rank() == self.dim

    def complement_indices(self) -> list:
        """Basis indices other than the flagged scaling element."""
        return [i for i in range(self.dim) if i != self.scaling_element]

    def subalgebra_is_perfect(self, indices: Sequence[int]) -> bool:
        """True if the listed basis elements span a subalgebra equal to its own derived algebra."""
        idx = list(indices)
        if not idx:
            return True
        rows = [self.structure[i][j] for a, i in enumerate(idx) for j in idx[a + 1:]]
        outside = [k for k in range(self.dim) if k not in idx]
        if any(r[k] for r in rows for k in outside):
            return False
        return (linalg.rank([[r[k] for k in idx] for r in rows]) if rows else 0) == len(idx)

    def to_json(self) -> dict:
        entries = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if any(self.structure[i][j]):
                    entries.append([i, j, [format_fraction(v) for v in self.structure[i][j]]])
        out = {"dim": self.dim, "brackets": entries, "labels": list(self.labels)}
        if self.scaling_element is not None:
            out["scaling_element"] = self.scaling_element
        return out

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.structure == other.structure \
            and self.scaling_element == other.scaling_element

    def __hash__(self):
        return hash((self.structure, self.scaling_element))

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, labels={list(self.labels)})"


@dataclass(frozen=True)
class Character:
    """Linear functional on ``lie`` vanishing on brackets."""

    lie: LieAlgebra
    values: tuple

    def __post_init__(self):
        vals = tuple(to_fraction(v) for v in self.values)
        if len(vals) != self.lie.dim:
            raise DimensionError(f"character needs {self.lie.dim} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)
        m = self.lie.dim
        for i in range(m):
            for j in range(i + 1, m):
                if sum((c * v for c, v in zip(self.lie.structure[i][j], vals)), Fraction(0)):
                    raise DataInconsistencyError(
                        f"not a character: does not vanish on [{self.lie.labels[i]},{self.lie.labels[j]}]")

    @classmethod
    def zero(cls, lie):
        return cls(lie, (0,) * lie.dim)

    @classmethod
    def scaling(cls, lie, value):
        """Character that is ``value`` on the scaling element and 0 elsewhere."""
        if lie.scaling_element is None:
            raise DataInconsistencyError("Lie algebra has no flagged scaling element")
        vals = [0] * lie.dim
        vals[lie.scaling_element] = value
        return cls(lie, tuple(vals))

    def __getitem__(self, j):
        return self.values[j]

    def at_scaling(self) -> Fraction:
        if self.lie.scaling_element is None:
            raise DataInconsistencyError("Lie algebra has no flagged scaling element")
        return self.values[self.lie.scaling_element]

    def _check(self, other):
        if not isinstance(other, Character) or other.lie != self.lie:
            raise DimensionError("characters live on different Lie algebras")

    def __add__(self, other):
        self._check(other)
        return Character(self.lie, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._check(other)
        return Character(self.lie, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return Character(self.lie, tuple(-a for a in self.values))

    def to_json(self) -> list:
        return [format_fraction(v) for v in self.values]

    def __str__(self):
        return "(" + ", ".join(format_fraction(v) for v in self.values) + ")"


def character_arith(a: Character, b: Character | None, op: str) -> Character:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "negate":
        return -a
    raise ValueError(f"unknown character operation {op!r}")


class RepData:
    """Representation ``drho`` of ``lie`` on Q^N, checked to be a homomorphism."""

    def __init__(self, lie: LieAlgebra, matrices: Sequence):
        self.lie = lie
        mats = tuple(_frac_matrix(M) for M in matrices)
        if len(mats) != lie.dim:
            raise DimensionError(f"need {lie.dim} matrices, got {len(mats)}")
        self.N = len(mats[0]) if mats else 0
        for j, M in enumerate(mats):
            if len(M) != self.N or any(len(r) != self.N for r in M):
                raise DimensionError(f"matrix {j} is not {self.N}x{self.N}")
        self.matrices = mats
        self._check_homomorphism()
        e = lie.scaling_element
        if e is not None and [list(r) for r in mats[e]] != linalg.identity(self.N):
            raise DataInconsistencyError("the scaling element must act as the identity")

    def _check_homomorphism(self):
        m = self.lie.dim
        for i in range(m):
            for j in range(i + 1, m):
                lhs = linalg.commutator(self.matrices[i], self.matrices[j])
                rhs = self.matrix_of(self.lie.structure[i][j])
                if lhs != rhs:
                    raise DataInconsistencyError(
                        f"matrices do not respect the bracket [{self.lie.labels[i]},{self.lie.labels[j]}]")

    def matrix_of(self, vec: Sequence) -> list:
        out = linalg.zeros(self.N)
        for k, c in enumerate(vec):
            if c:
                out = linalg.mat_add(out, linalg.mat_scale(self.matrices[k], c))
        return out

    @cached_property
    def vector_fields(self) -> tuple:
        return tuple(_vector_field_from_matrix(M) for M in self.matrices)

    def to_json(self) -> dict:
        return {"N": self.N, "matrices": [[[format_fraction(v) for v in row] for row in M] for M in self.matrices]}

    def __repr__(self):
        return f"RepData(N={self.N}, {self.lie!r})"


def _vector_field_from_matrix(M) -> WeylElement:
    N = len(M)
    terms = {}
    for k in range(N):
        for l in range(N):
            if M[k][l]:
                mono = [0] * (2 * N)
                mono[l] += 1
                mono[N + k] += 1
                terms[tuple(mono)] = terms.get(tuple(mono), 0) - M[k][l]
    return WeylElement(N, terms)


def vector_field(rep: RepData, j: int) -> WeylElement:
    """``Z(xi_j) = -sum_{k,l} drho(xi_j)[k][l] x_l d_k``."""
    if not 0 <= j < rep.lie.dim:
        raise IndexError(f"basis index {j} out of range")
    return rep.vector_fields[j]


def check_bracket_compatibility(rep: RepData) -> list:
    """Basis pairs (i, j) where ``[Z_i, Z_j] != Z([xi_i, xi_j])``; empty when compatible."""
    Z = rep.vector_fields
    bad = []
    for i in range(rep.lie.dim):
        for j in range(i + 1, rep.lie.dim):
            rhs = WeylElement(rep.N)
            for k, c in enumerate(rep.lie.structure[i][j]):
                if c:
                    rhs = rhs + Z[k] * c
            if Z[i].commutator(Z[j]) != rhs:
                bad.append((i, j))
    return bad


def trace_drho(rep: RepData) -> Character:
    try:
        return Character(rep.lie, tuple(linalg.trace(M) for M in rep.matrices))
    except DataInconsistencyError as exc:
        raise DataInconsistencyError(f"trace of drho is not a character: {exc}") from exc


def trace_ad(lie: LieAlgebra) -> Character:
    return Character(lie, tuple(sum((lie.structure[i][j][j] for j in range(lie.dim)), Fraction(0))
                                for i in range(lie.dim)))


def beta_prime(rep: RepData, beta: Character) -> Character:
    """``beta' = trace(drho) - beta``."""
    return trace_drho(rep) - beta


# --------------------------------------------------------------------------
# standard algebras and representations
# --------------------------------------------------------------------------


def gl_algebra(n: int) -> LieAlgebra:
    """``gl(n)`` with basis ``E_ij`` in row-major order (index ``i*n + j``)."""
    m = n * n
    br = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    a, b = i * n + j, k * n + l
                    if a >= b:
                        continue
                    # [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
                    vec = [0] * m
                    if j == k:
                        vec[i * n + l] += 1
                    if l == i:
                        vec[k * n + j] -= 1
                    if any(vec):
                        br[(a, b)] = vec
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return LieAlgebra(m, br, labels)


def elementary_matrix(n: int, i: int, j: int) -> list:
    M = [[Fraction(0)] * n for _ in range(n)]
    M[i][j] = Fraction(1)
    return M


def sym_power_matrix(X: Sequence[Sequence], n: int, d: int) -> list:
    """Matrix of ``X in gl(n)`` acting on ``Sym^d Q^n``.

    The basis is ``multinomial(alpha) * x^alpha`` for ``|alpha| = d`` in
    lex-descending order, so that the coordinates of ``v^d`` are the monomials
    ``v^alpha`` and the Veronese cone is cut out by binomials with coefficient 1.
    """
    basis = list(monomial_exponents(n, d))
    idx = {a: i for i, a in enumerate(basis)}
    weight = [Fraction(factorial(d), prod(factorial(t) for t in a)) for a in basis]
    N = len(basis)
    M = [[Fraction(0)] * N for _ in range(N)]
    for col, a in enumerate(basis):
        for l in range(n):
            if not a[l]:
                continue
            for k in range(n):
                x = to_fraction(X[k][l])
                if not x:
                    continue
                b = list(a)
                b[l] -= 1
                b[k] += 1
                row = idx[tuple(b)]
                # X(x^a) = sum_{k,l} X_kl a_l x^(a - e_l + e_k), rescaled to the weighted basis
                M[row][col] += x * a[l] * weight[col] / weight[row]
    return M


def veronese_rep(n: int, d: int) -> RepData:
    """``gl(n)`` acting on ``Sym^d Q^n`` (no scaling element flagged)."""
    lie = gl_algebra(n)
    mats = [sym_power_matrix(elementary_matrix(n, i, j), n, d) for i in range(n) for j in range(n)]
    return RepData(lie, mats)


def quadric_cone_rep() -> RepData:
    """``C* x SL(2)`` on ``Sym^2 Q^2`` with basis ``e, h, E, F``; ``e`` scales."""
    lie = LieAlgebra(4, {(1, 2): [0, 0, 2, 0], (1, 3): [0, 0, 0, -2], (2, 3): [0, 1, 0, 0]},
                     labels=["e", "h", "E", "F"], scaling_element=0)
    h = [[1, 0], [0, -1]]
    E = [[0, 1], [0, 0]]
    F = [[0, 0], [1, 0]]
    mats = [linalg.identity(3)] + [sym_power_matrix(X, 2, 2) for X in (h, E, F)]
    return RepData(lie, mats)


def _kron(A, B):
    n, m = len(A), len(B)
    return [[to_fraction(A[i // m][j // m]) * to_fraction(B[i % m][j % m]) for j in range(n * m)]
            for i in range(n * m)]


def segre_rep() -> RepData:
    """``C* x SL(2) x SL(2)`` on ``Q^2 (x) Q^2``, coordinates ``u1v1, u1v2, u2v1, u2v2``."""
    sl2 = {(0, 1): [0, 2, 0], (0, 2): [0, 0, -2], (1, 2): [1, 0, 0]}
    br = {}
    for (i, j), v in sl2.items():
        br[(1 + i, 1 + j)] = [0] + v + [0, 0, 0]
        br[(4 + i, 4 + j)] = [0, 0, 0, 0] + v
    lie = LieAlgebra(7, br, labels=["e", "h1", "E1", "F1", "h2", "E2", "F2"], scaling_element=0)
    I2 = [[1, 0], [0, 1]]
    sl2_mats = ([[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]])
    mats = [linalg.identity(4)] + [_kron(X, I2) for X in sl2_mats] + [_kron(I2, X) for X in sl2_mats]
    return RepData(lie, mats)


def torus_rep(A: Sequence[Sequence[int]], scaling_row: int | None = None) -> RepData:
    """Abelian Lie algebra of rank ``d`` acting diagonally by the rows of ``A``."""
    d, N = len(A), len(A[0])
    lie = LieAlgebra(d, {}, labels=[f"t{i + 1}" for i in range(d)],
                     scaling_element=scaling_row)
    mats = [[[Fraction(A[i][k]) if k == l else Fraction(0) for l in range(N)] for k in range(N)]
            for i in range(d)]
    return RepData(lie, mats)


def scaling_rep(N: int) -> RepData:
    """``C*`` acting on ``Q^N`` by scaling."""
    return RepData(LieAlgebra(1, {}, labels=["e"], scaling_element=0), [linalg.identity(N)])


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def lie_from_json(obj: dict) -> LieAlgebra:
    try:
        dim = int(obj["dim"])
        brackets = {}
        for pos, entry in enumerate(obj.get("brackets", [])):
            if len(entry) != 3:
                raise DataInconsistencyError(f"bracket entry #{pos} must be [i, j, [coefficients]]")
            i, j, vec = entry
            if (i, j) in brackets:
                raise DataInconsistencyError(f"bracket entry ({i},{j}) listed twice")
            brackets[(int(i), int(j))] = [to_fraction(v) for v in vec]
    except (KeyError, TypeError) as exc:
        raise DataInconsistencyError(f"malformed Lie algebra data: {exc}") from exc
    return LieAlgebra(dim, brackets, obj.get("labels"), obj.get("scaling_element"))


def repdata_from_json(obj: dict) -> RepData:
    lie = lie_from_json(obj["lie"])
    rep = obj["rep"]
    mats = [[[to_fraction(v) for v in row] for row in M] for M in rep["matrices"]]
    out = RepData(lie, mats)
    if "N" in rep and int(rep["N"]) != out.N:
        raise DimensionError(f"declared N={rep['N']} but matrices are {out.N}x{out.N}")
    bad = check_bracket_compatibility(out)
    if bad:
        raise DataInconsistencyError(f"vector fields do not respect brackets at pairs {bad}")
    return out


def character_from_json(lie: LieAlgebra, values) -> Character:
    return Character(lie, tuple(to_fraction(v) for v in values))


def repdata_to_json(rep: RepData) -> dict:
    return {"lie": rep.lie.to_json(), "rep": rep.to_json()}


__all__ = [
    "Character", "DataInconsistencyError", "LieAlgebra", "RepData", "beta_prime", "character_arith",
    "character_from_json", "check_bracket_compatibility", "elementary_matrix", "gl_algebra",
    "lie_from_json", "quadric_cone_rep", "repdata_from_json", "repdata_to_json", "scaling_rep",
    "segre_rep", "sym_power_matrix", "torus_rep", "trace_ad", "trace_drho", "vector_field",
    "veronese_rep",
]
