"""Exact linear algebra over Q for small dense and larger sparse matrices."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][t] * B[t][j] for t in range(k) if A[i][t]), Fraction(0)) for j in range(m)]
            for i in range(n)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[c * a for a in row] for row in A]


def commutator(A, B):
    return mat_sub(mat_mul(A, B), mat_mul(B, A))


def identity(n: int):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None):
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def trace(A) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def transpose(A):
    return [list(col) for col in zip(*A)]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a dense matrix given as a list of rows."""
    return SparseEchelon().extend({j: Fraction(v) for j, v in enumerate(r) if v} for r in rows)


def solve(A, b):
    """Some solution x of ``A x = b`` or None. Dense, exact."""
    n = len(A)
    m = len(A[0]) if n else 0
    rows = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(n)]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * c for a, c in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(rows[i][m] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * m
    for i, col in enumerate(pivots):
        x[col] = rows[i][m]
    return x


class SparseEchelon:
    """Incremental row echelon form of sparse rows ``{col: value}`` over Q.

    Rows are reduced against the stored pivots as they arrive, so the rank of
    a large sparse matrix is computed without ever forming it densely.
    """

    def __init__(self):
        self.pivots: dict = {}  # pivot column -> row with leading 1 at that column

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = {c: Fraction(v) for c, v in row.items() if v}
        while row:
            col = min(row)
            prow = self.pivots.get(col)
            if prow is None:
                return row
            f = row[col]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; returns True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        col = min(row)
        lead = row[col]
        self.pivots[col] = {c: v / lead for c, v in row.items()}
        return True

    def extend(self, rows: Iterable[dict]) -> int:
        for r in rows:
            self.add(r)
        return self.rank

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)


def sparse_rank(rows: Iterable[dict]) -> int:
    return SparseEchelon().extend(rows)
