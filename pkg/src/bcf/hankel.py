"""Exact Hankel matrices ``H_m(a) = [a^(i+j-1)]`` and their positivity classes.

All decisions (positivity, rank, SE-minimality) are made over the rationals;
there are no tolerances anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import InternalInconsistency, NonRealEntry, SingularPivot
from .series import exact, is_real

Matrix = Sequence[Sequence[Fraction]]


class Tag(str, Enum):
    POSITIVE_DEFINITE = "positive_definite"
    SE_MINIMALLY_POSITIVE = "se_minimally_positive"
    POSITIVE_SINGULAR_NOT_SE_MINIMAL = "positive_singular_not_se_minimal"
    NOT_POSITIVE = "not_positive"


@dataclass(frozen=True)
class HankelMatrix:
    m: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class Classification:
    tag: Tag
    rank: int
    leading_minors: tuple[Fraction, ...]

    @property
    def positive(self) -> bool:
        return self.tag is not Tag.NOT_POSITIVE

    @property
    def solvable_shape(self) -> bool:
        """PD or SE-minimally positive: the shapes admitting an interpolant."""
        return self.tag in (Tag.POSITIVE_DEFINITE, Tag.SE_MINIMALLY_POSITIVE)


def _matrix(H) -> list[list[Fraction]]:
    if isinstance(H, HankelMatrix):
        return H.rows()
    return [[Fraction(v) for v in r] for r in H]


def _rows(H) -> list[list[Fraction]]:
    rows = _matrix(H)
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square")
    return rows


def build_hankel(a: Sequence, m: int) -> HankelMatrix:
    """``H_m`` from a sequence indexed from ``a^0`` (entry (i, j) is ``a[i+j+1]``, 0-based)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m and len(a) < 2 * m:
        raise ValueError(f"H_{m} needs a^1..a^{2 * m - 1}; only {len(a) - 1} terms beyond a^0")
    entries = []
    for i in range(m):
        row = []
        for j in range(m):
            v = exact(a[i + j + 1])
            if not is_real(v):
                raise NonRealEntry(f"a^{i + j + 1} = {v} is not real")
            row.append(v)
        entries.append(tuple(row))
    return HankelMatrix(m, tuple(entries))


def _integer_rows(rows: list[list[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale a rational matrix to an integer one; returns (rows, scale)."""
    den = 1
    for r in rows:
        for v in r:
            den = math.lcm(den, v.denominator)
    return [[int(v * den) for v in r] for r in rows], den


def _bareiss(A: list[list[int]]) -> tuple[int, int]:
    """Fraction-free echelon reduction in place; returns (rank, sign of row swaps)."""
    n_rows = len(A)
    n_cols = len(A[0]) if A else 0
    prev = 1
    r = 0
    sign = 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
            sign = -sign
        p = A[r][c]
        for i in range(r + 1, n_rows):
            for j in range(c + 1, n_cols):
                A[i][j] = (A[i][j] * p - A[i][c] * A[r][j]) // prev
            A[i][c] = 0
        prev = p
        r += 1
        if r == n_rows:
            break
    return r, sign


def rank_exact(H) -> int:
    rows = _matrix(H)
    if not rows:
        return 0
    A, _ = _integer_rows(rows)
    return _bareiss(A)[0]


def determinant(H) -> Fraction:
    rows = _rows(H)
    n = len(rows)
    if n == 0:
        return Fraction(1)
    A, den = _integer_rows(rows)
    rank, sign = _bareiss(A)
    if rank < n:
        return Fraction(0)
    return Fraction(sign * A[n - 1][n - 1], den**n)


def leading_minors(H) -> tuple[Fraction, ...]:
    rows = _rows(H)
    return tuple(determinant([r[:k] for r in rows[:k]]) for k in range(1, len(rows) + 1))


def schur_complement_11(H) -> list[list[Fraction]]:
    """``D - C a11^-1 B`` for the partition splitting off the (1,1) entry."""
    rows = _rows(H)
    if not rows:
        raise ValueError("empty matrix has no (1,1) entry")
    a11 = rows[0][0]
    if a11 == 0:
        raise SingularPivot("(1,1) entry is zero")
    n = len(rows)
    return [[rows[i][j] - rows[i][0] * rows[0][j] / a11 for j in range(1, n)] for i in range(1, n)]


def is_psd(H) -> bool:
    """Exact PSD test by symmetric elimination, always pivoting on the largest diagonal."""
    A = _rows(H)
    while A:
        k = len(A)
        diag = [A[i][i] for i in range(k)]
        if min(diag) < 0:
            return False
        piv = max(range(k), key=diag.__getitem__)
        p = diag[piv]
        if p == 0:
            # zero diagonal: PSD only if the block vanishes
            return all(v == 0 for r in A for v in r)
        keep = [i for i in range(k) if i != piv]
        A = [[A[i][j] - A[i][piv] * A[piv][j] / p for j in keep] for i in keep]
    return True


def in_column_space(H, v: Sequence[Fraction]) -> bool:
    rows = _rows(H)
    augmented = [r + [Fraction(v[i])] for i, r in enumerate(rows)]
    return rank_exact(augmented) == rank_exact(rows)


def classify(H) -> Classification:
    """PD / SE-minimally positive / positive-singular / not positive.

    SE-minimality of a PSD matrix is decided by whether the last basis vector
    lies in its column space: ``H - eps*e_m e_m^T`` stays PSD for some
    ``eps > 0`` exactly when it does.
    """
    rows = _rows(H)
    m = len(rows)
    minors = leading_minors(rows)
    rank = rank_exact(rows)
    if not is_psd(rows):
        tag = Tag.NOT_POSITIVE
    elif rank == m:
        tag = Tag.POSITIVE_DEFINITE
    else:
        e_m = [Fraction(0)] * (m - 1) + [Fraction(1)]
        tag = Tag.POSITIVE_SINGULAR_NOT_SE_MINIMAL if in_column_space(rows, e_m) else Tag.SE_MINIMALLY_POSITIVE
    return Classification(tag, rank, minors)


def solve_linear(A, b: Sequence[Fraction]) -> list[Fraction]:
    """Solve a nonsingular rational system exactly (Gauss-Jordan)."""
    rows = _rows(A)
    n = len(rows)
    M = [r + [Fraction(b[i])] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            raise InternalInconsistency("singular system")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [v / p for v in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [vi - f * vc for vi, vc in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> list[list[Fraction]]:
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum((A[i][k] * B[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)] for i in range(len(A))]


def toeplitz_lower(c: Sequence[Fraction], n: int) -> list[list[Fraction]]:
    """n x n lower-triangular Toeplitz matrix with first column ``c[0..n-1]``."""
    return [[Fraction(c[i - j]) if i >= j else Fraction(0) for j in range(n)] for i in range(n)]


def transpose(A: Matrix) -> list[list[Fraction]]:
    return [list(col) for col in zip(*A)]
