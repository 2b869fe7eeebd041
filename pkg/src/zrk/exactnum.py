"""Exact integer and rational arithmetic with lattice-algebra kernels.

``Rat`` is the standard-library ``fractions.Fraction``: it already keeps
numerator/denominator coprime with a positive denominator, which is exactly
the required canonical form.  The lattice kernels (invariant factors and the
basis-extension test) are what every regularity check reduces to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

Rat = Fraction


def parse_rat(text: str) -> Rat:
    """Parse 'p' or 'p/q' in lowest terms with q >= 1.

    Raises ValueError for non-canonical inputs such as '2/4' or '1/-2'.
    """
    s = text.strip()
    if "/" in s:
        num_s, den_s = s.split("/", 1)
        num, den = int(num_s), int(den_s)
        if den < 1:
            raise ValueError(f"{text!r}: denominator must be positive")
        if math.gcd(num, den) != 1:
            raise ValueError(f"{text!r}: not in lowest terms")
        return Fraction(num, den)
    return Fraction(int(s))


def format_rat(x: Rat) -> str:
    """Serialize as 'p/q' for true fractions and 'p' for integers."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class IntMat:
    """Immutable integer matrix, row-major."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix must be nonempty")
        width = len(self.entries[0])
        if any(len(r) != width for r in self.entries):
            raise ValueError("ragged rows")
        if any(not isinstance(x, int) for r in self.entries for x in r):
            raise ValueError("entries must be integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMat":
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])


def _smith_diagonal(entries: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form by elementary row/column reduction.

    Pivots on the minimal nonzero absolute value, which keeps the numbers
    small at desk scale; the divisibility chain is enforced afterwards.
    """
    m = [list(r) for r in entries]
    nr, nc = len(m), len(m[0])
    diag: list[int] = []
    top = 0
    while top < nr and top < nc:
        # Locate minimal nonzero |entry| in the trailing block.
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        m[top], m[bi] = m[bi], m[top]
        for row in m:
            row[top], row[bj] = row[bj], row[top]
        pivot = m[top][top]
        reduced = False
        for i in range(top + 1, nr):
            q = m[i][top] // pivot
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[top])]
            if m[i][top] != 0:
                reduced = True
        for j in range(top + 1, nc):
            q = m[top][j] // pivot
            if q:
                for row in m:
                    row[j] -= q * row[top]
            if m[top][j] != 0:
                reduced = True
        if reduced:
            continue  # smaller remainders appeared; pick a new pivot
        diag.append(abs(pivot))
        top += 1
    # Enforce d_i | d_{i+1} by gcd/lcm absorption.
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            g = math.gcd(a, b)
            diag[i], diag[j] = g, a * b // g if g else 0
    size = min(nr, nc)
    return diag + [0] * (size - len(diag))


def invariant_factors(m: IntMat | Sequence[Sequence[int]]) -> list[int]:
    """Smith-form diagonal d_1 | d_2 | ... | d_min(rows, cols)."""
    entries = m.entries if isinstance(m, IntMat) else IntMat.from_rows(m).entries
    return _smith_diagonal(entries)


def minor_gcd(m: IntMat | Sequence[Sequence[int]], k: int) -> int:
    """gcd of all k x k minors (brute force; the oracle for invariant factors)."""
    entries = m.entries if isinstance(m, IntMat) else IntMat.from_rows(m).entries
    nr, nc = len(entries), len(entries[0])
    if k == 0:
        return 1
    g = 0
    for rows in combinations(range(nr), k):
        for cols in combinations(range(nc), k):
            g = math.gcd(g, _int_det([[entries[i][j] for j in cols] for i in rows]))
            if g == 1:
                return 1
    return g


def _int_det(m: list[list[int]]) -> int:
    """Integer determinant by cofactor expansion (small matrices only)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    rest = m[1:]
    for j in range(n):
        if m[0][j] == 0:
            continue
        sub = [row[:j] + row[j + 1:] for row in rest]
        total += (-1) ** j * m[0][j] * _int_det(sub)
    return total


def rows_independent(rows: Sequence[Sequence[int]]) -> bool:
    """Linear independence over the rationals."""
    from . import linalg

    return linalg.matrix_rank(rows) == len(rows)


def extends_to_basis(rows: Sequence[Sequence[int]]) -> bool:
    """True iff the rows extend to a basis of Z^m.

    Equivalent to all invariant factors being 1, i.e. the gcd of the maximal
    minors being 1.  Dependent rows are rejected.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if not rows:
        raise ValueError("empty input")
    m = len(rows[0])
    if len(rows) > m:
        raise ValueError("not affinely independent input")
    if not rows_independent(rows):
        raise ValueError("not affinely independent input")
    factors = invariant_factors(rows)
    return all(d == 1 for d in factors)


def lcd(xs: Sequence[Rat]) -> int:
    """Least positive d with d*x integral for every x."""
    if not xs:
        raise ValueError("empty input")
    out = 1
    for x in xs:
        out = out * x.denominator // math.gcd(out, x.denominator)
    return out


def smith_with_transforms(entries: Sequence[Sequence[int]]
                          ) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Full Smith decomposition U * A * V = D with U, V unimodular.

    Returns (U, D, V).  Used by the integer affine-map fitting oracle; not
    part of the public surface.
    """
    a = [list(map(int, r)) for r in entries]
    nr, nc = len(a), len(a[0])
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(j, i, q):  # col_j -= q * col_i
        for row in a:
            row[j] -= q * row[i]
        for row in v:
            row[j] -= q * row[i]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def diagonalize(start: int) -> None:
        top = start
        while top < nr and top < nc:
            best = None
            for i in range(top, nr):
                for j in range(top, nc):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(top, best[0])
            swap_cols(top, best[1])
            dirty = False
            for i in range(top + 1, nr):
                q = a[i][top] // a[top][top]
                if q:
                    row_op(i, top, q)
                if a[i][top] != 0:
                    dirty = True
            for j in range(top + 1, nc):
                q = a[top][j] // a[top][top]
                if q:
                    col_op(j, top, q)
                if a[top][j] != 0:
                    dirty = True
            if dirty:
                continue
            if a[top][top] < 0:
                a[top] = [-x for x in a[top]]
                u[top] = [-x for x in u[top]]
            top += 1

    diagonalize(0)
    # Divisibility fix-up: whenever d_i does not divide d_j, fold column j
    # into column i and re-diagonalize from i; the pivot there becomes
    # gcd(d_i, d_j), so the chain strictly improves and the loop terminates.
    while True:
        size = min(nr, nc)
        violation = None
        for i in range(size):
            for j in range(i + 1, size):
                di, dj = a[i][i], a[j][j]
                if (di == 0 and dj != 0) or (di != 0 and dj % di != 0):
                    violation = (i, j)
                    break
            if violation:
                break
        if violation is None:
            return u, a, v
        i, j = violation
        for row in a:
            row[i] += row[j]
        for row in v:
            row[i] += row[j]
        diagonalize(i)
