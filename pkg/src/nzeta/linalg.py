"""Exact linear algebra over Q and Z on small dense matrices (lists of rows)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]


def primitive(v: Sequence) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def solve_in_span(columns: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_i columns_i = target, or None if target is not in the span.

    The columns must be linearly independent.
    """
    k = len(columns)
    n = len(target)
    # augmented system: rows are coordinates
    m = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if m[i][c] != 0), None)
        if piv is None:
            raise ValueError("columns are linearly dependent")
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(m[i][k] != 0 for i in range(r, n)):
        return None
    return [m[i][k] for i in range(k)]


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def column_hnf(a: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Column-style Hermite reduction.

    Returns (H, U) with H = A U, U unimodular, H lower echelon: the first
    rank(A) columns of H are nonzero with positive pivots strictly moving down,
    the remaining columns are zero.  Entries left of a pivot are reduced into
    [0, pivot).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    h = [list(map(int, r)) for r in a]
    u = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def colop(dst: int, src: int, factor: int) -> None:
        # column dst += factor * column src
        for r in h:
            r[dst] += factor * r[src]
        for r in u:
            r[dst] += factor * r[src]

    def swap(i: int, j: int) -> None:
        for r in h:
            r[i], r[j] = r[j], r[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    def negate(i: int) -> None:
        for r in h:
            r[i] = -r[i]
        for r in u:
            r[i] = -r[i]

    pc = 0
    pivot_rows = []
    for row in range(rows):
        if pc == cols:
            break
        # gcd-eliminate entries h[row][pc+1:] into column pc
        while True:
            nz = [j for j in range(pc, cols) if h[row][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(h[row][j]))
            if j0 != pc:
                swap(pc, j0)
            done = True
            for j in range(pc + 1, cols):
                if h[row][j] != 0:
                    colop(j, pc, -(h[row][j] // h[row][pc]))
                    if h[row][j] != 0:
                        done = False
            if done:
                break
        if h[row][pc] == 0:
            continue
        if h[row][pc] < 0:
            negate(pc)
        pivot_rows.append((row, pc))
        pc += 1
    # reduce entries to the left of each pivot
    for row, c in pivot_rows:
        piv = h[row][c]
        for j in range(c):
            colop(j, c, -(h[row][j] // piv))
    return h, u


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """A Z-basis of {x in Z^ncols : A x = 0}."""
    if not a:
        return [tuple(int(i == j) for i in range(ncols)) for j in range(ncols)]
    h, u = column_hnf(a)
    r = sum(1 for j in range(ncols) if any(row[j] for row in h))
    return [tuple(u[i][j] for i in range(ncols)) for j in range(r, ncols)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]
