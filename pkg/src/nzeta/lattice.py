"""Lattice points of half-open fundamental parallelepipeds of simplicial cones."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .linalg import Vector, column_hnf, integer_kernel, solve_in_span


def saturation_basis(gens: Sequence[Sequence[int]]) -> list[Vector]:
    """A Z-basis of span_Q(gens) intersected with Z^n."""
    n = len(gens[0])
    if len(gens) == n:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    complement = integer_kernel([list(w) for w in gens], n)
    return integer_kernel([list(v) for v in complement], n)


def coordinates(gens: Sequence[Sequence[int]], basis: Sequence[Vector]) -> list[list[int]]:
    """Integer matrix C (columns indexed by generators) with gens_j = sum_i C[i][j] basis_i."""
    cols = []
    for w in gens:
        c = solve_in_span(basis, w)
        if c is None or any(x.denominator != 1 for x in c):
            raise ValueError("generator outside the saturated lattice")
        cols.append([int(x) for x in c])
    return [[cols[j][i] for j in range(len(gens))] for i in range(len(basis))]


def fundamental_points(gens: Sequence[Sequence[int]]) -> list[Vector]:
    """Integer points sum(lambda_i w_i) with 0 < lambda_i <= 1, sorted.

    Coset representatives of Z^l / C Z^l are read off the diagonal of the
    Hermite form of the coordinate matrix C, then moved into the half-open box.
    """
    gens = [tuple(int(x) for x in w) for w in gens]
    if not gens:
        return []
    basis = saturation_basis(gens)
    l = len(gens)
    if len(basis) != l:
        raise ValueError("cone generators are linearly dependent")
    c = coordinates(gens, basis)
    h, _ = column_hnf(c)
    diag = [h[i][i] for i in range(l)]
    if any(x <= 0 for x in diag):
        raise ValueError("cone generators are linearly dependent")
    c_cols = [[c[i][j] for i in range(l)] for j in range(l)]
    points = set()
    for y in _box(diag):
        lam = solve_in_span(c_cols, y)
        lam = [x - math.ceil(x) + 1 for x in lam]
        t = [sum(lam[j] * gens[j][i] for j in range(l)) for i in range(len(gens[0]))]
        if any(Fraction(x).denominator != 1 for x in t):
            raise AssertionError("non-integral fundamental point")
        points.add(tuple(int(x) for x in t))
    return sorted(points)


def _box(bounds: Sequence[int]):
    if not bounds:
        yield []
        return
    for rest in _box(bounds[1:]):
        for v in range(bounds[0]):
            yield [v] + rest


def multiplicity(gens: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by gens inside its saturation (Smith form route)."""
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form
    from sympy.polys.domains import ZZ

    m = Matrix([list(w) for w in gens]).T
    snf = smith_normal_form(m, domain=ZZ)
    index = 1
    for i in range(min(snf.shape)):
        if snf[i, i] != 0:
            index *= abs(int(snf[i, i]))
    return index


def cone_coefficients(gens: Sequence[Sequence[int]], k: Sequence) -> list[Fraction] | None:
    """lambda with k = sum lambda_i gens_i, or None when k is outside the span."""
    return solve_in_span(gens, k)
