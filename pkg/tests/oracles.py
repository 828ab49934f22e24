"""Slow, obviously-correct reference computations used by the tests.

Nothing here imports the geometry or counting code of the package; these
routines work directly from supports, coefficients and coordinates.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import sympy


def brute_d(k, support) -> Fraction:
    return min(sum(Fraction(a) * b for a, b in zip(k, m)) for m in support)


def brute_face(k, support) -> frozenset:
    d = brute_d(k, support)
    return frozenset(m for m in support if sum(Fraction(a) * b for a, b in zip(k, m)) == d)


def _rank(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def brute_facets(support, bound: int | None = None) -> dict:
    """Facet normal -> offset by scanning all primitive nonnegative normals in a box.

    w is a facet normal when the face it cuts out, conv(minimizers) plus the
    coordinate directions orthogonal to w, has dimension n-1.
    """
    support = [tuple(m) for m in support]
    n = len(support[0])
    # normals are (scaled) minors of difference vectors with entries at most top
    top = max(max(m) for m in support)
    bound = bound or (top if n == 2 else 2 * top * top)
    out = {}
    for w in itertools.product(range(bound + 1), repeat=n):
        if not any(w) or math.gcd(*w) != 1:
            continue
        face = sorted(brute_face(w, support))
        m0 = face[0]
        dirs = [tuple(a - b for a, b in zip(m, m0)) for m in face[1:]]
        dirs += [tuple(int(i == j) for j in range(n)) for i in range(n) if w[i] == 0]
        if _rank(dirs) == n - 1:
            out[tuple(w)] = int(brute_d(w, support))
    return out


def box_fundamental_points(gens) -> list[tuple[int, ...]]:
    """Scan the bounding box of sum [0,1] w_i and keep points with 0 < lambda_i <= 1."""
    gens = [tuple(w) for w in gens]
    n = len(gens[0])
    hi = [sum(w[i] for w in gens) for i in range(n)]
    a = sympy.Matrix([list(w) for w in gens]).T
    out = []
    for t in itertools.product(*(range(h + 1) for h in hi)):
        if not any(t):
            continue
        sol, params = a.gauss_jordan_solve(sympy.Matrix(t)) if _in_span(a, t) else (None, None)
        if sol is None:
            continue
        lam = [sympy.Rational(x) for x in sol]
        if all(0 < x <= 1 for x in lam):
            out.append(tuple(t))
    return sorted(out)


def _in_span(a, t) -> bool:
    return a.rank() == a.row_join(sympy.Matrix(t)).rank()


def minor_gcd_index(gens) -> int:
    """Index of Z-span(gens) in its saturation: gcd of the maximal minors."""
    a = sympy.Matrix([list(w) for w in gens]).T
    n, l = a.shape
    g = 0
    for rows in itertools.combinations(range(n), l):
        g = math.gcd(g, int(a.extract(list(rows), list(range(l))).det()))
    return abs(g)


def poly_value(terms: dict, x) -> int:
    total = 0
    for exp, c in terms.items():
        v = c
        for xi, ei in zip(x, exp):
            v *= xi**ei
        total += v
    return total


def poly_derivative(terms: dict, j: int) -> dict:
    out = {}
    for exp, c in terms.items():
        if exp[j]:
            e = list(exp)
            e[j] -= 1
            out[tuple(e)] = out.get(tuple(e), 0) + c * exp[j]
    return {k: v for k, v in out.items() if v}


def brute_counts(f_terms: dict, g_terms: dict, p: int, n: int) -> dict:
    """Torus counts by zero pattern, split into nonsingular and singular points."""
    df = [poly_derivative(f_terms, j) for j in range(n)]
    dg = [poly_derivative(g_terms, j) for j in range(n)]
    out = {"none": 0, "f": 0, "g": 0, "fg": 0, "singular": 0}
    for z in itertools.product(range(1, p), repeat=n):
        zf = poly_value(f_terms, z) % p == 0
        zg = poly_value(g_terms, z) % p == 0
        rf = [poly_value(d, z) % p for d in df]
        rg = [poly_value(d, z) % p for d in dg]
        if not zf and not zg:
            out["none"] += 1
        elif zf and not zg:
            out["f" if any(rf) else "singular"] += 1
        elif zg and not zf:
            out["g" if any(rg) else "singular"] += 1
        else:
            minors = [(rf[i] * rg[j] - rf[j] * rg[i]) % p for i in range(n) for j in range(i + 1, n)]
            out["fg" if any(minors) else "singular"] += 1
    return out


def legendre(u: int, p: int) -> int:
    u %= p
    if u == 0:
        return 0
    return 1 if pow(u, (p - 1) // 2, p) == 1 else -1


def separable_value(q: int, t: Fraction) -> Fraction:
    """Integral of |x/y|^s over Z_p^2 as a function of t = q^-s (two geometric series)."""
    return (1 - Fraction(1, q)) ** 2 / ((1 - t / q) * (1 - 1 / (q * t)))
