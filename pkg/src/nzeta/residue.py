"""Finite-field and residue-ring computations over the torus.

Everything here is exhaustive enumeration: zero patterns of face functions on
(F_p^x)^n, Jacobian ranks, the non-degeneracy test, and the point counts and
character sums that enter the explicit formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .cyclotomic import CycRat, Character
from .errors import check_budget
from .fan import SimplicialFan, barycenter
from .poly import MultiPoly, evaluate_many, evaluate_residue, face_function, partial_derivative


@lru_cache(maxsize=64)
def torus_grid(p: int, n: int, e: int = 1) -> np.ndarray:
    """All points of ((Z/p^e)^x)^n as rows, in lexicographic order."""
    modulus = p**e
    units = [u for u in range(1, modulus) if u % p]
    grid = np.array(list(itertools.product(units, repeat=n)), dtype=np.int64)
    grid.setflags(write=False)
    return grid


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


def jacobian_rank(polys: Sequence[MultiPoly], z: Sequence[int], p: int) -> int:
    if not polys:
        return 0
    rows = [
        [evaluate_residue(partial_derivative(h, j), z, p) for j in range(h.n)] for h in polys
    ]
    return _rank_mod_p(rows, p)


@dataclass(frozen=True)
class TorusSolutionSet:
    pattern: frozenset[int]
    points: tuple[tuple[int, ...], ...]
    singular_points: tuple[tuple[int, ...], ...]


def _zero_masks(polys: Sequence[MultiPoly], p: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    grid = torus_grid(p, n)
    zeros = np.stack([evaluate_many(h, grid, p) == 0 for h in polys]) if polys else np.zeros((0, len(grid)), bool)
    return grid, zeros


def torus_solutions(polys: Sequence[MultiPoly], pattern, p: int) -> TorusSolutionSet:
    """Torus points where exactly the polynomials indexed by pattern vanish mod p."""
    pattern = frozenset(pattern)
    n = polys[0].n
    grid, zeros = _zero_masks(polys, p, n)
    mask = np.ones(len(grid), dtype=bool)
    for i in range(len(polys)):
        mask &= zeros[i] if i in pattern else ~zeros[i]
    points = [tuple(int(x) for x in row) for row in grid[mask]]
    chosen = [polys[i] for i in sorted(pattern)]
    singular = [z for z in points if jacobian_rank(chosen, z, p) < len(chosen)]
    return TorusSolutionSet(pattern, tuple(points), tuple(singular))


def _nonempty_patterns(r: int):
    for size in range(1, r + 1):
        yield from itertools.combinations(range(r), size)


@dataclass(frozen=True)
class NondegeneracyVerdict:
    nondegenerate: bool
    witness: tuple | None = None  # (cone id, pattern labels, point)

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            cone_id, labels, point = self.witness
            w = {"cone": cone_id, "pattern": list(labels), "point": list(point)}
        return {"nondegenerate": self.nondegenerate, "witness": w}


def check_nondegenerate(
    f: MultiPoly,
    g: MultiPoly,
    fan: SimplicialFan,
    p: int,
    max_evals: int | None = None,
    labels: Sequence[str] = ("f", "g"),
) -> NondegeneracyVerdict:
    return check_nondegenerate_system([f, g], fan, p, max_evals, labels)


def check_nondegenerate_system(
    polys: Sequence[MultiPoly],
    fan: SimplicialFan,
    p: int,
    max_evals: int | None = None,
    labels: Sequence[str] | None = None,
) -> NondegeneracyVerdict:
    n = fan.n
    labels = list(labels) if labels else [f"h{i + 1}" for i in range(len(polys))]
    cones = fan.all_cones()
    check_budget((p - 1) ** n * len(cones), max_evals, "non-degeneracy check")
    for cone in cones:
        k = barycenter(cone, n)
        faces = [face_function(h, k) for h in polys]
        grid, zeros = _zero_masks(faces, p, n)
        for pattern in _nonempty_patterns(len(faces)):
            mask = np.ones(len(grid), dtype=bool)
            for i in range(len(faces)):
                mask &= zeros[i] if i in pattern else ~zeros[i]
            chosen = [faces[i] for i in pattern]
            for row in grid[mask]:
                z = tuple(int(x) for x in row)
                if jacobian_rank(chosen, z, p) < len(chosen):
                    return NondegeneracyVerdict(False, (cone.id, tuple(labels[i] for i in pattern), z))
    return NondegeneracyVerdict(True)


# -- the quantities nu and sigma ------------------------------------------------


def _declared_conductor(chars) -> int:
    es = {c.e for c in chars}
    if len(es) != 1:
        raise ValueError("characters with different conductors are not supported")
    return es.pop()


def _all_trivial(chars) -> bool:
    trivial = [c.is_trivial for c in chars]
    if any(trivial) and not all(trivial):
        raise ValueError("characters must be all trivial or all nontrivial")
    return all(trivial)


def nu(faces: Sequence[MultiPoly], chars, p: int, max_evals: int | None = None):
    """Measure-weighted count of torus points where no face vanishes mod p.

    Trivial characters give a rational number; nontrivial ones give the
    character sum q^(-ne) sum_a prod chi_i(h_i(a)) over units a mod p^e.
    """
    n = faces[0].n
    if _all_trivial(chars):
        check_budget((p - 1) ** n, max_evals, "torus enumeration")
        grid = torus_grid(p, n)
        mask = np.ones(len(grid), dtype=bool)
        for h in faces:
            mask &= evaluate_many(h, grid, p) != 0
        return Fraction(int(mask.sum()), p**n)
    e = _declared_conductor(chars)
    check_budget(p ** (e * n), max_evals, "unit enumeration mod p^e")
    modulus = p**e
    order = 1
    for c in chars:
        order = order * c.m // np.gcd(order, c.m)
    order = int(order)
    grid = torus_grid(p, n, e)
    values = [evaluate_many(h, grid, modulus) for h in faces]
    mask = np.ones(len(grid), dtype=bool)
    for v in values:
        mask &= v % p != 0
    exps = np.zeros(int(mask.sum()), dtype=np.int64)
    for c, v in zip(chars, values):
        table = _exponent_table(c, modulus)
        exps = (exps + table[v[mask]] * (order // c.m)) % order
    counts = np.bincount(exps, minlength=order)
    total = CycRat(order, [])
    for j, cnt in enumerate(counts):
        if cnt:
            total = total + CycRat.root(order, j) * int(cnt)
    return total / p ** (n * e)


def _exponent_table(char, modulus: int) -> np.ndarray:
    table = np.zeros(modulus, dtype=np.int64)
    for u in range(modulus):
        if u % char.p:
            table[u] = char.exponent(u)
    return table


def sigma_I(faces: Sequence[MultiPoly], pattern, p: int, chars, max_evals: int | None = None) -> Fraction:
    """Measure of the nonsingular torus points with zero pattern exactly `pattern`."""
    if not _all_trivial(chars):
        return Fraction(0)
    n = faces[0].n
    check_budget((p - 1) ** n, max_evals, "torus enumeration")
    sols = torus_solutions(faces, pattern, p)
    return Fraction(len(sols.points) - len(sols.singular_points), p**n)


@dataclass(frozen=True)
class FaceCounts:
    nu: object  # Fraction or CycRat
    N_f: Fraction
    N_g: Fraction
    N_fg: Fraction

    def to_json(self) -> dict:
        from .cyclotomic import to_json_number

        return {
            "nu": to_json_number(self.nu),
            "N_f": str(self.N_f),
            "N_g": str(self.N_g),
            "N_fg": str(self.N_fg),
        }


def face_counts(f_face: MultiPoly, g_face: MultiPoly, p: int, chi: Character, max_evals: int | None = None) -> FaceCounts:
    chars = [chi, chi.inverse()]
    faces = [f_face, g_face]
    value = nu(faces, chars, p, max_evals)
    if not chi.is_trivial:
        return FaceCounts(value, Fraction(0), Fraction(0), Fraction(0))
    return FaceCounts(
        value,
        sigma_I(faces, {0}, p, chars, max_evals),
        sigma_I(faces, {1}, p, chars, max_evals),
        sigma_I(faces, {0, 1}, p, chars, max_evals),
    )
