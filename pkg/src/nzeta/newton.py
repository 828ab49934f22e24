"""Newton polyhedra conv(supp(h) + R_+^n) and the diagonal data of f/g.

Facets are found with the double description method on the homogenized cone
generated by (m, 1) for support points m and (e_i, 0) for the recession
directions.  Every nontrivial extreme ray (w, -d) of the dual cone gives a
facet <w, x> >= d of the polyhedron with w primitive and nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import Vector, dot, primitive, rank, solve_in_span
from .poly import MultiPoly, support


def coordinate_sum(k: Sequence) -> Fraction | int:
    return sum(k)


def _dual_extreme_rays(rows: list[Vector], dim: int) -> list[Vector]:
    """Extreme rays of {y : <a, y> >= 0 for every row a}.

    The rows must span R^dim (so the dual cone is pointed).  Rays are returned
    as primitive integer vectors.
    """
    # pick dim independent rows to seed the iteration
    basis: list[int] = []
    for i, row in enumerate(rows):
        if rank([rows[j] for j in basis] + [row]) > len(basis):
            basis.append(i)
        if len(basis) == dim:
            break
    if len(basis) < dim:
        raise ValueError("constraint rows do not span the ambient space")
    # initial rays: columns of the inverse of the seed matrix
    seed_cols = [[rows[i][c] for i in basis] for c in range(dim)]  # transpose
    rays = []
    for j in range(dim):
        target = [int(i == j) for i in range(dim)]
        y = solve_in_span(seed_cols, target)
        rays.append(primitive(y))
    processed = list(basis)

    def zero_set(ray: Vector) -> frozenset[int]:
        return frozenset(i for i in processed if dot(rows[i], ray) == 0)

    for i, row in enumerate(rows):
        if i in basis:
            continue
        vals = [dot(row, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        keep = [r for r, v in zip(rays, vals) if v >= 0]
        if neg:
            zeros = {r: zero_set(r) for r in pos + neg}
            for rp in pos:
                for rn in neg:
                    common = zeros[rp] & zeros[rn]
                    if len(common) < dim - 2:
                        continue
                    if rank([rows[k] for k in common]) != dim - 2:
                        continue
                    vp, vn = dot(row, rp), dot(row, rn)
                    new = tuple(vp * b - vn * a for a, b in zip(rp, rn))
                    keep.append(primitive(new))
        rays = list(dict.fromkeys(keep))
        processed.append(i)
    return rays


@dataclass(frozen=True)
class Facet:
    normal: Vector
    offset: int
    supporting_support: frozenset[Vector]


class NewtonPolyhedron:
    """conv(generators + R_+^n) with its vertices and primitive facet normals."""

    def __init__(self, generators: Iterable[Sequence[int]]):
        gens = frozenset(tuple(int(x) for x in m) for m in generators)
        if not gens:
            raise ValueError("Newton polyhedron of an empty support")
        n = len(next(iter(gens)))
        if any(len(m) != n for m in gens) or any(min(m) < 0 for m in gens):
            raise ValueError("support points must lie in N^n with a common n")
        self.n = n
        self.generators = gens
        rows = [m + (1,) for m in sorted(gens)]
        rows += [tuple(int(i == j) for j in range(n)) + (0,) for i in range(n)]
        facets = []
        for ray in _dual_extreme_rays(rows, n + 1):
            w, w0 = ray[:n], ray[n]
            if not any(w):
                continue  # the hyperplane at infinity
            d = -w0
            on = frozenset(m for m in gens if dot(w, m) == d)
            facets.append(Facet(tuple(w), d, on))
        facets.sort(key=lambda fc: fc.normal)
        self.facets: tuple[Facet, ...] = tuple(facets)
        verts = []
        for m in sorted(gens):
            tight = [fc.normal for fc in facets if m in fc.supporting_support]
            if rank(tight) == n:
                verts.append(m)
        self.vertices: tuple[Vector, ...] = tuple(verts)

    @property
    def normals(self) -> tuple[Vector, ...]:
        return tuple(fc.normal for fc in self.facets)

    def facet(self, normal: Sequence[int]) -> Facet | None:
        normal = tuple(normal)
        for fc in self.facets:
            if fc.normal == normal:
                return fc
        return None

    def d(self, k: Sequence) -> Fraction | int:
        return d_value(k, self)

    def contains(self, x: Sequence) -> bool:
        """Membership via the facet inequalities (H-representation)."""
        return all(dot(fc.normal, x) >= fc.offset for fc in self.facets)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NewtonPolyhedron):
            return NotImplemented
        return self.n == other.n and [(f.normal, f.offset) for f in self.facets] == [
            (f.normal, f.offset) for f in other.facets
        ]

    def __hash__(self) -> int:
        return hash(tuple((f.normal, f.offset) for f in self.facets))

    def __repr__(self) -> str:
        fs = ", ".join(f"{f.normal}:{f.offset}" for f in self.facets)
        return f"NewtonPolyhedron(n={self.n}, facets=[{fs}])"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(f.normal), "offset": f.offset} for f in self.facets],
        }


def build(points: Iterable[Sequence[int]]) -> NewtonPolyhedron:
    return NewtonPolyhedron(points)


def newton_polyhedron(h: MultiPoly) -> NewtonPolyhedron:
    if h.is_zero():
        raise ValueError("the zero polynomial has no Newton polyhedron")
    return NewtonPolyhedron(support(h))


def _check_weight(k: Sequence) -> list[Fraction]:
    k = [Fraction(x) for x in k]
    if any(x < 0 for x in k):
        raise ValueError(f"weight {k} has a negative entry")
    return k


def d_value(k: Sequence, gamma: NewtonPolyhedron) -> Fraction | int:
    k = _check_weight(k)
    val = min(dot(k, m) for m in gamma.generators)
    return int(val) if val.denominator == 1 else val


def first_meet_locus(k: Sequence, gamma: NewtonPolyhedron) -> frozenset[Vector]:
    k = _check_weight(k)
    values = {m: dot(k, m) for m in gamma.generators}
    low = min(values.values())
    return frozenset(m for m, v in values.items() if v == low)


def combined_polyhedron(gf: NewtonPolyhedron, gg: NewtonPolyhedron) -> NewtonPolyhedron:
    """Newton polyhedron of f*g, built from the Minkowski sum of the two supports.

    Only vertex sums are kept as generators: the other sum points lie in the
    polyhedron anyway.
    """
    if gf.n != gg.n:
        raise ValueError(f"dimension mismatch: {gf.n} vs {gg.n}")
    sums = {tuple(a + b for a, b in zip(u, v)) for u in gf.vertices for v in gg.vertices}
    return NewtonPolyhedron(sums)


@dataclass(frozen=True)
class DiagonalData:
    t0: Fraction
    tau0_support: frozenset[Vector]
    D_t0: tuple[Vector, ...]
    D_minus: tuple[Vector, ...]
    D_plus: tuple[Vector, ...]
    # coordinate directions e_i in the recession cone of tau0 (w_i = 0 for every w in D_t0)
    tau0_recession: tuple[int, ...]
    # for each w in D_t0: (d_g(w) == 0, diagonal point on F(w, Gamma_f)) and the mirrored pair
    corollary: tuple[tuple[Vector, bool, bool, bool, bool], ...]

    def to_json(self) -> dict:
        return {
            "t0": str(self.t0),
            "tau0_support": [list(m) for m in sorted(self.tau0_support)],
            "D_t0": [list(w) for w in self.D_t0],
            "D_minus": [list(w) for w in self.D_minus],
            "D_plus": [list(w) for w in self.D_plus],
            "tau0_recession": list(self.tau0_recession),
        }

    def tau0_within(self, k: Sequence, gfg: NewtonPolyhedron) -> bool:
        """Whether tau0 lies in the face F(k, gfg)."""
        if any(k[i] for i in self.tau0_recession):
            return False
        return self.tau0_support <= first_meet_locus(k, gfg)


def on_face(x: Sequence, w: Sequence[int], gamma: NewtonPolyhedron) -> bool:
    """Whether the point x of Gamma lies on the face F(w, Gamma)."""
    return gamma.contains(x) and dot(w, x) == d_value(w, gamma)


def diagonal_data(gfg: NewtonPolyhedron, gf: NewtonPolyhedron, gg: NewtonPolyhedron) -> DiagonalData:
    ratios = {fc.normal: Fraction(fc.offset, sum(fc.normal)) for fc in gfg.facets}
    t0 = max(ratios.values())
    if t0 <= 0:
        raise ValueError("the diagonal does not meet the boundary at a positive point")
    D = tuple(w for w in gfg.normals if ratios[w] == t0)
    tau = frozenset(gfg.generators)
    for w in D:
        tau &= first_meet_locus(w, gfg)
    recession = tuple(i for i in range(gfg.n) if all(w[i] == 0 for w in D))
    diag = [t0] * gf.n
    minus = tuple(w for w in D if d_value(w, gf) > d_value(w, gg))
    plus = tuple(w for w in D if d_value(w, gg) > d_value(w, gf))
    corollary = []
    for w in D:
        corollary.append(
            (
                w,
                d_value(w, gg) == 0,
                on_face(diag, w, gf),
                d_value(w, gf) == 0,
                on_face(diag, w, gg),
            )
        )
    return DiagonalData(t0, tau, D, minus, plus, recession, tuple(corollary))
