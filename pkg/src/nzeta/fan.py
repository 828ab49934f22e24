"""Simplicial fans subordinate to a Newton polyhedron.

The normal cone of each vertex of the polyhedron is spanned by the normals of
the facets through that vertex.  Each such cone is triangulated by placing its
rays one at a time in a global lexicographic order; placing triangulations
restrict to placing triangulations on common faces, so the pieces glue into a
fan covering R_+^n without adding rays.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import lattice
from .linalg import Vector, rank, solve_in_span
from .newton import NewtonPolyhedron, first_meet_locus


@dataclass(frozen=True)
class SimplicialCone:
    id: int
    generators: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, k: Sequence) -> bool:
        """Membership of k in the relatively open cone."""
        if not self.generators:
            return not any(k)
        lam = solve_in_span(self.generators, k)
        return lam is not None and all(x > 0 for x in lam)

    def coefficients(self, k: Sequence) -> list[Fraction] | None:
        return solve_in_span(self.generators, k) if self.generators else None

    def to_json(self) -> dict:
        return {"id": self.id, "generators": [list(w) for w in self.generators]}


ZERO_CONE_ID = 0


def barycenter(cone: SimplicialCone, n: int | None = None) -> Vector:
    if not cone.generators:
        if n is None:
            raise ValueError("dimension needed for the barycenter of the zero cone")
        return (0,) * n
    return tuple(sum(col) for col in zip(*cone.generators))


@dataclass(frozen=True)
class FundamentalPoints:
    cone_id: int
    points: tuple[Vector, ...]


def fundamental_points(cone: SimplicialCone) -> FundamentalPoints:
    return FundamentalPoints(cone.id, tuple(lattice.fundamental_points(cone.generators)))


def place(rays: Sequence[Vector]) -> list[tuple[int, ...]]:
    """Placing triangulation of the cone spanned by rays, in the given order.

    Returns maximal simplices as tuples of indices into rays.  Every ray is
    assumed to be extreme in the cone spanned by it and its predecessors.
    """
    simplices: list[tuple[int, ...]] = []
    used: list[int] = []
    for idx, r in enumerate(rays):
        if not simplices:
            simplices = [(idx,)]
        elif rank([rays[i] for i in used] + [r]) > len(simplices[0]):
            simplices = [s + (idx,) for s in simplices]
        else:
            counts: dict[frozenset[int], int] = {}
            for s in simplices:
                for j in range(len(s)):
                    facet = frozenset(s[:j] + s[j + 1 :])
                    counts[facet] = counts.get(facet, 0) + 1
            new = []
            for s in simplices:
                mu = solve_in_span([rays[i] for i in s], r)
                for j, m in enumerate(mu):
                    facet = s[:j] + s[j + 1 :]
                    if m < 0 and counts[frozenset(facet)] == 1:
                        new.append(facet + (idx,))
            if not new:
                raise AssertionError("ray is not extreme in the placing order")
            simplices.extend(new)
        used.append(idx)
    return simplices


class SimplicialFan:
    def __init__(self, polyhedron: NewtonPolyhedron, cones: Sequence[SimplicialCone]):
        self.polyhedron = polyhedron
        self.n = polyhedron.n
        self.cones: tuple[SimplicialCone, ...] = tuple(cones)
        self.zero = SimplicialCone(ZERO_CONE_ID, ())

    def all_cones(self) -> tuple[SimplicialCone, ...]:
        """The zero cone followed by the cones of the fan."""
        return (self.zero,) + self.cones

    def rays(self) -> tuple[Vector, ...]:
        return tuple(c.generators[0] for c in self.cones if c.dim == 1)

    def locate(self, k: Sequence) -> SimplicialCone:
        hits = [c for c in self.all_cones() if c.contains(k)]
        if len(hits) != 1:
            raise AssertionError(f"point {tuple(k)} lies in {len(hits)} cones")
        return hits[0]

    def cone(self, cone_id: int) -> SimplicialCone:
        return self.all_cones()[cone_id]

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.cones]


def normal_subdivision(gamma: NewtonPolyhedron) -> SimplicialFan:
    normals = sorted(gamma.normals)
    simplices: set[tuple[Vector, ...]] = set()
    for v in gamma.vertices:
        rays = [fc.normal for fc in gamma.facets if v in fc.supporting_support]
        rays.sort()
        for s in place(rays):
            gens = tuple(sorted(rays[i] for i in s))
            for size in range(1, len(gens) + 1):
                simplices.update(combinations(gens, size))
    ordered = sorted(simplices, key=lambda g: (len(g), g))
    cones = [SimplicialCone(i + 1, g) for i, g in enumerate(ordered)]
    assert all(w in normals for c in cones for w in c.generators)
    return SimplicialFan(gamma, cones)


def is_subordinate(fan: SimplicialFan, cone: SimplicialCone, samples: Sequence[Sequence]) -> bool:
    ref = first_meet_locus(barycenter(cone, fan.n), fan.polyhedron)
    return all(first_meet_locus(k, fan.polyhedron) == ref for k in samples)
