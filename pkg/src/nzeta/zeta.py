"""Explicit rational form of the local zeta function of f/g.

Each cone D of the fan contributes L_D * S_D.  S_D is read off the fundamental
parallelepiped of D and the d-values of the Newton polyhedra; L_D comes from
point counts of the face functions at the barycenter of D.  Summing all cone
terms gives Z(s, chi, f/g) as a rational function of t = q^(-s), which is then
reduced to canonical form t^k N(t) / D(t) with D(0) = 1 and gcd(N, D) = 1.
"""

from __future__ import annotations

import random
from collections import Counter
from itertools import combinations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import residue
from .cyclotomic import CycRat, Character, to_complex, to_json_number
from .errors import DegenerateError
from .fan import SimplicialCone, SimplicialFan, barycenter, fundamental_points, normal_subdivision
from .newton import NewtonPolyhedron, combined_polyhedron, d_value, newton_polyhedron
from .poly import MultiPoly, admit, face_function, product
from .upoly import RationalFunction, UPoly, gcd, multiplicity


@dataclass(frozen=True, order=True)
class AtomicFactor:
    """The factor 1 - q^(-a) t^b."""

    a: int
    b: int

    def __post_init__(self):
        if (self.a, self.b) == (0, 0):
            raise ValueError("the atomic factor (0, 0) vanishes identically")

    def polynomial(self, q: int) -> tuple[UPoly, int]:
        """(P, k) with 1 - q^(-a) t^b = t^k P(t) and P(0) != 0."""
        c = Fraction(1, q**self.a) if self.a >= 0 else Fraction(q ** (-self.a))
        if self.b >= 0:
            return UPoly([1] + [0] * (self.b - 1) + [-c]) if self.b else UPoly([1 - c]), 0
        return UPoly([-c] + [0] * (-self.b - 1) + [1]), self.b

    def rational(self, q: int) -> RationalFunction:
        poly, k = self.polynomial(q)
        return RationalFunction(poly, None, k)

    def value(self, q: int, t):
        return 1 - Fraction(1, q**self.a) * t**self.b

    @property
    def real_part(self) -> Fraction | None:
        """Re(s) of the zeros of this factor in s, None when b = 0."""
        return None if self.b == 0 else Fraction(-self.a, self.b)


# -- cone terms -----------------------------------------------------------------


@dataclass(frozen=True)
class SPart:
    """sum_{(a,b)} c q^(-a) t^b divided by prod (1 - q^(-a) t^b)."""

    numerator: tuple[tuple[int, int, int], ...]  # (a, b, coefficient)
    denominator: tuple[tuple[AtomicFactor, int], ...]  # (factor, multiplicity)

    def rational(self, q: int) -> RationalFunction:
        terms: dict[int, Fraction] = {}
        for a, b, c in self.numerator:
            terms[b] = terms.get(b, Fraction(0)) + Fraction(c, q**a)
        num = RationalFunction.laurent(terms)
        den = RationalFunction.constant(1)
        for atom, mult in self.denominator:
            for _ in range(mult):
                den = den * atom.rational(q)
        return num / den

    def value(self, q: int, t):
        num = sum(Fraction(c, q**a) * t**b for a, b, c in self.numerator)
        den = 1
        for atom, mult in self.denominator:
            den = den * atom.value(q, t) ** mult
        return num / den

    def to_json(self) -> dict:
        return {
            "numerator": [[a, b, c] for a, b, c in self.numerator],
            "denominator": [[f.a, f.b, m] for f, m in self.denominator],
        }


def s_delta(cone: SimplicialCone, gf: NewtonPolyhedron, gg: NewtonPolyhedron, points=None, q: int | None = None) -> SPart:
    if cone.is_zero():
        return SPart(((0, 0, 1),), ())
    pts = points if points is not None else fundamental_points(cone).points
    num: Counter = Counter()
    for t in pts:
        num[(sum(t), d_value(t, gf) - d_value(t, gg))] += 1
    den: Counter = Counter()
    for w in cone.generators:
        den[AtomicFactor(sum(w), d_value(w, gf) - d_value(w, gg))] += 1
    return SPart(
        tuple((a, int(b), c) for (a, b), c in sorted(num.items())),
        tuple(sorted(den.items())),
    )


# atomic factors of the L-part: 1 - q^-1 t and 1 - q^-1 t^-1
L_FACTORS = (AtomicFactor(1, 1), AtomicFactor(1, -1))


def l_delta(counts: residue.FaceCounts, chi: Character, q: int, n: int) -> RationalFunction:
    """L-part of a cone term as a rational function of t.

    For the trivial character this is the four-term expression in the
    counts N_f, N_g, N_fg with constant (q-1)^n / q^n; otherwise it is the
    constant character sum counts.nu.
    """
    if not chi.is_trivial:
        return RationalFunction.constant(counts.nu)
    t = RationalFunction(UPoly([0, 1]))
    tinv = RationalFunction(UPoly([1]), None, -1)
    qf = Fraction(1, q)
    one_minus_t = 1 - t
    one_minus_tinv = 1 - tinv
    a = 1 - t * qf  # 1 - q^(-1-s)
    b = 1 - tinv * qf  # 1 - q^(-1+s)
    value = RationalFunction.constant(Fraction((q - 1) ** n, q**n))
    if counts.N_f:
        value = value - counts.N_f * one_minus_t / a
    if counts.N_g:
        value = value - counts.N_g * one_minus_tinv / b
    if counts.N_fg:
        value = value - counts.N_fg * one_minus_t * one_minus_tinv / (q * a * b)
    return value


def l_delta_value(counts: residue.FaceCounts, chi: Character, q: int, n: int, t):
    """Direct evaluation of the L-part at t (no reduction)."""
    if not chi.is_trivial:
        return counts.nu
    a = 1 - t / q
    b = 1 - 1 / (q * t)
    return (
        Fraction((q - 1) ** n, q**n)
        - counts.N_f * (1 - t) / a
        - counts.N_g * (1 - 1 / t) / b
        - counts.N_fg * (1 - t) * (1 - 1 / t) / (q * a * b)
    )


@dataclass(frozen=True)
class ConeTerm:
    cone: SimplicialCone
    face_f: MultiPoly
    face_g: MultiPoly
    points: tuple[tuple[int, ...], ...]
    counts: residue.FaceCounts
    S: SPart

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        return {
            "cone": self.cone.id,
            "generators": [list(w) for w in self.cone.generators],
            "face_f": self.face_f.to_str(names),
            "face_g": self.face_g.to_str(names),
            "fundamental_points": [list(t) for t in self.points],
            "L": self.counts.to_json(),
            "S": self.S.to_json(),
        }


# -- canonical form ---------------------------------------------------------------


@dataclass(frozen=True)
class CircleFactor:
    """Part of the reduced denominator whose roots lie on one circle |t| = q^(-c)."""

    real_part: Fraction
    polynomial: UPoly
    atoms: tuple[tuple[AtomicFactor, int], ...]
    residual: UPoly  # what is left after dividing out whole atomic factors


def _circle_split(den: UPoly, atoms: Sequence[AtomicFactor], q: int) -> list[CircleFactor]:
    by_circle: dict[Fraction, list[AtomicFactor]] = {}
    for atom in set(atoms):
        if atom.b != 0:
            by_circle.setdefault(atom.real_part, []).append(atom)
    rest = den
    circles = []
    for c in sorted(by_circle):
        members = sorted(by_circle[c], key=lambda f: (-abs(f.b), f))
        part = UPoly([1])
        for atom in members:
            poly = atom.polynomial(q)[0]
            while True:
                g = gcd(rest, poly)
                if g.degree <= 0:
                    break
                part = part * g
                rest = rest.exact_div(g)
        if part.degree <= 0:
            continue
        remaining = part
        found = []
        for atom in members:
            poly = atom.polynomial(q)[0]
            k = multiplicity(remaining, poly)
            for _ in range(k):
                remaining = remaining.exact_div(poly)
            if k:
                found.append((atom, k))
        circles.append(CircleFactor(c, part.monic(), tuple(found), remaining.monic()))
    if rest.degree > 0:
        raise AssertionError("denominator has roots off every candidate circle")
    return circles


@dataclass
class RationalZeta:
    f: MultiPoly
    g: MultiPoly
    p: int
    chi: Character
    terms: list[ConeTerm]
    canonical: RationalFunction
    circles: list[CircleFactor]
    spot_checks: list[tuple[Fraction, object]] = field(default_factory=list)

    @property
    def q(self) -> int:
        return self.p

    @property
    def denominator_factors(self) -> list[tuple[AtomicFactor, int]]:
        return [pair for c in self.circles for pair in c.atoms]

    def at_t(self, t):
        return self.canonical(t)

    def evaluate(self, s: complex) -> complex:
        """Numerical value at a complex s (double precision)."""
        t = complex(self.p) ** (-complex(s))
        num = sum((to_complex(c) * t**i for i, c in enumerate(self.canonical.num.coeffs)), 0j)
        den = sum((to_complex(c) * t**i for i, c in enumerate(self.canonical.den.coeffs)), 0j)
        return num / den * t**self.canonical.shift

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        can = self.canonical
        return {
            "cones": [term.to_json(names) for term in self.terms],
            "canonical": {
                "t_power": can.shift,
                "numerator": [to_json_number(c) for c in can.num.coeffs],
                "denominator": [to_json_number(c) for c in can.den.coeffs],
                "denominator_factors": [[f.a, f.b, m] for f, m in self.denominator_factors],
                "residual_factors": [
                    {"real_part": str(c.real_part), "coefficients": [to_json_number(x) for x in c.residual.coeffs]}
                    for c in self.circles
                    if c.residual.degree > 0
                ],
            },
        }


def term_value(term: ConeTerm, chi: Character, q: int, n: int, t):
    return l_delta_value(term.counts, chi, q, n, t) * term.S.value(q, t)


def _spot_points(atoms: Sequence[AtomicFactor], q: int, seed: int, count: int = 3) -> list[Fraction]:
    rng = random.Random(seed)
    points: list[Fraction] = []
    while len(points) < count:
        t = Fraction(rng.randint(1, 97), rng.randint(1, 97)) * rng.choice((1, -1))
        if t in points or any(a.value(q, t) == 0 for a in atoms) or 1 - t / q == 0 or q * t == 1:
            continue
        points.append(t)
    return points


def build_terms(
    f: MultiPoly,
    g: MultiPoly,
    chi: Character,
    p: int,
    fan: SimplicialFan,
    gf: NewtonPolyhedron,
    gg: NewtonPolyhedron,
    max_evals: int | None = None,
) -> list[ConeTerm]:
    terms = []
    n = f.n
    for cone in fan.all_cones():
        k = barycenter(cone, n)
        ff, gk = face_function(f, k), face_function(g, k)
        pts = fundamental_points(cone).points if not cone.is_zero() else ()
        counts = residue.face_counts(ff, gk, p, chi, max_evals)
        terms.append(ConeTerm(cone, ff, gk, pts, counts, s_delta(cone, gf, gg, pts, p)))
    return terms


def canonicalize(terms: Sequence[ConeTerm], chi: Character, q: int, n: int, seed: int = 0) -> tuple[RationalFunction, list, list]:
    total = RationalFunction.constant(0)
    atoms: list[AtomicFactor] = list(L_FACTORS)
    for term in terms:
        atoms.extend(f for f, _ in term.S.denominator)
        total = total + l_delta(term.counts, chi, q, n) * term.S.rational(q)
    checks = []
    for t in _spot_points(atoms, q, seed):
        direct = sum(term_value(term, chi, q, n, t) for term in terms)
        reduced = total(t)
        if direct != reduced:
            raise AssertionError(f"canonical form disagrees with the term sum at t={t}")
        checks.append((t, reduced))
    circles = _circle_split(total.den, atoms, q) if not total.is_zero() else []
    return total, circles, checks


def explicit_formula_rational(
    f: MultiPoly,
    g: MultiPoly,
    chi: Character,
    p: int,
    *,
    allow_degenerate: bool = False,
    max_evals: int | None = None,
    seed: int = 0,
) -> RationalZeta:
    admit(f, p, "f")
    admit(g, p, "g")
    if f.n != g.n:
        raise ValueError("f and g live in different dimensions")
    if chi.p != p:
        raise ValueError("character and prime disagree")
    gf, gg = newton_polyhedron(f), newton_polyhedron(g)
    gfg = combined_polyhedron(gf, gg)
    fan = normal_subdivision(gfg)
    verdict = residue.check_nondegenerate(f, g, fan, p, max_evals)
    if not verdict.nondegenerate and not allow_degenerate:
        raise DegenerateError("f/g is degenerate with respect to its Newton polyhedron", verdict.witness)
    terms = build_terms(f, g, chi, p, fan, gf, gg, max_evals)
    canonical, circles, checks = canonicalize(terms, chi, p, f.n, seed)
    return RationalZeta(f, g, p, chi, terms, canonical, circles, checks)


def degree_bound(terms: Sequence[ConeTerm]) -> int:
    total = 2  # the two L-part factors
    for term in terms:
        total += len(term.points) + sum(abs(f.b) * m for f, m in term.S.denominator)
    return total


# -- holomorphy band ----------------------------------------------------------------


@dataclass(frozen=True)
class Band:
    lower: Fraction | None  # None encodes -infinity
    upper: Fraction | None  # None encodes +infinity

    def contains(self, x) -> bool:
        return (self.lower is None or x > self.lower) and (self.upper is None or x < self.upper)

    def to_json(self) -> dict:
        return {
            "lower": "-inf" if self.lower is None else str(self.lower),
            "upper": "+inf" if self.upper is None else str(self.upper),
        }


def holomorphy_band(tsets, chi: Character) -> Band:
    if chi.is_trivial:
        lower = Fraction(-1) if tsets.beta is None else max(tsets.beta, Fraction(-1))
        upper = Fraction(1) if tsets.alpha is None else min(tsets.alpha, Fraction(1))
        return Band(lower, upper)
    return Band(tsets.beta, tsets.alpha)


# -- several polynomials -------------------------------------------------------------


@dataclass(frozen=True)
class MultiConeTerm:
    cone: SimplicialCone
    faces: tuple[MultiPoly, ...]
    nu: object
    sigmas: tuple[tuple[tuple[int, ...], Fraction], ...]  # (zero pattern, sigma)
    numerator: tuple[tuple[int, tuple, int], ...]  # (sigma(t), d-vector, count)
    denominator: tuple[tuple[int, tuple], ...]  # (sigma(w), d-vector) per generator

    def l_value(self, q: int, T: Sequence):
        total = self.nu
        for pattern, sigma in self.sigmas:
            if not sigma:
                continue
            prod = sigma
            for i in pattern:
                prod = prod * (q - 1) * T[i] / q / (1 - T[i] / q)
            total = total + prod
        return total

    def s_value(self, q: int, T: Sequence):
        def mono(a, d):
            val = Fraction(1, q**a)
            for Ti, di in zip(T, d):
                val = val * Ti**di
            return val

        num = sum(c * mono(a, d) for a, d, c in self.numerator)
        den = 1
        for a, d in self.denominator:
            den = den * (1 - mono(a, d))
        return num / den


@dataclass
class MultivariateZeta:
    polys: tuple[MultiPoly, ...]
    chars: tuple
    p: int
    terms: list[MultiConeTerm]

    def value(self, T: Sequence):
        """Exact value at T_i = q^(-s_i)."""
        return sum((term.l_value(self.p, T) * term.s_value(self.p, T) for term in self.terms), Fraction(0))


def explicit_formula_multivariate(
    polys: Sequence[MultiPoly],
    chars: Sequence,
    p: int,
    fan: SimplicialFan | None = None,
    *,
    allow_degenerate: bool = False,
    max_evals: int | None = None,
) -> MultivariateZeta:
    polys = tuple(polys)
    n = polys[0].n
    if len(polys) > n:
        raise ValueError("more polynomials than variables")
    gammas = [newton_polyhedron(h) for h in polys]
    if fan is None:
        prod = polys[0]
        for h in polys[1:]:
            prod = product(prod, h)
        fan = normal_subdivision(newton_polyhedron(prod))
    verdict = residue.check_nondegenerate_system(polys, fan, p, max_evals)
    if not verdict.nondegenerate and not allow_degenerate:
        raise DegenerateError("the polynomial system is degenerate", verdict.witness)
    r = len(polys)
    trivial = all(c.is_trivial for c in chars)
    terms = []
    for cone in fan.all_cones():
        k = barycenter(cone, n)
        faces = tuple(face_function(h, k) for h in polys)
        nu_value = residue.nu(faces, chars, p, max_evals)
        sigmas = []
        if trivial:
            for size in range(1, r + 1):
                for pattern in combinations(range(r), size):
                    sigmas.append((pattern, residue.sigma_I(faces, set(pattern), p, chars, max_evals)))
        if cone.is_zero():
            numerator = ((0, (0,) * r, 1),)
            denominator = ()
        else:
            counter: Counter = Counter()
            for t in fundamental_points(cone).points:
                counter[(sum(t), tuple(d_value(t, gm) for gm in gammas))] += 1
            numerator = tuple((a, d, c) for (a, d), c in sorted(counter.items()))
            denominator = tuple((sum(w), tuple(d_value(w, gm) for gm in gammas)) for w in cone.generators)
        terms.append(MultiConeTerm(cone, faces, nu_value, tuple(sigmas), numerator, denominator))
    return MultivariateZeta(polys, tuple(chars), p, terms)
