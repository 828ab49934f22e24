"""Candidate poles, expected orders and the real poles actually present.

The predictions come from the polyhedral data: every pole lies on a circle
Re(s) = sigma(w) / (d_g(w) - d_f(w)) for a facet normal w of Gamma(fg), or on
Re(s) = +-1 for the trivial character.  The verdicts of the extreme-pole
theorems are reported next to the orders read off the canonical fraction, so
that every claim can be compared against an exact computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cyclotomic import Character, CycRat
from .fan import SimplicialFan
from .newton import DiagonalData, NewtonPolyhedron, d_value, diagonal_data
from .residue import FaceCounts
from .upoly import UPoly, multiplicity
from .zeta import RationalZeta

Vector = tuple[int, ...]

L_MARKER = "L"  # source tag for the +-1 candidates coming from the L-parts


def _ratio(w: Sequence[int], gf: NewtonPolyhedron, gg: NewtonPolyhedron) -> Fraction | None:
    diff = d_value(w, gg) - d_value(w, gf)
    if diff == 0:
        return None
    return Fraction(sum(w)) / diff


@dataclass(frozen=True)
class TSets:
    D_fg: tuple[Vector, ...]
    T_plus: tuple[Vector, ...]
    T_minus: tuple[Vector, ...]
    alpha: Fraction | None
    beta: Fraction | None
    ratios: dict = field(compare=False, hash=False)  # normal -> candidate real part
    differences: dict = field(compare=False, hash=False)  # normal -> d_g - d_f

    def to_json(self) -> dict:
        return {
            "D_fg": [list(w) for w in self.D_fg],
            "T_plus": [list(w) for w in self.T_plus],
            "T_minus": [list(w) for w in self.T_minus],
            "alpha": None if self.alpha is None else str(self.alpha),
            "beta": None if self.beta is None else str(self.beta),
        }


def t_sets(gf: NewtonPolyhedron, gg: NewtonPolyhedron, gfg: NewtonPolyhedron) -> TSets:
    normals = gfg.normals
    diffs = {w: d_value(w, gg) - d_value(w, gf) for w in normals}
    plus = tuple(w for w in normals if diffs[w] > 0)
    minus = tuple(w for w in normals if diffs[w] < 0)
    ratios = {w: Fraction(sum(w)) / diffs[w] for w in plus + minus}
    alpha = min((ratios[w] for w in plus), default=None)
    beta = max((ratios[w] for w in minus), default=None)
    return TSets(normals, plus, minus, alpha, beta, ratios, diffs)


# -- expected orders ------------------------------------------------------------------


def pole_set(k: Fraction, tsets: TSets) -> frozenset[Vector]:
    """The normals of T_- (k < 0) or T_+ (k > 0) whose candidate real part is k."""
    pool = tsets.T_minus if k < 0 else tsets.T_plus
    return frozenset(w for w in pool if tsets.ratios[w] == k)


def rho(k: Fraction, tsets: TSets, fan: SimplicialFan) -> int:
    """Largest number of generators of one cone lying in pole_set(k)."""
    members = pole_set(k, tsets)
    return max((sum(1 for w in cone.generators if w in members) for cone in fan.cones), default=0)


def cones_attaining(k: Fraction, tsets: TSets, fan: SimplicialFan) -> list[int]:
    members = pole_set(k, tsets)
    r = rho(k, tsets, fan)
    if r == 0:
        return []
    return [c.id for c in fan.cones if sum(1 for w in c.generators if w in members) == r]


def l_witness(counts: FaceCounts, side: int) -> bool:
    """Whether the L-part of a cone has a pole at Re(s) = side (side = -1 or 1)."""
    if side < 0:
        return counts.N_f != 0 or counts.N_fg != 0
    return counts.N_g != 0 or counts.N_fg != 0


@dataclass(frozen=True)
class OrderEstimate:
    order: int
    low: int
    high: int
    justification: str


def expected_order(
    k: Fraction,
    fan: SimplicialFan,
    tsets: TSets,
    chi: Character,
    cone_counts: dict[int, FaceCounts],
) -> OrderEstimate:
    """Expected order of the candidate real part k.

    Away from +-1 (or for a nontrivial character) this is rho(k).  At +-1 with
    the trivial character a cone contributes its generators in pole_set(k)
    plus one when its L-part has the matching pole, and the expected order is
    the largest contribution; the admissible range [1, rho + 1] is reported
    alongside.
    """
    k = Fraction(k)
    at_unit = chi.is_trivial and abs(k) == 1
    members = pole_set(k, tsets) if k != 0 else frozenset()
    if not members and not at_unit:
        raise ValueError(f"{k} is not a candidate real part")
    r = rho(k, tsets, fan)
    if not at_unit:
        return OrderEstimate(r, r, r, "expected-rho")
    side = -1 if k < 0 else 1
    best = 0
    for cone in fan.all_cones():
        m = sum(1 for w in cone.generators if w in members)
        best = max(best, m + (1 if l_witness(cone_counts[cone.id], side) else 0))
    return OrderEstimate(best, min(best, 1), r + 1, "expected-unit-cone-max")


@dataclass(frozen=True)
class CandidatePole:
    real_part: Fraction
    sources: tuple  # facet normals, plus L_MARKER for +-1 with the trivial character
    period_denominators: tuple[int, ...]
    expected: OrderEstimate | None

    def to_json(self) -> dict:
        out = {
            "real_part": str(self.real_part),
            "sources": [s if s == L_MARKER else list(s) for s in self.sources],
            "period_denominators": list(self.period_denominators),
        }
        if self.expected is not None:
            out["expected_order"] = self.expected.order
            out["expected_order_range"] = [self.expected.low, self.expected.high]
            out["justification"] = self.expected.justification
        return out


def candidate_poles(
    tsets: TSets,
    chi: Character,
    fan: SimplicialFan | None = None,
    cone_counts: dict[int, FaceCounts] | None = None,
) -> list[CandidatePole]:
    """Candidate real parts merged by value, sorted increasingly."""
    sources: dict[Fraction, list] = {}
    for w in tsets.T_minus + tsets.T_plus:
        sources.setdefault(tsets.ratios[w], []).append(w)
    if chi.is_trivial:
        for k in (Fraction(-1), Fraction(1)):
            sources.setdefault(k, []).append(L_MARKER)
    out = []
    for k in sorted(sources):
        normals = [s for s in sources[k] if s != L_MARKER]
        periods = sorted({abs(tsets.differences[w]) for w in normals})
        if L_MARKER in sources[k]:
            periods = sorted(set(periods) | {1})
        est = None
        if fan is not None and cone_counts is not None:
            est = expected_order(k, fan, tsets, chi, cone_counts)
        out.append(CandidatePole(k, tuple(sorted(normals)) + ((L_MARKER,) if L_MARKER in sources[k] else ()), tuple(periods), est))
    return out


# -- actual poles at real points ------------------------------------------------------


@dataclass(frozen=True)
class RealPole:
    real_part: Fraction
    order: int
    conservative: bool  # the real-point order may be understated (see real_point_order)
    complex_order_bound: int  # bound for the other points of the circle

    def to_json(self) -> dict:
        return {
            "real_part": str(self.real_part),
            "order": self.order,
            "conservative": self.conservative,
            "complex_order_bound": self.complex_order_bound,
        }


def _minimal_polynomial(c: Fraction, q: int) -> UPoly:
    # t = q^(-c) with c = u/v satisfies t^v = q^(-u); irreducible over Q for prime q
    u, v = c.numerator, c.denominator
    return UPoly([-Fraction(q) ** (-u)] + [0] * (v - 1) + [1])


def _components(poly: UPoly, order: int) -> list[UPoly]:
    """Write poly = sum_j zeta^j P_j(t) with rational P_j."""
    size = len(CycRat(order, [0, 1]).components()) if order > 1 else 1
    cols: list[list[Fraction]] = [[] for _ in range(size)]
    for c in poly.coeffs:
        comps = c.components() if isinstance(c, CycRat) else [Fraction(c)]
        comps = comps + [Fraction(0)] * (size - len(comps))
        for j in range(size):
            cols[j].append(comps[j])
    return [UPoly(col) for col in cols]


def real_point_order(den: UPoly, c: Fraction, q: int, char_order: int = 1) -> tuple[int, bool]:
    """Vanishing order of den at the positive real point t = q^(-c).

    With rational coefficients this is the multiplicity of the (irreducible)
    minimal polynomial.  With cyclotomic coefficients each power-basis
    component must vanish; this is exact when Q(q^(1/v)) and Q(zeta_M) meet
    only in Q, and a lower bound otherwise (flagged).
    """
    minimal = _minimal_polynomial(Fraction(c), q)
    if char_order == 1:
        return multiplicity(den, minimal), False
    parts = [P for P in _components(den, char_order) if not P.is_zero()]
    order = min(multiplicity(P, minimal) for P in parts) if parts else 0
    conservative = Fraction(c).denominator % 2 == 0 and char_order % q == 0
    return order, conservative


def actual_real_poles(rz: RationalZeta) -> list[RealPole]:
    q = rz.p
    out = []
    for circle in rz.circles:
        order, conservative = real_point_order(rz.canonical.den, circle.real_part, q, rz.chi.m)
        bound = sum(m for _, m in circle.atoms) + (1 if circle.residual.degree > 0 else 0)
        if order > 0:
            out.append(RealPole(circle.real_part, order, conservative, bound))
    return out


# -- verdicts ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoleVerdict:
    """A predicted extreme real pole together with what the fraction shows."""

    real_part: Fraction | None  # None: no pole on that side is predicted
    order: int | None
    justification: str
    actual_real_part: Fraction | None
    actual_order: int | None

    @property
    def agrees(self) -> bool | None:
        if self.justification in ("twisted-no-theorem",):
            return None
        return (self.real_part, self.order) == (self.actual_real_part, self.actual_order)

    def to_json(self) -> dict:
        fmt = lambda x: None if x is None else str(x)  # noqa: E731
        return {
            "real_part": fmt(self.real_part),
            "order": self.order,
            "justification": self.justification,
            "actual": {"real_part": fmt(self.actual_real_part), "order": self.actual_order},
            "agrees": self.agrees,
        }


def _any_witness(fan: SimplicialFan, cone_counts, side: int, cone_ids=None) -> bool:
    ids = [c.id for c in fan.all_cones()] if cone_ids is None else cone_ids
    return any(l_witness(cone_counts[i], side) for i in ids)


def _extreme_prediction(side: int, tsets: TSets, fan: SimplicialFan, cone_counts) -> tuple:
    """(real part, order, tag) for the largest negative (side=-1) or smallest positive pole."""
    sign = "negative" if side < 0 else "positive"
    prime = "" if side < 0 else "'"
    ext = tsets.beta if side < 0 else tsets.alpha
    unit = Fraction(side)
    if ext is None:
        if _any_witness(fan, cone_counts, side):
            return unit, 1, f"{sign}-pole-2{prime}"
        return None, None, f"{sign}-pole-absent"
    r = rho(ext, tsets, fan)
    inside = ext > -1 if side < 0 else ext < 1
    if inside:
        return ext, r, f"{sign}-pole-1a{prime}"
    if ext == unit:
        attaining = cones_attaining(ext, tsets, fan)
        extra = 1 if _any_witness(fan, cone_counts, side, attaining) else 0
        return ext, r + extra, f"{sign}-pole-1c{prime}"
    if _any_witness(fan, cone_counts, side):
        return unit, 1, f"{sign}-pole-1b{prime}-unit"
    return ext, r, f"{sign}-pole-1b{prime}-extreme"


@dataclass(frozen=True)
class DiagonalVerdict:
    name: str  # "diagonal-negative" or "diagonal-positive"
    applies: bool
    witnesses: tuple[Vector, ...]  # normals w of D(t0) with the diagonal point on F(w, Gamma_h)
    pole: Fraction | None  # -1/t0 or 1/t0
    extreme_matches: bool | None  # beta = -1/t0 (resp. alpha = 1/t0)
    expected_order: int | None
    guaranteed: bool  # trivial character and t0 > 1: a pole of exactly that order
    actual_order: int | None

    def to_json(self) -> dict:
        return {
            "justification": self.name,
            "applies": self.applies,
            "witnesses": [list(w) for w in self.witnesses],
            "pole": None if self.pole is None else str(self.pole),
            "extreme_matches": self.extreme_matches,
            "expected_order": self.expected_order,
            "guaranteed": self.guaranteed,
            "actual_order": self.actual_order,
        }


def _diagonal_verdict(
    side: int,
    diag: DiagonalData,
    gf: NewtonPolyhedron,
    gg: NewtonPolyhedron,
    tsets: TSets,
    fan: SimplicialFan,
    chi: Character,
    cone_counts,
    actual: dict[Fraction, int],
) -> DiagonalVerdict:
    name = "diagonal-negative" if side < 0 else "diagonal-positive"
    # corollary rows: (w, d_g == 0, diag on F(w, Gf), d_f == 0, diag on F(w, Gg))
    idx = 2 if side < 0 else 4
    witnesses = tuple(row[0] for row in diag.corollary if row[idx])
    if not witnesses:
        return DiagonalVerdict(name, False, (), None, None, None, False, None)
    pole = Fraction(side) / diag.t0
    ext = tsets.beta if side < 0 else tsets.alpha
    r = rho(pole, tsets, fan)
    order = r
    if chi.is_trivial and diag.t0 == 1:
        attaining = cones_attaining(pole, tsets, fan)
        order = r + (1 if _any_witness(fan, cone_counts, side, attaining) else 0)
    guaranteed = chi.is_trivial and diag.t0 > 1
    return DiagonalVerdict(name, True, witnesses, pole, ext == pole, order, guaranteed, actual.get(pole))


@dataclass(frozen=True)
class NonPoleRemark:
    applies: bool
    excluded: tuple[Fraction, ...]
    actual_present: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "justification": "non-pole-remark",
            "applies": self.applies,
            "excluded": [str(x) for x in self.excluded],
            "actual_present": [str(x) for x in self.actual_present],
        }


def _non_pole_remark(diag: DiagonalData, gf, gg, chi: Character, actual) -> NonPoleRemark:
    applies = all(d_value(w, gf) != 0 and d_value(w, gg) != 0 for w in diag.D_t0)
    if not applies:
        return NonPoleRemark(False, (), ())
    excluded = [-1 / diag.t0, 1 / diag.t0]
    if chi.is_trivial and diag.t0 == 1:
        # +-1 may still be poles of the L-parts
        excluded = []
    present = tuple(x for x in excluded if x in actual)
    return NonPoleRemark(True, tuple(excluded), present)


def _contains(outer: NewtonPolyhedron, inner: NewtonPolyhedron) -> bool:
    """Whether inner is a subset of outer, tested on the facet normals of outer."""
    return all(d_value(w, inner) >= d_value(w, outer) for w in outer.normals)


@dataclass(frozen=True)
class InclusionVerdict:
    case: str  # inclusion-i .. inclusion-iv, or inclusion-none
    negative_side: str
    positive_side: str
    no_poles: bool

    def to_json(self) -> dict:
        return {
            "justification": self.case,
            "negative_side": self.negative_side,
            "positive_side": self.positive_side,
            "no_poles": self.no_poles,
        }


def classify_inclusion(gf: NewtonPolyhedron, gg: NewtonPolyhedron, fan: SimplicialFan, cone_counts) -> InclusionVerdict:
    g_in_f = _contains(gf, gg)
    f_in_g = _contains(gg, gf)
    if g_in_f and f_in_g:
        silent = all(
            c.N_f == 0 and c.N_g == 0 and c.N_fg == 0 for c in (cone_counts[k.id] for k in fan.all_cones())
        )
        if silent:
            return InclusionVerdict("inclusion-iv", "none", "none", True)
        return InclusionVerdict("inclusion-iii", "at most -1", "at most 1", False)
    if g_in_f:
        return InclusionVerdict("inclusion-i", "at most -1", "positive-pole theorem", False)
    if f_in_g:
        return InclusionVerdict("inclusion-ii", "negative-pole theorem", "at most 1", False)
    return InclusionVerdict("inclusion-none", "negative-pole theorem", "positive-pole theorem", False)


@dataclass
class PoleReport:
    tsets: TSets
    diagonal: DiagonalData
    candidates: list[CandidatePole]
    actual: list[RealPole]
    largest_negative: PoleVerdict
    smallest_positive: PoleVerdict
    diagonal_negative: DiagonalVerdict
    diagonal_positive: DiagonalVerdict
    non_pole: NonPoleRemark
    inclusion: InclusionVerdict
    bounds_hold: bool

    def candidate_real_parts(self) -> list[Fraction]:
        return [c.real_part for c in self.candidates]

    def actual_real_parts(self) -> list[Fraction]:
        return [p.real_part for p in self.actual]

    def to_json(self) -> dict:
        return {
            "t_sets": self.tsets.to_json(),
            "diagonal": self.diagonal.to_json(),
            "candidates": [c.to_json() for c in self.candidates],
            "actual_real_poles": [p.to_json() for p in self.actual],
            "largest_negative": self.largest_negative.to_json(),
            "smallest_positive": self.smallest_positive.to_json(),
            "diagonal_theorems": [self.diagonal_negative.to_json(), self.diagonal_positive.to_json()],
            "non_pole_remark": self.non_pole.to_json(),
            "classification": self.inclusion.to_json(),
            "bounds_hold": self.bounds_hold,
        }


def bounds_hold(actual: Sequence[RealPole], t0: Fraction, chi: Character) -> bool:
    """Negative real parts are <= -1/t0 and positive ones >= 1/t0, up to +-1 for the trivial character."""
    for pole in actual:
        c = pole.real_part
        if chi.is_trivial and abs(c) == 1:
            continue
        if c < 0 and c > -1 / t0:
            return False
        if c > 0 and c < 1 / t0:
            return False
    return True


def real_pole_analysis(
    gf: NewtonPolyhedron,
    gg: NewtonPolyhedron,
    gfg: NewtonPolyhedron,
    fan: SimplicialFan,
    rz: RationalZeta,
) -> PoleReport:
    chi = rz.chi
    cone_counts = {term.cone.id: term.counts for term in rz.terms}
    tsets = t_sets(gf, gg, gfg)
    diag = diagonal_data(gfg, gf, gg)
    candidates = candidate_poles(tsets, chi, fan, cone_counts)
    actual = actual_real_poles(rz)
    orders = {p.real_part: p.order for p in actual}
    negatives = [c for c in orders if c < 0]
    positives = [c for c in orders if c > 0]
    act_neg = max(negatives, default=None)
    act_pos = min(positives, default=None)
    if chi.is_trivial:
        neg = _extreme_prediction(-1, tsets, fan, cone_counts)
        pos = _extreme_prediction(1, tsets, fan, cone_counts)
    else:
        neg = (None, None, "twisted-no-theorem")
        pos = (None, None, "twisted-no-theorem")
    largest_negative = PoleVerdict(*neg, act_neg, orders.get(act_neg))
    smallest_positive = PoleVerdict(*pos, act_pos, orders.get(act_pos))
    return PoleReport(
        tsets=tsets,
        diagonal=diag,
        candidates=candidates,
        actual=actual,
        largest_negative=largest_negative,
        smallest_positive=smallest_positive,
        diagonal_negative=_diagonal_verdict(-1, diag, gf, gg, tsets, fan, chi, cone_counts, orders),
        diagonal_positive=_diagonal_verdict(1, diag, gf, gg, tsets, fan, chi, cone_counts, orders),
        non_pole=_non_pole_remark(diag, gf, gg, chi, orders),
        inclusion=classify_inclusion(gf, gg, fan, cone_counts),
        bounds_hold=bounds_hold(actual, diag.t0, chi),
    )
