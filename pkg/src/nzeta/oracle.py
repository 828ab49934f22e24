"""Brute-force p-adic integration used to cross-check the explicit formula.

Partial sums use nothing from the polyhedral machinery: integrals are
approximated by enumerating residue classes mod p^m and grouping them by the
valuations (and angular components) of the integrand's polynomials.  Only the
tail majorant looks at supports and ray data.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cyclotomic import CycRat, Character, to_complex
from .errors import check_budget
from .poly import MultiPoly, evaluate_many, evaluate_residue, partial_derivative
from .residue import _rank_mod_p

CHUNK = 1 << 20


def _valuations(values: np.ndarray, p: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Valuations (capped at m) and unit parts of residues mod p^m."""
    vals = np.full(values.shape, m, dtype=np.int64)
    units = values.copy()
    nonzero = values != 0
    vals[nonzero] = 0
    active = nonzero.copy()
    while True:
        div = active & (units % p == 0)
        if not div.any():
            break
        units[div] //= p
        vals[div] += 1
        active = div
    return vals, units


def _grid_chunks(p: int, m: int, n: int):
    """Rows of (Z/p^m)^n in lexicographic order, in chunks."""
    modulus = p**m
    inner = max(0, n - 1)
    rest = np.array(list(itertools.product(range(modulus), repeat=inner)), dtype=np.int64).reshape(-1, inner)
    per_chunk = max(1, CHUNK // max(len(rest), 1))
    for start in range(0, modulus, per_chunk):
        firsts = np.arange(start, min(start + per_chunk, modulus), dtype=np.int64)
        block = np.empty((len(firsts) * len(rest), n), dtype=np.int64)
        block[:, 0] = np.repeat(firsts, len(rest))
        if inner:
            block[:, 1:] = np.tile(rest, (len(firsts), 1))
        yield block


@dataclass
class ValuationFiberTable:
    p: int
    n: int
    depth: int
    entries: dict[tuple[int, int], Fraction]  # (nu(f), nu(g)) -> measure
    weighted: dict[tuple[int, int], object]  # (nu(f), nu(g)) -> measure weighted by chi(ac f/g)
    unresolved: Fraction
    # (a, a_exact, b, b_exact, ord x) -> measure; a, b are exact valuations or
    # lower bounds, ord x holds coordinate valuations capped at the depth
    unresolved_classes: dict[tuple, Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class TruncatedValue:
    s: complex
    value: complex
    bound: float


def fiber_table(
    f: MultiPoly,
    g: MultiPoly,
    p: int,
    m: int,
    chi: Character | None = None,
    max_evals: int | None = None,
) -> ValuationFiberTable:
    chi = chi or Character(p)
    n = f.n
    check_budget(p ** (m * n), max_evals, "residue enumeration mod p^m")
    modulus = p**m
    e = 1 if chi.is_trivial else chi.e
    order = chi.m
    table = None
    if not chi.is_trivial:
        table = np.zeros(p**e, dtype=np.int64)
        for u in range(p**e):
            if u % p:
                table[u] = chi.exponent(u)
    width = m + 1
    counts: dict[int, int] = {}
    unresolved: dict[tuple[int, ...], int] = {}
    for block in _grid_chunks(p, m, n):
        vf, uf = _valuations(evaluate_many(f, block, modulus), p, m)
        vg, ug = _valuations(evaluate_many(g, block, modulus), p, m)
        ok_f = vf + e <= m
        ok_g = vg + e <= m
        ok = ok_f & ok_g
        if table is not None:
            j = (table[uf[ok] % p**e] - table[ug[ok] % p**e]) % order
        else:
            j = np.zeros(int(ok.sum()), dtype=np.int64)
        keys = (vf[ok] * width + vg[ok]) * order + j
        for key, cnt in zip(*np.unique(keys, return_counts=True)):
            counts[int(key)] = counts.get(int(key), 0) + int(cnt)
        bad = ~ok
        if bad.any():
            # known exact valuations below m stay exact even if the angular part is unknown
            cols = [vf[bad], (vf[bad] < m).astype(np.int64), vg[bad], (vg[bad] < m).astype(np.int64)]
            cols += [_valuations(block[bad, i], p, m)[0] for i in range(n)]
            rows, cnts = np.unique(np.stack(cols, axis=1), axis=0, return_counts=True)
            for row, cnt in zip(rows, cnts):
                key = tuple(int(x) for x in row)
                unresolved[key] = unresolved.get(key, 0) + int(cnt)
    total = p ** (m * n)
    entries: dict[tuple[int, int], Fraction] = {}
    weighted: dict[tuple[int, int], object] = {}
    for key in sorted(counts):
        j = key % order
        a, b = divmod(key // order, width)
        cnt = counts[key]
        entries[(a, b)] = entries.get((a, b), Fraction(0)) + Fraction(cnt, total)
        w = CycRat.root(order, j) * Fraction(cnt, total) if order > 1 else Fraction(cnt, total)
        weighted[(a, b)] = weighted.get((a, b), 0) + w
    classes = {}
    for key in sorted(unresolved):
        a, a_exact, b, b_exact = key[:4]
        classes[(a, bool(a_exact), b, bool(b_exact), key[4:])] = Fraction(unresolved[key], total)
    return ValuationFiberTable(p, n, m, entries, weighted, sum(classes.values(), Fraction(0)), classes)


def _d(support, k) -> int:
    return min(sum(ki * mi for ki, mi in zip(k, m)) for m in support)


@dataclass(frozen=True)
class DecayModel:
    """What the tail majorant assumes about the part the enumeration cannot see.

    `support_f`, `support_g` give the lower bounds nu(h(x)) >= min <ord x, m>
    over the support of h.  `rays` lists (sigma(w), d_f(w), d_g(w)) for the
    rays w of a fan subordinate to Gamma(fg) and `band` is the strip where
    |f/g|^s is integrable.  Along a ray the measure of {ord x = k w} is
    q^(-sigma(w) k) while the valuations grow like d_f k and d_g k, which
    gives the decay per unit of valuation excess for classes whose
    coordinate valuations are not yet known.
    """

    support_f: tuple[tuple[int, ...], ...]
    support_g: tuple[tuple[int, ...], ...]
    rays: tuple[tuple[int, int, int], ...]
    band: tuple[Fraction, Fraction]

    def rate_g(self, sigma: float) -> float:
        rate = 1.0 - sigma
        for sw, df, dg in self.rays:
            if dg > 0:
                rate = min(rate, (sw - (dg - df) * sigma) / dg)
        return rate

    def rate_f(self, sigma: float) -> float:
        rate = 1.0 + sigma
        for sw, df, dg in self.rays:
            if df > 0:
                rate = min(rate, (sw + (df - dg) * sigma) / df)
        return rate

    @classmethod
    def build(cls, f: MultiPoly, g: MultiPoly, rays: Sequence[Sequence[int]], band) -> DecayModel:
        sf = tuple(sorted(f.terms))
        sg = tuple(sorted(g.terms))
        data = tuple((sum(w), _d(sf, w), _d(sg, w)) for w in rays)
        return cls(sf, sg, data, (Fraction(band[0]), Fraction(band[1])))


def _geometric(rate: float, q: int) -> float:
    # sum over j >= 0 of q^(-rate j)
    if rate <= 0:
        return math.inf
    return 1.0 / (1.0 - q ** (-rate))


def tail_bound(table: ValuationFiberTable, s: complex, model: DecayModel) -> float:
    """Majorant for |integral - partial sum| at s.

    Works with the modulus q^(-(a-b) Re s), which dominates every
    character-twisted integrand.  On an unresolved class both valuations are
    at least the support bound at the class's coordinate valuations.  The
    side whose growth shrinks the integrand is taken at its lower bound.  On
    the other side, a class with known coordinate valuations is a ball
    around points where the face function has a (nonsingular) zero, so the
    excess is geometric with ratio q^-1; a class containing a coordinate
    divisible by p^m also gets the ray rate of `model`.  Only this last
    factor is a model rather than a bound; those classes have measure
    O(q^-m).
    """
    q = table.p
    m = table.depth
    sigma = complex(s).real
    lower, upper = (float(x) for x in model.band)
    if not lower < sigma < upper:
        raise ValueError(f"Re(s)={sigma} is outside the band ({lower}, {upper})")
    hensel = _geometric(1.0 - abs(sigma), q)
    deep = _geometric(model.rate_g(sigma), q) if sigma > 0 else _geometric(model.rate_f(sigma), q)
    total = 0.0
    for (a, a_exact, b, b_exact, k), mu in table.unresolved_classes.items():
        if not a_exact:
            a = max(a, _d(model.support_f, k))
        if not b_exact:
            b = max(b, _d(model.support_g, k))
        sup = q ** (-(a - b) * sigma)
        growing = (sigma > 0 and not b_exact) or (sigma < 0 and not a_exact)
        if growing:
            sup *= hensel * (deep if max(k) >= m else 1.0)
        total += float(mu) * sup
    # absorb floating rounding of the partial sum
    return total * (1 + 1e-12) + 1e-15


def partial_sum(table: ValuationFiberTable, s: complex) -> complex:
    q = table.p
    total = 0j
    for (a, b) in sorted(table.weighted):
        total += to_complex(table.weighted[(a, b)]) * q ** (-(a - b) * complex(s))
    return total


def truncated_zeta(
    f: MultiPoly,
    g: MultiPoly,
    p: int,
    m: int,
    chi: Character | None,
    s_samples: Sequence[complex],
    model: DecayModel,
    max_evals: int | None = None,
) -> tuple[ValuationFiberTable, list[TruncatedValue]]:
    """Partial sums of the integral of chi(ac(f/g)) |f/g|^s over Z_p^n, with tail majorants."""
    chi = chi or Character(p)
    table = fiber_table(f, g, p, m, chi, max_evals)
    values = [TruncatedValue(complex(s), partial_sum(table, s), tail_bound(table, s, model)) for s in s_samples]
    return table, values


# -- the one-variable lemma -------------------------------------------------------


def _split(a: int, p: int) -> tuple[int | None, int]:
    if a == 0:
        return None, 0
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v, a


def igusa_lemma_closed(a: int, c: int, N: int, n: int, chi: Character, s: complex) -> complex:
    """Integral of chi^N(ac x) |x|^(Ns+n-1) over a + p^c Z_p (closed form)."""
    if N == 0 or n < 1:
        raise ValueError("need N != 0 and n >= 1")
    q = chi.p
    s = complex(s)
    power = chi.power(N)
    v, unit = _split(a, q)
    if v is None or v >= c:
        if not power.is_trivial:
            return 0j
        return (1 - 1 / q) * q ** (-c * N * s - c * n) / (1 - q ** (-N * s - n))
    if not power.trivial_on(c - v):
        return 0j
    return q ** (-c) * to_complex(power(unit)) * q ** (-v * (N * s + n - 1))


def igusa_lemma_bruteforce(a: int, c: int, N: int, n: int, chi: Character, s: complex, m: int, max_evals: int | None = None) -> complex:
    """Riemann sum over residues mod p^m of the same integral.

    Classes whose angular component is not determined at depth m form the
    ball p^L Z_p; its contribution is q^(-(L-c)(Ns+n)) times the whole
    integral (substitute x -> p^(L-c) x), which closes the sum exactly.
    """
    q = chi.p
    power = chi.power(N)
    e = power.conductor
    if m < c + e + 2:
        raise ValueError("depth too small")
    check_budget(q ** (m - c), max_evals, "residue enumeration")
    s = complex(s)
    expo = N * s + n - 1
    modulus = q**m
    top = m - e  # valuations up to this have a known angular component mod p^e
    partial = 0j
    base = a % q**c
    for y in range(q ** (m - c)):
        x = (base + q**c * y) % modulus
        if x == 0:
            continue
        v, unit = _split(x, q)
        if v > top:
            continue
        partial += to_complex(power(unit % q**e)) * q ** (-v * expo)
    partial /= modulus
    va, _ = _split(a, q)
    if va is not None and va < c:
        return partial  # every point of the class has valuation va: no tail
    L = top + 1
    return partial / (1 - q ** (-(L - c) * (N * s + n)))


# -- stationary phase with empty singular locus -------------------------------------


class SingularLocusError(ValueError):
    def __init__(self, message: str, witnesses):
        super().__init__(message)
        self.witnesses = witnesses


@dataclass
class SPFValue:
    p: int
    nu: object
    sigmas: dict[tuple[int, ...], Fraction]

    def exact(self, T: Sequence):
        q = self.p
        total = self.nu
        for pattern, sigma in self.sigmas.items():
            term = sigma
            for i in pattern:
                term = term * (q - 1) * T[i] / q / (1 - T[i] / q)
            total = total + term
        return total

    def evaluate(self, s: Sequence[complex]) -> complex:
        q = self.p
        total = to_complex(self.nu)
        for pattern, sigma in self.sigmas.items():
            term = complex(float(sigma))
            for i in pattern:
                x = q ** (-1 - complex(s[i]))
                term *= (q - 1) * x / (1 - x)
            total += term
        return total


def spf_eval(polys: Sequence[MultiPoly], chars: Sequence, p: int, domain: str = "full", max_evals: int | None = None) -> SPFValue:
    """nu + sum_I sigma_I prod (q-1) q^(-1-s_i) / (1 - q^(-1-s_i)) over E.

    E is Z_p^n ("full") or (Z_p^x)^n ("torus"); refuses when E meets the
    singular locus of the reduction.
    """
    if domain not in ("full", "torus"):
        raise ValueError("domain must be 'full' or 'torus'")
    n = polys[0].n
    r = len(polys)
    trivial = all(c.is_trivial for c in chars)
    e = 1 if trivial else chars[0].e
    if not trivial and any(c.is_trivial or c.e != e for c in chars):
        raise ValueError("characters must be all trivial or all nontrivial of one conductor")
    check_budget(p ** (e * n), max_evals, "residue enumeration")
    residues = range(p) if domain == "full" else range(1, p)
    counts: dict[frozenset[int], int] = {}
    singular = []
    for z in itertools.product(residues, repeat=n):
        pattern = frozenset(i for i, h in enumerate(polys) if evaluate_residue(h, z, p) == 0)
        if pattern:
            rows = [[evaluate_residue(partial_derivative(polys[i], j), z, p) for j in range(n)] for i in sorted(pattern)]
            if _rank_mod_p(rows, p) < len(pattern):
                singular.append(z)
                continue
        counts[pattern] = counts.get(pattern, 0) + 1
    if singular:
        raise SingularLocusError(f"{len(singular)} singular residue points", tuple(singular))
    if trivial:
        nu_value = Fraction(counts.get(frozenset(), 0), p**n)
        sigmas = {
            tuple(sorted(pat)): Fraction(cnt, p**n) for pat, cnt in sorted(counts.items(), key=lambda kv: sorted(kv[0])) if pat
        }
        return SPFValue(p, nu_value, sigmas)
    modulus = p**e
    order = 1
    for c in chars:
        order = order * c.m // math.gcd(order, c.m)
    total = CycRat(order, [])
    lift_residues = [x for x in range(modulus) if domain == "full" or x % p]
    for z in itertools.product(lift_residues, repeat=n):
        vals = [evaluate_residue(h, z, modulus) for h in polys]
        if any(v % p == 0 for v in vals):
            continue
        j = sum(c.exponent(v) * (order // c.m) for c, v in zip(chars, vals)) % order
        total = total + CycRat.root(order, j)
    return SPFValue(p, total / p ** (n * e), {})


def ball_integral(
    polys: Sequence[MultiPoly],
    chars: Sequence,
    center: Sequence[int],
    e: int,
    m: int,
    s: Sequence[complex],
    max_evals: int | None = None,
) -> tuple[complex, Fraction]:
    """Partial sum of prod chi_i(ac h_i) |h_i|^(s_i) over center + (p^e Z_p)^n.

    Returns (partial sum over resolved classes, unresolved measure).
    """
    p = chars[0].p
    n = polys[0].n
    check_budget(p ** ((m - e) * n), max_evals, "residue enumeration")
    modulus = p**m
    cond = max(c.e for c in chars)
    total = 0j
    missing = 0
    for y in itertools.product(range(p ** (m - e)), repeat=n):
        x = [(c0 + p**e * yi) % modulus for c0, yi in zip(center, y)]
        term = 1 + 0j
        for h, chi, si in zip(polys, chars, s):
            val = evaluate_residue(h, x, modulus)
            v, unit = _split(val, p)
            if v is None or v + cond > m:
                term = None
                break
            term *= to_complex(chi(unit % chi.modulus)) * p ** (-v * complex(si))
        if term is None:
            missing += 1
        else:
            total += term
    return total / p ** (m * n), Fraction(missing, p ** ((m - e) * n))


def fiber_measure_denominators_ok(table: ValuationFiberTable) -> bool:
    bound = table.p ** (table.n * table.depth)
    return all(bound % mu.denominator == 0 for mu in table.entries.values())


def complex_close(a: complex, b: complex, tol: float) -> bool:
    return cmath.isclose(a, b, abs_tol=tol)
