"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import contextlib
import itertools
import random
import time
from fractions import Fraction

import pytest

from nzeta.cyclotomic import Character
from nzeta.fan import barycenter, fundamental_points, is_subordinate
from nzeta.newton import d_value
from nzeta.oracle import igusa_lemma_bruteforce, igusa_lemma_closed, truncated_zeta
from nzeta.pipeline import analyze, geometry, nondegeneracy
from nzeta.poly import face_function, parse_poly
from corpus import corpus
from oracles import minor_gcd_index, separable_value

XY = ("x", "y")


def P(text):
    return parse_poly(text, XY)


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def report(label):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\n[acceptance] {label}: FAIL ({time.perf_counter() - start:.2f}s)")
            raise
        with capsys.disabled():
            print(f"\n[acceptance] {label}: PASS ({time.perf_counter() - start:.2f}s)")

    return report


def test_criterion_1_example_one(criterion):
    with criterion("criterion 1 (example one)"):
        start = time.perf_counter()
        an = analyze(P("x^2-y"), P("x^2*y"), 3)
        diag = an.geometry.diagonal
        assert diag.t0 == 2
        assert set(diag.D_t0) == {(1, 0), (1, 2)}
        expected = {Fraction(-1), Fraction(1, 2), Fraction(1), Fraction(3, 2)}
        assert set(an.poles.candidate_real_parts()) == expected
        assert set(an.poles.actual_real_parts()) == expected
        sp = an.poles.smallest_positive
        assert (sp.real_part, sp.order) == (Fraction(1, 2), 1)
        assert (sp.actual_real_part, sp.actual_order) == (Fraction(1, 2), 1)
        assert time.perf_counter() - start < 5


TABLE_ONE = {
    ((1, 0),): ("y^2", "y^4"),
    ((1, 0), (1, 1)): ("y^2", "y^4"),
    ((1, 1),): ("x^2 + y^2", "x^4 + y^4"),
    ((0, 1), (1, 1)): ("x^2", "x^4"),
    ((0, 1),): ("x^2", "x^4"),
}


@pytest.mark.parametrize("p", [3, 7])
def test_criterion_2_example_two(criterion, p):
    with criterion(f"criterion 2 (example two, p={p})"):
        start = time.perf_counter()
        f, g = P("x^2+y^2"), P("x^4+y^4")
        geo = geometry(f, g, p)
        assert nondegeneracy(geo, p).nondegenerate
        cones = {tuple(sorted(c.generators)): c for c in geo.fan.cones}
        assert set(cones) == set(TABLE_ONE)
        for gens, (ff, gf) in TABLE_ONE.items():
            k = barycenter(cones[gens])
            assert (face_function(f, k).to_str(XY), face_function(g, k).to_str(XY)) == (ff, gf)
        an = analyze(f, g, p)
        torus = Fraction((p - 1) ** 2, p**2)
        for term in an.zeta.terms:
            c = term.counts
            assert (c.N_f, c.N_g, c.N_fg) == (0, 0, 0)
            assert c.nu == torus
        assert [(pole.real_part, pole.order) for pole in an.poles.actual] == [(1, 1)]
        assert time.perf_counter() - start < 5


@pytest.mark.parametrize("p", [3, 5])
def test_criterion_3_separable(criterion, p):
    with criterion(f"criterion 3 (separable, p={p})"):
        an = analyze(P("x"), P("y"), p)
        for t in (Fraction(1, 2), Fraction(2, 3), Fraction(-5, 7), Fraction(9, 4)):
            assert an.zeta.at_t(t) == separable_value(p, t)
        assert [(pole.real_part, pole.order) for pole in an.poles.actual] == [(-1, 1), (1, 1)]
        assert an.zeta.at_t(Fraction(1)) == 1


def test_criterion_4_twisted_vanishing(criterion):
    with criterion("criterion 4 (twisted vanishing)"):
        for p in (3, 5):
            chi = Character.parse("mult:e=1,M=2,k=1", p)
            an = analyze(P("x"), P("y"), p, chi)
            assert an.zeta.canonical.is_zero()
            _, values = truncated_zeta(P("x"), P("y"), p, 3, chi, [0.0, 0.3, -0.4 + 2j], an.decay_model())
            assert all(abs(v.value) < 1e-9 for v in values)


FIXTURES = {"example one": ("x^2-y", "x^2*y"), "example two": ("x^2+y^2", "x^4+y^4"), "separable": ("x", "y")}
SAMPLES = [0.0, 0.2, -0.2]


def _truncations(f, g, m):
    an = analyze(P(f), P(g), 3)
    for s in SAMPLES:
        assert an.band.contains(Fraction(s))
    _, values = truncated_zeta(P(f), P(g), 3, m, None, SAMPLES, an.decay_model())
    return an, values


@pytest.mark.parametrize("name", list(FIXTURES))
def test_criterion_5_oracle_agreement(criterion, name):
    with criterion(f"criterion 5a (oracle agreement, {name})"):
        an, values = _truncations(*FIXTURES[name], 5)
        for v in values:
            assert abs(v.value - an.zeta.evaluate(v.s)) <= v.bound


@pytest.mark.parametrize("name", list(FIXTURES))
def test_criterion_5_tail_bound_decreases(criterion, name):
    with criterion(f"criterion 5b (tail bound m=6 < m=5, {name})"):
        _, at5 = _truncations(*FIXTURES[name], 5)
        _, at6 = _truncations(*FIXTURES[name], 6)
        for v5, v6 in zip(at5, at6):
            assert v6.bound < v5.bound, f"s={v5.s.real}: {v6.bound} >= {v5.bound}"


def test_criterion_6_igusa_lemma(criterion):
    with criterion("criterion 6 (one-variable lemma)"):
        failures = []
        for p, c, N, n, kind, twisted in itertools.product((3, 5), (1, 2), (1, 2), (1, 2), ("zero", "unit", "p-unit"), (False, True)):
            chi = Character.parse("mult:e=1,M=2,k=1", p) if twisted else Character(p)
            a = {"zero": 0, "unit": 2, "p-unit": 2 * p}[kind]
            m = c + chi.e + 4
            for s in (0.5, 1.0):
                closed = igusa_lemma_closed(a, c, N, n, chi, s)
                brute = igusa_lemma_bruteforce(a, c, N, n, chi, s, m)
                if abs(closed - brute) >= 1e-6:
                    failures.append((p, c, N, n, kind, twisted, s, closed, brute))
        assert not failures


def _random_weights(rng, n, count):
    return [tuple(Fraction(rng.randint(0, 30), rng.randint(1, 7)) for _ in range(n)) for _ in range(count)]


def _cone_samples(rng, cone, n, count):
    out = []
    for _ in range(count):
        lam = [Fraction(rng.randint(1, 40), rng.randint(1, 9)) for _ in cone.generators]
        out.append(tuple(sum(l * w[i] for l, w in zip(lam, cone.generators)) for i in range(n)))
    return out


def _check_corpus_item(f, g, p, rng):
    n = f.n
    geo = geometry(f, g, p)
    fan = geo.fan
    # (a) partition and subordination
    for k in _random_weights(rng, n, 40):
        if any(k):
            assert sum(1 for c in fan.cones if c.contains(k)) == 1
    for cone in fan.cones:
        assert is_subordinate(fan, cone, _cone_samples(rng, cone, n, 5))
    # (b) d-additivity
    for k in _random_weights(rng, n, 200):
        assert d_value(k, geo.gfg) == d_value(k, geo.gf) + d_value(k, geo.gg)
    # (c) fundamental points against the Smith normal form index
    for cone in fan.cones:
        assert len(fundamental_points(cone).points) == minor_gcd_index(cone.generators)
    an = analyze(f, g, p)
    rep = an.poles
    t0 = geo.diagonal.t0
    cands = {c.real_part: c for c in rep.candidates}
    for pole in rep.actual:
        c = pole.real_part
        # (d) bounds through the diagonal
        if c < 0:
            assert c <= -1 / t0 or c == -1
        else:
            assert c >= 1 / t0 or c == 1
        # (e) among the candidates, (f) order at most the expected one
        assert c in cands
        assert pole.order <= cands[c].expected.order
    # (g) guaranteed poles from the diagonal
    orders = {pole.real_part: pole.order for pole in rep.actual}
    for diag in (rep.diagonal_negative, rep.diagonal_positive):
        if diag.applies and diag.guaranteed:
            assert orders.get(diag.pole) == diag.expected_order


@pytest.mark.parametrize("n,size", [(2, 50), (3, 20)])
def test_criterion_7_property_corpus(criterion, n, size):
    with criterion(f"criterion 7 (property corpus, n={n}, {size} pairs)"):
        rng = random.Random(7 + n)
        items = corpus(n, size)
        assert len(items) == size
        for f, g, p in items:
            _check_corpus_item(f, g, p, rng)


INCLUSION = [
    ("x^2-y", "x^2*y", "inclusion-i"),  # Gamma_g inside Gamma_f
    ("x^2*y", "x^2-y", "inclusion-ii"),  # Gamma_f inside Gamma_g
    ("x^2-y", "x^2+y", "inclusion-iii"),  # equal polyhedra
    ("x^2+y^2", "x^2+3*x*y+y^2", "inclusion-iv"),  # equal polyhedra, no zeros on the torus
]


@pytest.mark.parametrize("f,g,case", INCLUSION)
def test_criterion_8_inclusion(criterion, f, g, case):
    with criterion(f"criterion 8 ({case})"):
        rep = analyze(P(f), P(g), 3).poles
        assert rep.inclusion.case == case
        if case == "inclusion-iv":
            assert rep.inclusion.no_poles and rep.actual == []
        if case == "inclusion-iii":
            assert set(rep.actual_real_parts()) <= {-1, 1}
        if case == "inclusion-i":
            assert all(c >= -1 for c in rep.actual_real_parts())
        if case == "inclusion-ii":
            assert all(c <= 1 for c in rep.actual_real_parts())
