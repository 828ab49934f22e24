from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nzeta.cyclotomic import Character
from nzeta.pipeline import analyze, geometry
from nzeta.poles import candidate_poles, expected_order, real_point_order, rho, t_sets
from nzeta.poly import AdmissionError, parse_poly
from nzeta.residue import check_nondegenerate
from nzeta.upoly import UPoly
from strategies import polys

XY = ("x", "y")


def P(text):
    return parse_poly(text, XY)


def run(f, g, p=3, chi=None):
    return analyze(P(f), P(g), p, Character.parse(chi, p) if chi else None)


def real_parts(items):
    return [str(x.real_part) for x in items]


class TestTSets:
    def test_example_one(self):
        ts = geometry(P("x^2-y"), P("x^2*y"), 3).tsets
        assert set(ts.T_plus) == {(0, 1), (1, 0), (1, 2)} and ts.T_minus == ()
        assert ts.alpha == Fraction(1, 2) and ts.beta is None
        assert ts.ratios == {(0, 1): 1, (1, 0): Fraction(1, 2), (1, 2): Fraction(3, 2)}

    def test_example_two(self):
        ts = geometry(P("x^2+y^2"), P("x^4+y^4"), 3).tsets
        assert ts.T_plus == ((1, 1),) and ts.T_minus == ()
        assert ts.alpha == 1

    def test_mixed_signs(self):
        ts = geometry(P("x*y"), P("x^2+y^3"), 3).tsets
        assert ts.T_plus == ((3, 2),) and set(ts.T_minus) == {(0, 1), (1, 0)}
        assert (ts.alpha, ts.beta) == (5, -1)

    @settings(max_examples=40)
    @given(polys(), polys())
    def test_partition_of_normals(self, f, g):
        geo = geometry(f, g, 7)
        ts = geo.tsets
        assert set(ts.T_plus).isdisjoint(ts.T_minus)
        assert set(ts.T_plus) | set(ts.T_minus) <= set(ts.D_fg)
        if ts.alpha is not None:
            assert ts.alpha > 0
        if ts.beta is not None:
            assert ts.beta < 0


class TestCandidates:
    def test_example_one_trivial(self):
        an = run("x^2-y", "x^2*y")
        assert real_parts(an.poles.candidates) == ["-1", "1/2", "1", "3/2"]
        one = an.poles.candidates[2]
        assert one.sources == ((0, 1), "L")

    def test_example_one_twisted(self):
        an = run("x^2-y", "x^2*y", 5, "mult:e=1,M=2,k=1")
        assert real_parts(an.poles.candidates) == ["1/2", "1", "3/2"]
        assert all("L" not in c.sources for c in an.poles.candidates)

    def test_without_counts(self):
        geo = geometry(P("x^2-y"), P("x^2*y"), 3)
        cands = candidate_poles(geo.tsets, Character(3))
        assert all(c.expected is None for c in cands)
        assert "expected_order" not in cands[0].to_json()

    def test_periods(self):
        an = run("x^2-y", "x^2*y")
        assert [c.period_denominators for c in an.poles.candidates] == [(1,), (2,), (1,), (2,)]


class TestExpectedOrder:
    def test_rho(self):
        geo = geometry(P("x^2-y"), P("x^2*y"), 3)
        assert rho(Fraction(1, 2), geo.tsets, geo.fan) == 1
        assert rho(Fraction(7), geo.tsets, geo.fan) == 0

    def test_examples(self):
        an = run("x^2-y", "x^2*y")
        counts = {t.cone.id: t.counts for t in an.zeta.terms}
        geo = an.geometry
        est = expected_order(Fraction(1, 2), geo.fan, geo.tsets, Character(3), counts)
        assert (est.order, est.justification) == (1, "expected-rho")
        est = expected_order(Fraction(-1), geo.fan, geo.tsets, Character(3), counts)
        assert (est.order, est.low, est.high, est.justification) == (1, 1, 1, "expected-unit-cone-max")

    def test_unit_without_witness(self):
        an = run("x^2+y^2", "x^4+y^4")
        est = an.poles.candidates[0].expected
        assert an.poles.candidates[0].real_part == -1
        assert (est.order, est.low) == (0, 0)

    def test_not_a_candidate(self):
        an = run("x^2-y", "x^2*y")
        counts = {t.cone.id: t.counts for t in an.zeta.terms}
        with pytest.raises(ValueError):
            expected_order(Fraction(2), an.geometry.fan, an.geometry.tsets, Character(3), counts)


class TestRealPointOrder:
    def test_simple_and_double(self):
        den = UPoly([1, 0, -9])  # 1 - 9 t^2 vanishes at t = 1/3 and t = -1/3
        assert real_point_order(den, Fraction(1), 3) == (1, False)
        assert real_point_order(den * den, Fraction(1), 3) == (2, False)

    def test_other_point_of_the_circle(self):
        den = UPoly([1, 3]) * UPoly([1, 3])  # only t = -1/3
        assert real_point_order(den, Fraction(1), 3) == (0, False)

    def test_fractional_real_part(self):
        den = UPoly([1, 0, -3])  # t^2 = 1/3, i.e. Re(s) = 1/2
        assert real_point_order(den, Fraction(1, 2), 3) == (1, False)
        assert real_point_order(den, Fraction(1), 3) == (0, False)

    def test_cancelled_candidate_is_not_a_pole(self):
        # -1 is a candidate for Example two but its pole cancels
        an = run("x^2+y^2", "x^4+y^4")
        assert -1 in an.poles.candidate_real_parts()
        assert an.poles.actual_real_parts() == [1]


class TestReport:
    def test_example_one(self):
        rep = run("x^2-y", "x^2*y").poles
        assert [(str(p.real_part), p.order) for p in rep.actual] == [("-1", 1), ("1/2", 1), ("1", 1), ("3/2", 1)]
        assert rep.largest_negative.justification == "negative-pole-2"
        assert rep.smallest_positive.justification == "positive-pole-1a'"
        assert rep.largest_negative.agrees and rep.smallest_positive.agrees
        diag = rep.diagonal_positive
        assert diag.applies and diag.pole == Fraction(1, 2) and diag.guaranteed and diag.actual_order == 1
        assert not rep.diagonal_negative.applies
        assert rep.bounds_hold

    def test_example_two(self):
        rep = run("x^2+y^2", "x^4+y^4").poles
        assert rep.largest_negative.justification == "negative-pole-absent"
        assert rep.smallest_positive.justification == "positive-pole-1c'"
        assert rep.smallest_positive.order == 1

    @pytest.mark.parametrize(
        "f,g,neg,pos",
        [
            ("x*y", "x^2+y^3", "negative-pole-1c", "positive-pole-1b'-unit"),
            ("x^2+y^3", "x*y", "negative-pole-1b-unit", "positive-pole-1c'"),
            ("x^2*y", "x*y^2", "negative-pole-1c", "positive-pole-1c'"),
        ],
    )
    def test_tags(self, f, g, neg, pos):
        rep = run(f, g).poles
        assert rep.largest_negative.justification == neg
        assert rep.smallest_positive.justification == pos
        assert rep.largest_negative.agrees and rep.smallest_positive.agrees

    def test_twisted(self):
        rep = run("x^2-y", "x^2*y", 5, "mult:e=1,M=2,k=1").poles
        assert rep.largest_negative.justification == "twisted-no-theorem"
        assert rep.smallest_positive.agrees is None
        assert rep.actual_real_parts() == [Fraction(1, 2), Fraction(3, 2)]

    def test_non_pole_remark(self):
        rep = run("x^2+y^2", "x^4+y^4").poles
        assert rep.non_pole.applies
        assert rep.non_pole.excluded == (Fraction(-1, 3), Fraction(1, 3))
        assert rep.non_pole.actual_present == ()
        assert not run("x^2-y", "x^2*y").poles.non_pole.applies

    def test_json_keys(self):
        out = run("x^2-y", "x^2*y").poles.to_json()
        assert set(out) == {
            "t_sets", "diagonal", "candidates", "actual_real_poles", "largest_negative",
            "smallest_positive", "diagonal_theorems", "non_pole_remark", "classification", "bounds_hold",
        }


class TestInclusion:
    @pytest.mark.parametrize(
        "f,g,case",
        [
            ("x^2-y", "x^2*y", "inclusion-i"),
            ("x^2*y", "x^2-y", "inclusion-ii"),
            ("x^2-y", "x^2+y", "inclusion-iii"),
            ("x^2+y^2", "x^2+3*x*y+y^2", "inclusion-iv"),
            ("x*y", "x^2+y^3", "inclusion-none"),
        ],
    )
    def test_cases(self, f, g, case):
        rep = run(f, g).poles
        assert rep.inclusion.case == case

    def test_no_poles_case(self):
        an = run("x^2+y^2", "x^2+3*x*y+y^2")
        assert an.poles.inclusion.no_poles and an.poles.actual == []
        assert an.zeta.canonical.den.degree == 0

    def test_equal_polyhedra_poles_only_at_units(self):
        rep = run("x^2-y", "x^2+y").poles
        assert set(rep.actual_real_parts()) <= {-1, 1}


def admissible_nondegenerate(f, g, p):
    try:
        geo = geometry(f, g, p)
    except AdmissionError:
        return False
    return check_nondegenerate(f, g, geo.fan, p).nondegenerate


class TestProperties:
    @settings(max_examples=40)
    @given(polys(), polys(), st.sampled_from([3, 5]))
    def test_poles_among_candidates(self, f, g, p):
        assume(admissible_nondegenerate(f, g, p))
        rep = analyze(f, g, p).poles
        cands = {c.real_part: c for c in rep.candidates}
        for pole in rep.actual:
            assert pole.real_part in cands
            assert pole.order <= cands[pole.real_part].expected.high
        assert rep.bounds_hold

    @settings(max_examples=40)
    @given(polys(), polys(), st.sampled_from([3, 5]))
    def test_extreme_theorems_agree(self, f, g, p):
        assume(admissible_nondegenerate(f, g, p))
        rep = analyze(f, g, p).poles
        assert rep.largest_negative.agrees
        assert rep.smallest_positive.agrees
        for diag in (rep.diagonal_negative, rep.diagonal_positive):
            if diag.applies and diag.guaranteed:
                assert diag.actual_order == diag.expected_order
