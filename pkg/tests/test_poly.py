from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nzeta.poly import (
    AdmissionError,
    MultiPoly,
    ParseError,
    admit,
    evaluate_residue,
    face_function,
    parse_poly,
    partial_derivative,
    product,
    support,
)
from oracles import brute_facets, poly_value
from strategies import polys, weights

XY = ("x", "y")


def P(text, names=XY):
    return parse_poly(text, names)


class TestParse:
    def test_binomial(self):
        assert P("x^2 - y").terms == {(2, 0): 1, (0, 1): -1}

    def test_monomial(self):
        assert P("x^2*y").terms == {(2, 1): 1}

    def test_cancellation_gives_zero(self):
        h = P("x + x - 2*x")
        assert h.is_zero()
        with pytest.raises(AdmissionError):
            admit(h, 3)

    def test_parentheses_and_powers(self):
        assert P("(x+y)^2") == P("x^2 + 2*x*y + y^2")
        assert P("-(x - y)*(x + y)") == P("y^2 - x^2")

    def test_whitespace_insensitive(self):
        assert P(" x ^ 2-   y ") == P("x^2-y")

    def test_syntax_error_reports_position(self):
        with pytest.raises(ParseError) as err:
            P("x^2 - * y")
        assert err.value.position == 6

    def test_unknown_variable(self):
        with pytest.raises(ParseError):
            P("x + w")

    def test_non_integer_coefficient(self):
        with pytest.raises(ParseError):
            P("1.5*x")

    def test_round_trip(self):
        for text in ("x^2 - y", "x^4 + y^4", "3*x*y^2 - 7*y + x"):
            h = P(text)
            assert P(h.to_str(XY)) == h


class TestSupportAndProduct:
    def test_supports(self):
        assert support(P("x^2-y")) == {(2, 0), (0, 1)}
        assert support(P("x^2*y")) == {(2, 1)}
        assert support(product(P("x^2-y"), P("x^2*y"))) == {(4, 1), (2, 2)}

    def test_products(self):
        assert product(P("x^2-y"), P("x^2*y")) == P("x^4*y - x^2*y^2")
        assert product(P("x^2+y^2"), P("x^4+y^4")) == P("x^6 + x^2*y^4 + x^4*y^2 + y^6")

    def test_monomial_shift(self):
        h = P("3*x*y - y^3 + x^5")
        shifted = product(h, P("x^2"))
        assert shifted.terms == {(e[0] + 2, e[1]): c for e, c in h.terms.items()}

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            product(P("x"), parse_poly("x", ("x", "y", "z")))

    @given(polys(), polys())
    def test_no_cancellation_at_vertices(self, a, b):
        ab = product(a, b)
        sums = {tuple(x + y for x, y in zip(m1, m2)) for m1 in a.terms for m2 in b.terms}
        assert support(ab) <= sums
        # vertices of the product polyhedron carry a single product of coefficients
        facets = brute_facets(list(sums))
        verts = {v for v in sums if sum(1 for w, d in facets.items() if sum(x * y for x, y in zip(w, v)) == d) >= 2}
        for v in verts:
            pairs = [(m1, m2) for m1 in a.terms for m2 in b.terms if tuple(x + y for x, y in zip(m1, m2)) == v]
            assert len(pairs) == 1
            assert ab.coefficient(v) == a.coefficient(pairs[0][0]) * b.coefficient(pairs[0][1])


class TestFaceFunction:
    def test_examples(self):
        h = P("x^2-y")
        assert face_function(h, (1, 0)) == P("-y")
        assert face_function(h, (1, 2)) == h
        assert face_function(h, (0, 0)) == h

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            face_function(P("x"), (-1, 0))

    @given(polys(), weights(), st.fractions(min_value=Fraction(1, 9), max_value=9))
    def test_scaling(self, h, k, lam):
        assert face_function(h, k) == face_function(h, [lam * x for x in k])


class TestDerivativeAndResidues:
    def test_derivatives(self):
        h = P("x^2-y")
        assert partial_derivative(h, 0) == P("2*x")
        assert partial_derivative(h, 1) == MultiPoly.constant(2, -1)
        assert partial_derivative(P("x^4+y^4"), 0) == P("4*x^3")

    def test_residues(self):
        assert evaluate_residue(P("x^2-y"), (1, 1), 3) == 0
        assert evaluate_residue(P("x^2-y"), (2, 1), 3) == 0
        assert evaluate_residue(P("x^2+y^2"), (1, 1), 3) == 2

    @given(polys(), polys(), st.integers(0, 1))
    def test_leibniz(self, a, b, j):
        lhs = partial_derivative(product(a, b), j)
        rhs = product(partial_derivative(a, j), b) + product(a, partial_derivative(b, j))
        assert lhs == rhs

    @given(polys(), polys(), st.sampled_from([3, 5, 9, 25, 27]), st.tuples(st.integers(0, 50), st.integers(0, 50)))
    def test_evaluation_commutes_with_product(self, a, b, modulus, z):
        assert evaluate_residue(product(a, b), z, modulus) == evaluate_residue(a, z, modulus) * evaluate_residue(b, z, modulus) % modulus

    @given(polys(), st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
    def test_evaluation_matches_reference(self, h, z):
        assert h.evaluate(z) == poly_value(h.terms, z)


class TestAdmission:
    def test_constant_term(self):
        with pytest.raises(AdmissionError):
            admit(P("x + 1"), 3)

    def test_all_coefficients_divisible(self):
        with pytest.raises(AdmissionError):
            admit(P("3*x + 9*y"), 3)
        assert admit(P("3*x + 9*y"), 5)
