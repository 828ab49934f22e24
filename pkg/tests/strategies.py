"""Hypothesis strategies for supports, polynomials and weight vectors."""

from hypothesis import strategies as st

from nzeta.poly import MultiPoly


def exponent(n: int, top: int):
    return st.tuples(*[st.integers(0, top)] * n)


def supports(n: int = 2, top: int = 4, max_size: int = 4):
    return st.sets(exponent(n, top).filter(any), min_size=1, max_size=max_size)


def polys(n: int = 2, top: int = 4, max_size: int = 4, coeff: int = 5):
    nonzero = st.integers(-coeff, coeff).filter(bool)
    return supports(n, top, max_size).flatmap(
        lambda supp: st.lists(nonzero, min_size=len(supp), max_size=len(supp)).map(
            lambda cs: MultiPoly(n, dict(zip(sorted(supp), cs)))
        )
    )


def weights(n: int = 2, top: int = 12):
    frac = st.fractions(min_value=0, max_value=top, max_denominator=7)
    return st.tuples(*[frac] * n)
