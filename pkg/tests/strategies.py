"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from cohomseries.laurent import LaurentPoly
from cohomseries.rational import FactoredRational


def exponents(nvars: int, lo: int = -3, hi: int = 3):
    return st.tuples(*[st.integers(lo, hi) for _ in range(nvars)])


def polys(nvars: int = 2, max_terms: int = 5, coeff: int = 9):
    return st.dictionaries(exponents(nvars), st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda d: LaurentPoly(nvars, d)
    )


def nonzero_exponents(nvars: int, lo: int = -3, hi: int = 3):
    return exponents(nvars, lo, hi).filter(any)


def rationals(nvars: int = 2, max_factors: int = 3):
    factors = st.lists(st.tuples(nonzero_exponents(nvars, -2, 2), st.integers(1, 3)), max_size=max_factors)
    return st.builds(FactoredRational, polys(nvars, 4), factors.map(tuple))
