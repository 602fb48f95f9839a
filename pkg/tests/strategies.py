"""Hypothesis strategies for polynomials in a fixed ring."""
from hypothesis import strategies as st

from reticular.jet_algebra import CornerPoly, monomials_up_to


def polys(r=1, k=1, params=(), max_deg=4, min_deg=0, max_terms=6, coeff=5):
    n = r + k + len(params)
    monos = list(monomials_up_to(n, max_deg, min_deg))
    coeffs = st.one_of(st.integers(-coeff, coeff), st.fractions(min_value=-coeff, max_value=coeff, max_denominator=4))
    return st.dictionaries(st.sampled_from(monos), coeffs, max_size=max_terms).map(
        lambda d: CornerPoly(r, k, tuple(params), d))
