from fractions import Fraction

import pytest
from hypothesis import strategies as st

from localnonneg.polyring import SparsePolynomial, parse

CERTIFIABLE = "x^2 + y^4 + z^6 - 2*x*y^2*z^3"
DEGENERATE = "x^16+y^18-x^7*y^3+x^12*y^15+x^4*y^2-2*x^3*y^3+y^4*x^2"


@pytest.fixture
def degenerate():
    return parse(DEGENERATE)


def certifiable_family(s) -> SparsePolynomial:
    return parse("x^2+y^4+z^6", ["x", "y", "z"]) - SparsePolynomial(("x", "y", "z"), {(1, 2, 3): s})


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polynomials(draw, arity=2, max_terms=5, max_exp=4):
    names = ("x", "y", "z")[:arity]
    exps = draw(st.lists(st.tuples(*[st.integers(0, max_exp)] * arity), max_size=max_terms))
    coeffs = draw(st.lists(rationals, min_size=len(exps), max_size=len(exps)))
    return SparsePolynomial(names, dict(zip(exps, coeffs)))


@st.composite
def points(draw, arity=2):
    return tuple(draw(st.lists(rationals, min_size=arity, max_size=arity)))


def frac_points(rng, n, count, lo=Fraction(0), hi=Fraction(10), positive=True):
    """Seeded rational points with coordinates in (lo, hi]."""
    out = []
    for _ in range(count):
        pt = []
        for _ in range(n):
            den = rng.randint(1, 64)
            num = rng.randint(1, int(hi * den)) if positive else rng.randint(int(lo * den), int(hi * den))
            pt.append(Fraction(num, den))
        out.append(tuple(pt))
    return out
