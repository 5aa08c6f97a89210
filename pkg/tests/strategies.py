from fractions import Fraction

from hypothesis import strategies as st

from sdirac.scalar import GaussianRational, LambdaPoly, Scalar
from sdirac.weyl import PolyElement, VarSpace, WeylElement

SPACE = VarSpace("x,y,q")

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 5))
gaussians = st.builds(GaussianRational, fractions, fractions)
lambda_polys = st.lists(gaussians, max_size=5).map(LambdaPoly)


@st.composite
def scalars(draw, rational=True):
    num = draw(lambda_polys)
    if not rational:
        return Scalar(num)
    den = draw(lambda_polys.filter(lambda p: not p.is_zero()))
    return Scalar(num) / Scalar(den)


@st.composite
def weyl_elements(draw, space=SPACE, max_degree=3, max_terms=4):
    n = len(space)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        key = [0] * (2 * n)
        for slot in draw(st.lists(st.integers(0, 2 * n - 1), max_size=max_degree)):
            key[slot] += 1
        terms[tuple(key)] = draw(scalars(rational=False).filter(lambda s: s.num.degree <= 1))
    return WeylElement(space, terms)


@st.composite
def polys(draw, space=SPACE, max_degree=4, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        key = [0] * len(space)
        for slot in draw(st.lists(st.integers(0, len(space) - 1), max_size=max_degree)):
            key[slot] += 1
        terms[tuple(key)] = Scalar(draw(gaussians))
    return PolyElement(space, terms)
