from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sdirac.catalog import BASE, build_pi_hat, default_catalog, fiber_sigma
from sdirac.scalar import I, LAMBDA, LambdaPoly, Scalar
from sdirac.solver import (
    GradedSector,
    InvariantBreach,
    bareiss,
    image_sector,
    kernel_at,
    kernel_symbolic,
    operator_matrix,
    rational_roots,
    sector_basis,
    singular_search,
)
from sdirac.weyl import PolyElement, WeylElement, apply

CAT = default_catalog()
SIGMA = fiber_sigma()


def mono(a, b, c, coeff=1):
    return PolyElement.monomial(BASE, (a, b, c), coeff)


def _sym(s: Scalar):
    g = s.constant()
    return sympy.Rational(g.re.numerator, g.re.denominator) + sympy.I * sympy.Rational(g.im.numerator, g.im.denominator)


def sympy_kernel_dim(lam, s):
    """Independent oracle: sympy row reduction of the stacked operator matrices."""
    basis = sector_basis(s)
    rows = []
    fam = build_pi_hat(lam, SIGMA)
    for op in (fam["e1"], fam["e2"]):
        images = [apply(op, PolyElement.monomial(BASE, m)) for m in basis]
        keys = sorted({k for img in images for k in img.terms})
        for k in keys:
            rows.append([_sym(img.coefficient(k)) for img in images])
    if not rows:
        return len(basis)
    return len(sympy.Matrix(rows).nullspace())


def in_span(vec, basis):
    from sdirac import linalg

    keys = sorted({k for b in basis for k in b.terms} | set(vec.terms))
    rows = [[b.coefficient(k) for b in basis] for k in keys]
    return linalg.solve(rows, [vec.coefficient(k) for k in keys], len(basis)) is not None


# --- sectors ------------------------------------------------------------------------


def test_sector_basis_examples():
    assert sector_basis(GradedSector(1, 3, "odd")) == [(1, 0, 1), (1, 0, 3), (0, 1, 1), (0, 1, 3)]
    assert sector_basis(GradedSector(0, 2, "even")) == [(0, 0, 0), (0, 0, 2)]
    assert sector_basis(GradedSector(2, 0, "even")) == [(2, 0, 0), (1, 1, 0), (0, 2, 0)]


def test_sector_validation():
    with pytest.raises(ValueError):
        GradedSector(-1, 0)
    with pytest.raises(ValueError):
        GradedSector(0, 0, "mixed")


def test_image_sector():
    # the fiber operators have even q-order, so q-parity is preserved
    assert image_sector(GradedSector(1, 3, "odd")) == GradedSector(0, 5, "odd")
    assert image_sector(GradedSector(1, 1, "odd")) == GradedSector(0, 3, "odd")
    assert image_sector(GradedSector(1, 3, "both")) == GradedSector(0, 5, "both")
    assert image_sector(GradedSector(0, 4, "both")) is None


def test_image_sector_contained_in_both_parity_bound():
    img = image_sector(GradedSector(1, 3, "odd"))
    wide = set(sector_basis(GradedSector(0, 5, "both")))
    assert set(sector_basis(img)) <= wide


def test_operator_matrix_examples():
    dx = WeylElement.der(BASE, "x")
    m = operator_matrix(dx, GradedSector(1, 0, "even"), [(0, 0, 0)])
    assert m.cols == [(1, 0, 0), (0, 1, 0)]
    assert m.entries == [[Scalar(1), Scalar(0)]]
    z = operator_matrix(WeylElement.zero(BASE), GradedSector(1, 3, "odd"), GradedSector(0, 5, "odd"))
    assert all(e.is_zero() for r in z.entries for e in r)
    e1 = operator_matrix(CAT["pihat.e1"], GradedSector(1, 3, "odd"))
    assert len(e1.cols) == 4
    assert all(e.is_polynomial() and e.num.degree <= 1 for r in e1.entries for e in r)


def test_operator_matrix_escape_is_breach():
    with pytest.raises(InvariantBreach):
        operator_matrix(WeylElement.var(BASE, "x"), GradedSector(0, 0, "even"), [(0, 0, 0)])


# --- kernels -------------------------------------------------------------------------


def test_kernel_at_critical_value():
    s = GradedSector(1, 3, "odd")
    kern = kernel_at(Fraction(3, 4), s)
    assert len(kern) == 2
    assert in_span(mono(1, 0, 1), kern)
    assert in_span(mono(0, 1, 1, 2) + mono(1, 0, 3, I), kern)


def test_xs_stability():
    xs = CAT["howe.Xs"]
    for qmax in (1, 3, 5):
        for parity in ("odd", "even"):
            s = GradedSector(1, qmax, parity)
            kern = kernel_at(Fraction(3, 4), s)
            for k in range(4):
                img = apply(xs, PolyElement.monomial(BASE, (0, 0, k)))
                if set(img.terms) <= set(sector_basis(s)):
                    assert in_span(img, kern), (qmax, parity, k)


def test_degree_zero_fully_singular():
    for lam in (Fraction(0), Fraction(3, 4), Fraction(-7, 3)):
        s = GradedSector(0, 4, "both")
        assert len(kernel_at(lam, s)) == len(sector_basis(s))


def test_noncritical_kernel_trivial():
    assert kernel_at(0, GradedSector(1, 1, "odd")) == []


def test_kernel_symbolic_reports_3_4():
    res = kernel_symbolic(GradedSector(1, 3, "odd"))
    assert res.generic_dim == 0
    assert Fraction(3, 4) in res.critical_lambdas
    assert len(res.basis_at[Fraction(3, 4)]) == 2


def test_small_even_sector():
    res = kernel_symbolic(GradedSector(1, 0, "even"))
    for c in res.critical_lambdas:
        assert sympy_kernel_dim(c, GradedSector(1, 0, "even")) == len(res.basis_at[c])
    assert res.generic_dim == sympy_kernel_dim(Fraction(17, 5), GradedSector(1, 0, "even"))


def test_empty_sector():
    res = kernel_symbolic(GradedSector(0, 0, "odd"))
    assert res.generic_dim == 0 and res.critical_lambdas == []


def test_soundness_recheck():
    for row in singular_search(1, 3, fiber=SIGMA):
        for crit in row["critical"]:
            lam = Fraction(crit["lambda"])
            fam = build_pi_hat(lam, SIGMA)
            s = GradedSector(row["n"], row["qmax"], row["parity"])
            for b in kernel_at(lam, s):
                assert apply(fam["e1"], b).is_zero() and apply(fam["e2"], b).is_zero()


def test_singular_search_table():
    rows = singular_search(1, 3)
    odd1 = next(r for r in rows if r["n"] == 1 and r["parity"] == "odd")
    assert "3/4" in [c["lambda"] for c in odd1["critical"]]
    for r in singular_search(0, 2):
        assert r["generic_dim"] == r["dim"]


SECTORS = st.builds(GradedSector, st.integers(0, 2), st.integers(0, 4), st.sampled_from(["even", "odd", "both"])).filter(
    lambda s: len(sector_basis(s)) <= 12)
RATIONALS = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 8))


@settings(max_examples=25, deadline=None)
@given(SECTORS, RATIONALS)
def test_kernel_at_matches_sympy(s, lam):
    assert len(kernel_at(lam, s)) == sympy_kernel_dim(lam, s)


@settings(max_examples=15, deadline=None)
@given(SECTORS, RATIONALS)
def test_symbolic_numeric_consistency(s, lam):
    res = kernel_symbolic(s)
    roots = set()
    for p in res.pivot_polynomials:
        roots.update(rational_roots(p)[0])
    if lam not in roots:
        assert len(kernel_at(lam, s)) == res.generic_dim


# --- elimination helpers -------------------------------------------------------------


def test_bareiss_rank_and_pivots():
    lam = LAMBDA.num
    one = LambdaPoly([1])
    rows = [[lam, one], [one, lam]]
    pivots, cols = bareiss(rows, 2)
    assert cols == [0, 1]
    # second pivot is the determinant up to sign
    assert pivots[-1] in (lam * lam - one, one - lam * lam)


def test_rational_roots():
    p = ((LAMBDA - Fraction(3, 4)) * (LAMBDA ** 2 - 2) * (LAMBDA + 1)).num
    roots, rest = rational_roots(p)
    assert roots == [Fraction(-1), Fraction(3, 4)]
    assert rest == ["lambda**2 - 2"]
    roots, rest = rational_roots((LAMBDA - I).num)
    assert roots == [] and rest
