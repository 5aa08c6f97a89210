from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sdirac.scalar import (
    EvaluationError,
    GaussianRational,
    I,
    LAMBDA,
    LambdaPoly,
    ONE,
    Scalar,
    ZERO,
    eval_lambda,
    frac,
    normalize,
    poly_gcd,
)
from strategies import gaussians, lambda_polys, scalars

LAM = sympy.Symbol("lambda")


def _poly(p):
    return sum((sympy.Rational(c.re.numerator, c.re.denominator)
                + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)) * LAM ** k
               for k, c in enumerate(p.coeffs))


def to_sympy(s: Scalar):
    """(numerator, denominator) as sympy expressions."""
    return _poly(s.num), _poly(s.den)


def same(a: Scalar, frac_pair) -> bool:
    n, d = to_sympy(a)
    return sympy.expand(n * frac_pair[1] - frac_pair[0] * d) == 0


# --- examples -----------------------------------------------------------------


def test_normalize_cancels_common_factor():
    assert normalize((LAMBDA ** 2 - 1).num, (LAMBDA - 1).num) == LAMBDA + 1


def test_normalize_zero_numerator():
    z = normalize(LambdaPoly(), (LAMBDA + 7).num)
    assert z.is_zero() and z.den.is_one()


def test_normalize_removes_scalar_gcd():
    s = (2 * LAMBDA + 2) / 4
    assert s == (LAMBDA + 1) / 2
    assert s.den.is_one()


def test_i_squared():
    assert I * I == -ONE


def test_gaussian_norm():
    a = Scalar(GaussianRational(Fraction(1, 2), Fraction(1, 2)))
    b = Scalar(GaussianRational(Fraction(1, 2), Fraction(-1, 2)))
    assert a * b == frac(1, 2)


def test_lambda_inverse():
    assert LAMBDA * (ONE / LAMBDA) == ONE


def test_eval_critical_value():
    assert eval_lambda(frac(3, 4) - LAMBDA, Fraction(3, 4)) == ZERO


def test_eval_square():
    assert eval_lambda(LAMBDA ** 2, 2) == Scalar(4)


def test_eval_pole():
    with pytest.raises(EvaluationError):
        eval_lambda(ONE / (LAMBDA - 1), 1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_denominator_is_monic():
    s = ONE / (2 * LAMBDA + I)
    assert s.den.lead() == GaussianRational(1)


def test_text_forms():
    assert frac(-3, 4).text() == "-3/4"
    assert (I / 2).text() == "i/2"
    assert Scalar(GaussianRational(Fraction(1, 2), Fraction(1, 2))).text() == "(1/2 + i/2)"
    assert (frac(5, 4) - LAMBDA).text() == "-lambda + 5/4"
    assert ((LAMBDA + 1) / (LAMBDA - 2)).text() == "(lambda + 1)/(lambda - 2)"


def test_poly_gcd_monic():
    a = (LAMBDA - 1) * (LAMBDA + 2)
    b = (LAMBDA - 1) * (2 * LAMBDA + 3)
    assert poly_gcd(a.num, b.num) == (LAMBDA - 1).num


def test_exact_div_rejects_remainder():
    with pytest.raises(ArithmeticError):
        (LAMBDA ** 2 + 1).num.exact_div((LAMBDA - 1).num)


# --- properties -----------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars(), scalars())
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO
    if not a.is_zero():
        assert a * (ONE / a) == ONE


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars())
def test_arithmetic_matches_sympy(a, b):
    (an, ad), (bn, bd) = to_sympy(a), to_sympy(b)
    assert same(a + b, (an * bd + bn * ad, ad * bd))
    assert same(a * b, (an * bn, ad * bd))
    if not b.is_zero():
        assert same(a / b, (an * bd, ad * bn))


@settings(max_examples=60, deadline=None)
@given(scalars())
def test_normalize_idempotent(a):
    assert normalize(a.num, a.den) == a
    assert normalize(a.num, a.den).num == a.num


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars(), st.builds(Fraction, st.integers(-9, 9), st.integers(1, 7)))
def test_eval_is_ring_homomorphism(a, b, c):
    try:
        ea, eb = eval_lambda(a, c), eval_lambda(b, c)
    except EvaluationError:
        return
    assert eval_lambda(a + b, c) == ea + eb
    assert eval_lambda(a * b, c) == ea * eb


@settings(max_examples=60, deadline=None)
@given(lambda_polys, lambda_polys.filter(lambda p: not p.is_zero()))
def test_poly_divmod(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


@settings(max_examples=60, deadline=None)
@given(gaussians, gaussians)
def test_gaussian_matches_complex_fractions(a, b):
    prod = a * b
    assert prod.re == a.re * b.re - a.im * b.im
    assert prod.im == a.re * b.im + a.im * b.re
    if b:
        assert (a / b) * b == a
