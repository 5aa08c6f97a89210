"""Exact coefficients: Gaussian rationals, polynomials and rational functions in lambda.

Every coefficient appearing in the operator calculus lives in Q(i)(lambda).
Values are immutable and kept in a canonical form, so ``==`` is syntactic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational


class EvaluationError(ArithmeticError):
    """Raised when a rational function is evaluated at one of its poles."""


class GaussianRational:
    """The number (a + b*i)/d with integers a, b and d > 0 in lowest terms."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = lcm(re.denominator, im.denominator)
        self._a = re.numerator * (d // re.denominator)
        self._b = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _make(cls, a: int, b: int, d: int) -> "GaussianRational":
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(a, b, d)
        obj = object.__new__(cls)
        if g != 1:
            a, b, d = a // g, b // g, d // g
        obj._a, obj._b, obj._d = a, b, d
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction, Rational)):
            return cls(value)
        if isinstance(value, Scalar) and value.is_constant():
            return value.constant()
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = GaussianRational(other)
        if self._d == other._d:
            return GaussianRational._make(self._a + other._a, self._b + other._b, self._d)
        return GaussianRational._make(
            self._a * other._d + other._a * self._d,
            self._b * other._d + other._b * self._d,
            self._d * other._d,
        )

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(GaussianRational)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        return obj

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = GaussianRational(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, int):
                return GaussianRational._make(self._a * other, self._b * other, self._d)
            if not isinstance(other, Fraction):
                return NotImplemented
            other = GaussianRational(other)
        a, b, c, d = self._a, self._b, other._a, other._b
        return GaussianRational._make(a * c - b * d, a * d + b * c, self._d * other._d)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._make(self._a, -self._b, self._d)

    def inverse(self) -> "GaussianRational":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)")
        # d / (a + b i) = d (a - b i) / (a^2 + b^2)
        norm = self._a * self._a + self._b * self._b
        return GaussianRational._make(self._d * self._a, -self._d * self._b, norm)

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE_G
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return gaussian_text(self)


ZERO_G = GaussianRational(0)
ONE_G = GaussianRational(1)
I_G = GaussianRational(0, 1)


def _frac_text(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _imag_text(f: Fraction) -> str:
    """Text for f*i with f > 0."""
    p, q = f.numerator, f.denominator
    head = "i" if p == 1 else f"{p}*i"
    return head if q == 1 else f"{head}/{q}"


def gaussian_text(g: GaussianRational) -> str:
    re, im = g.re, g.im
    if im == 0:
        return _frac_text(re)
    imag = _imag_text(abs(im))
    if re == 0:
        return imag if im > 0 else "-" + imag
    return f"{_frac_text(re)} {'+' if im > 0 else '-'} {imag}"


def signed_terms(pairs) -> str:
    """Join ``(GaussianRational, monomial_text)`` pairs into a signed sum.

    Single-component coefficients have their sign pulled out; genuinely complex
    ones are parenthesized.
    """
    parts = []
    for coeff, mono in pairs:
        re, im = coeff.re, coeff.im
        if im == 0 or re == 0:
            negative = (re < 0) if im == 0 else (im < 0)
            mag = _frac_text(abs(re)) if im == 0 else _imag_text(abs(im))
            if mono:
                body = mono if mag == "1" else f"{mag}*{mono}"
            else:
                body = mag
        else:
            negative = False
            body = f"({gaussian_text(coeff)})*{mono}" if mono else f"({gaussian_text(coeff)})"
        parts.append((negative, body))
    if not parts:
        return "0"
    neg, body = parts[0]
    out = ["-" + body if neg else body]
    for neg, body in parts[1:]:
        out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


class LambdaPoly:
    """Polynomial in lambda with Gaussian rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [GaussianRational.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs) -> "LambdaPoly":
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        obj = object.__new__(cls)
        obj.coeffs = tuple(cs)
        return obj

    @classmethod
    def constant(cls, c) -> "LambdaPoly":
        return cls._raw([GaussianRational.coerce(c)])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "LambdaPoly":
        return cls._raw([ZERO_G] * degree + [GaussianRational.coerce(c)])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == ONE_G

    def lead(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO_G

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, LambdaPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return LambdaPoly._raw(out)

    def __neg__(self):
        return LambdaPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LambdaPoly):
            g = GaussianRational.coerce(other)
            return LambdaPoly._raw([c * g for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_P
        if len(a) == 1:
            return LambdaPoly._raw([a[0] * c for c in b])
        if len(b) == 1:
            return LambdaPoly._raw([c * b[0] for c in a])
        out = [ZERO_G] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return LambdaPoly._raw(out)

    __rmul__ = __mul__

    def divmod(self, other: "LambdaPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = other.lead().inverse()
        if len(rem) - 1 < dq:
            return ZERO_P, self
        quot = [ZERO_G] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * inv_lead
            quot[k] = c
            if c.is_zero():
                continue
            for j, oc in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * oc
        return LambdaPoly._raw(quot), LambdaPoly._raw(rem[:dq])

    def exact_div(self, other: "LambdaPoly") -> "LambdaPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "LambdaPoly":
        if self.is_zero():
            return self
        return self * self.lead().inverse()

    def __call__(self, c) -> GaussianRational:
        c = GaussianRational.coerce(c)
        acc = ZERO_G
        for coeff in reversed(self.coeffs):
            acc = acc * c + coeff
        return acc

    def derivative(self) -> "LambdaPoly":
        return LambdaPoly._raw([c * k for k, c in enumerate(self.coeffs)][1:])

    def real_part(self) -> "LambdaPoly":
        return LambdaPoly._raw([GaussianRational(c.re) for c in self.coeffs])

    def imag_part(self) -> "LambdaPoly":
        return LambdaPoly._raw([GaussianRational(c.im) for c in self.coeffs])

    def __repr__(self):
        return f"LambdaPoly({self.text()!r})"

    def text(self) -> str:
        pairs = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("lambda" if k == 1 else f"lambda^{k}")
            pairs.append((c, mono))
        return signed_terms(pairs)

    __str__ = text


ZERO_P = LambdaPoly._raw([])
ONE_P = LambdaPoly._raw([ONE_G])


def poly_gcd(a: LambdaPoly, b: LambdaPoly) -> LambdaPoly:
    """Monic gcd over Q(i); gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


class Scalar:
    """Element of Q(i)(lambda) as a reduced fraction with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.num, self.den = value.num, value.den
        elif isinstance(value, LambdaPoly):
            self.num, self.den = value, ONE_P
        else:
            self.num, self.den = LambdaPoly.constant(value), ONE_P

    @classmethod
    def _raw(cls, num: LambdaPoly, den: LambdaPoly) -> "Scalar":
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, LambdaPoly):
            return cls._raw(value, ONE_P)
        return cls._raw(LambdaPoly.constant(value), ONE_P)

    @classmethod
    def lam(cls) -> "Scalar":
        return cls._raw(LambdaPoly.monomial(1), ONE_P)

    @classmethod
    def i(cls) -> "Scalar":
        return cls._raw(LambdaPoly.constant(I_G), ONE_P)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def constant(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"{self} depends on lambda")
        return self.num.lead()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den.degree == 0 and self.num.degree <= 0:
            return hash(self.num.lead())
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num + other.num, ONE_P)
        return normalize(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num * other.num, ONE_P)
        return normalize(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)(lambda)")
        return normalize(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return Scalar(1) / (self ** (-n))
        result = Scalar(1)
        for _ in range(n):
            result = result * self
        return result

    def eval_lambda(self, c) -> "Scalar":
        return eval_lambda(self, c)

    def __repr__(self):
        return f"Scalar({self.text()!r})"

    def text(self) -> str:
        if self.den.is_one():
            return self.num.text()
        return f"({self.num.text()})/({self.den.text()})"

    __str__ = text


def _coerce_or_none(value):
    try:
        return Scalar.coerce(value)
    except TypeError:
        return None


def normalize(num: LambdaPoly, den: LambdaPoly) -> Scalar:
    """Reduce num/den: cancel the gcd and make the denominator monic."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return Scalar._raw(ZERO_P, ONE_P)
    if den.degree == 0:
        return Scalar._raw(num * den.lead().inverse(), ONE_P)
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num.exact_div(g)
        den = den.exact_div(g)
    lead_inv = den.lead().inverse()
    return Scalar._raw(num * lead_inv, den * lead_inv)


def arith(a, b, op: str) -> Scalar:
    a, b = Scalar.coerce(a), Scalar.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def eval_lambda(s, c) -> Scalar:
    """Specialize lambda to the (Gaussian) rational ``c``."""
    s = Scalar.coerce(s)
    if s.num.degree <= 0 and s.den.degree == 0:
        return s
    d = s.den(c)
    if d.is_zero():
        raise EvaluationError(f"{s} has a pole at lambda = {GaussianRational.coerce(c)}")
    return Scalar._raw(LambdaPoly._raw([s.num(c) / d]), ONE_P)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar.i()
LAMBDA = Scalar.lam()


def frac(p, q=1) -> Scalar:
    return Scalar(Fraction(p, q))
