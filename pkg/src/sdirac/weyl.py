"""Normal-ordered Weyl algebra over an ordered set of variables.

A monomial ``x^a d_x^b`` always means the position factors act after the
derivatives (positions to the left).  Elements are stored as a coefficient
table keyed by the concatenated exponent tuple ``pos + der``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Iterable, NamedTuple

from .scalar import ONE, Scalar, eval_lambda, signed_terms

RESERVED = {"i", "lambda"}
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")


class VarSpaceMismatch(ValueError):
    """Operands live over different variable spaces."""


class VarSpace(tuple):
    """Ordered, duplicate-free tuple of variable names."""

    def __new__(cls, names):
        if isinstance(names, str):
            names = [n.strip() for n in names.split(",")]
        names = tuple(names)
        if not names:
            raise ValueError("a variable space needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variables in {names}")
        for n in names:
            if not _IDENT.match(n) or n in RESERVED or n.startswith("d_"):
                raise ValueError(f"invalid variable name {n!r}")
        return super().__new__(cls, names)

    def index(self, name):
        try:
            return super().index(name)
        except ValueError:
            raise VarSpaceMismatch(f"unknown variable {name!r} in space {tuple(self)}") from None

    def __repr__(self):
        return f"VarSpace({','.join(self)})"


class WeylMonomial(NamedTuple):
    pos: tuple
    der: tuple

    @property
    def key(self):
        return self.pos + self.der


def _space(space) -> VarSpace:
    return space if isinstance(space, VarSpace) else VarSpace(space)


@lru_cache(maxsize=200_000)
def _compose(k1: tuple, k2: tuple, n: int) -> tuple:
    """Normal-ordered expansion of monomial k1 times monomial k2, integer coefficients.

    Per variable: d^d v^a = sum_k k! C(d,k) C(a,k) v^(a-k) d^(d-k).
    """
    per_var = []
    for j in range(n):
        p1, d1 = k1[j], k1[n + j]
        p2, d2 = k2[j], k2[n + j]
        opts = []
        for k in range(min(d1, p2) + 1):
            opts.append((p1 + p2 - k, d1 - k + d2, factorial(k) * comb(d1, k) * comb(p2, k)))
        per_var.append(opts)
    out = []
    for choice in product(*per_var):
        coeff = 1
        for _, _, c in choice:
            coeff *= c
        key = tuple(c[0] for c in choice) + tuple(c[1] for c in choice)
        out.append((key, coeff))
    return tuple(out)


def _order_key(key):
    return (-sum(key), tuple(-e for e in key))


def _mono_text(space, key) -> str:
    n = len(space)
    parts = []
    for j, name in enumerate(space):
        e = key[j]
        if e:
            parts.append(name if e == 1 else f"{name}^{e}")
    for j, name in enumerate(space):
        e = key[n + j]
        if e:
            parts.append(f"d_{name}" if e == 1 else f"d_{name}^{e}")
    return "*".join(parts)


def terms_text(items) -> str:
    """Canonical text for ``(Scalar coefficient, monomial text)`` pairs."""
    chunks = []
    for c, mono in items:
        if c.is_constant():
            txt = signed_terms([(c.constant(), mono)])
        else:
            txt = f"({c.text()})*{mono}" if mono else f"({c.text()})"
        neg = txt.startswith("-")
        chunks.append((neg, txt[1:] if neg else txt))
    if not chunks:
        return "0"
    neg, body = chunks[0]
    out = ["-" + body if neg else body]
    for neg, body in chunks[1:]:
        out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


class WeylElement:
    """Finite linear combination of normal-ordered Weyl monomials."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms=None):
        self.space = _space(space)
        n2 = 2 * len(self.space)
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) != n2 or any(e < 0 for e in key):
                raise ValueError(f"bad monomial exponents {key}")
            c = Scalar.coerce(c)
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def _raw(cls, space, terms):
        obj = object.__new__(cls)
        obj.space = space
        obj.terms = terms
        return obj

    # constructors

    @classmethod
    def zero(cls, space) -> "WeylElement":
        return cls._raw(_space(space), {})

    @classmethod
    def const(cls, space, c=1) -> "WeylElement":
        space = _space(space)
        return cls(space, {(0,) * (2 * len(space)): c})

    @classmethod
    def var(cls, space, name) -> "WeylElement":
        space = _space(space)
        key = [0] * (2 * len(space))
        key[space.index(name)] = 1
        return cls._raw(space, {tuple(key): ONE})

    @classmethod
    def der(cls, space, name) -> "WeylElement":
        space = _space(space)
        key = [0] * (2 * len(space))
        key[len(space) + space.index(name)] = 1
        return cls._raw(space, {tuple(key): ONE})

    @classmethod
    def monomial(cls, space, pos, der, c=1) -> "WeylElement":
        space = _space(space)
        return cls(space, {tuple(pos) + tuple(der): c})

    @classmethod
    def generators(cls, space):
        """Return ``(variables, derivatives)`` dicts keyed by name."""
        space = _space(space)
        return ({n: cls.var(space, n) for n in space}, {n: cls.der(space, n) for n in space})

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def monomials(self):
        n = len(self.space)
        for key in sorted(self.terms, key=_order_key):
            yield WeylMonomial(key[:n], key[n:]), self.terms[key]

    def coefficient(self, pos, der) -> Scalar:
        return self.terms.get(tuple(pos) + tuple(der), Scalar(0))

    def is_scalar(self) -> bool:
        zero = (0,) * (2 * len(self.space))
        return all(k == zero for k in self.terms)

    def scalar_value(self) -> Scalar:
        if not self.is_scalar():
            raise ValueError(f"{self} is not a scalar")
        return next(iter(self.terms.values()), Scalar(0))

    def has_derivatives(self) -> bool:
        n = len(self.space)
        return any(any(k[n:]) for k in self.terms)

    def max_lambda_degree(self) -> int:
        return max((c.num.degree for c in self.terms.values()), default=-1)

    # arithmetic

    def _check(self, other):
        if self.space != other.space:
            raise VarSpaceMismatch(f"{tuple(self.space)} vs {tuple(other.space)}")

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.space == other.space and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self == WeylElement.const(self.space, other) if other else not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def __add__(self, other):
        if not isinstance(other, WeylElement):
            try:
                other = WeylElement.const(self.space, other)
            except TypeError:
                return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return WeylElement._raw(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw(self.space, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylElement):
            other = WeylElement.const(self.space, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylElement":
        c = Scalar.coerce(c)
        if not c:
            return WeylElement._raw(self.space, {})
        return WeylElement._raw(self.space, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, WeylElement):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        n = len(self.space)
        acc = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                c12 = c1 * c2
                for key, m in _compose(k1, k2, n):
                    term = c12 if m == 1 else c12 * m
                    s = acc.get(key)
                    acc[key] = term if s is None else s + term
        return WeylElement._raw(self.space, {k: c for k, c in acc.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(Scalar(1) / Scalar.coerce(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        result = WeylElement.const(self.space, 1)
        for _ in range(n):
            result = result * self
        return result

    def embed(self, space) -> "WeylElement":
        """Re-express over a larger space containing all of our variables by name."""
        space = _space(space)
        idx = [space.index(v) for v in self.space]
        m, n = len(space), len(self.space)
        out = {}
        for key, c in self.terms.items():
            new = [0] * (2 * m)
            for j, t in enumerate(idx):
                new[t] = key[j]
                new[m + t] = key[n + j]
            out[tuple(new)] = c
        return WeylElement._raw(space, out)

    def map_coefficients(self, fn) -> "WeylElement":
        out = {}
        for k, c in self.terms.items():
            c2 = fn(c)
            if c2:
                out[k] = c2
        return WeylElement._raw(self.space, out)

    def __repr__(self):
        return f"WeylElement({self.text()!r}, space={','.join(self.space)})"

    def text(self) -> str:
        items = [(c, _mono_text(self.space, m.key)) for m, c in self.monomials()]
        return terms_text(items)

    __str__ = text


def compose_monomials(space, m1: WeylMonomial, m2: WeylMonomial) -> WeylElement:
    space = _space(space)
    n = len(space)
    k1, k2 = tuple(m1.pos) + tuple(m1.der), tuple(m2.pos) + tuple(m2.der)
    if len(k1) != 2 * n or len(k2) != 2 * n:
        raise VarSpaceMismatch("monomials do not match the variable space")
    return WeylElement(space, {k: c for k, c in _compose(k1, k2, n)})


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return a * b - b * a


class PolyElement:
    """Polynomial over a variable space with Scalar coefficients."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms=None):
        self.space = _space(space)
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) != len(self.space) or any(e < 0 for e in key):
                raise ValueError(f"bad exponents {key}")
            c = Scalar.coerce(c)
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def _raw(cls, space, terms):
        obj = object.__new__(cls)
        obj.space, obj.terms = space, terms
        return obj

    @classmethod
    def monomial(cls, space, exps, c=1) -> "PolyElement":
        return cls(space, {tuple(exps): c})

    @classmethod
    def const(cls, space, c=1) -> "PolyElement":
        space = _space(space)
        return cls(space, {(0,) * len(space): c})

    @classmethod
    def from_weyl(cls, w: WeylElement) -> "PolyElement":
        if w.has_derivatives():
            raise ValueError(f"{w} contains derivatives, not a polynomial")
        n = len(w.space)
        return cls._raw(w.space, {k[:n]: c for k, c in w.terms.items()})

    def to_weyl(self) -> WeylElement:
        n = len(self.space)
        return WeylElement._raw(self.space, {k + (0,) * n: c for k, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PolyElement):
            return self.space == other.space and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def __add__(self, other):
        if not isinstance(other, PolyElement):
            return NotImplemented
        if self.space != other.space:
            raise VarSpaceMismatch(f"{tuple(self.space)} vs {tuple(other.space)}")
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return PolyElement._raw(self.space, out)

    def __neg__(self):
        return PolyElement._raw(self.space, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PolyElement":
        c = Scalar.coerce(c)
        return PolyElement._raw(self.space, {k: c * v for k, v in self.terms.items()} if c else {})

    def __mul__(self, other):
        if isinstance(other, PolyElement):
            return PolyElement.from_weyl(self.to_weyl() * other.to_weyl())
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = scale

    def map_coefficients(self, fn) -> "PolyElement":
        out = {}
        for k, c in self.terms.items():
            c2 = fn(c)
            if c2:
                out[k] = c2
        return PolyElement._raw(self.space, out)

    def coefficient(self, exps) -> Scalar:
        return self.terms.get(tuple(exps), Scalar(0))

    def degree_in(self, name) -> int:
        j = self.space.index(name)
        return max((k[j] for k in self.terms), default=-1)

    def __repr__(self):
        return f"PolyElement({self.text()!r}, space={','.join(self.space)})"

    def text(self) -> str:
        n = len(self.space)
        keys = sorted(self.terms, key=lambda k: _order_key(k + (0,) * n))
        return terms_text([(self.terms[k], _mono_text(self.space, k + (0,) * n)) for k in keys])

    __str__ = text


def apply(a: WeylElement, p: PolyElement) -> PolyElement:
    """Act with a differential operator on a polynomial."""
    if a.space != p.space:
        raise VarSpaceMismatch(f"{tuple(a.space)} vs {tuple(p.space)}")
    n = len(a.space)
    acc = {}
    for key, c in a.terms.items():
        pos, der = key[:n], key[n:]
        for e, s in p.terms.items():
            mult = 1
            for j in range(n):
                d = der[j]
                if d:
                    if d > e[j]:
                        mult = 0
                        break
                    for t in range(d):
                        mult *= e[j] - t
            if not mult:
                continue
            new = tuple(e[j] - der[j] + pos[j] for j in range(n))
            term = c * s * mult
            prev = acc.get(new)
            acc[new] = term if prev is None else prev + term
    return PolyElement._raw(a.space, {k: v for k, v in acc.items() if v})


def fourier(a: WeylElement, base: Iterable[str], dual: Iterable[str]) -> WeylElement:
    """Algebraic Fourier transform: base variable v -> -d_w, d_v -> w.

    ``base`` and ``dual`` are matched in order; other variables are spectators and
    keep their names. The result lives over the space with base names replaced.
    """
    base, dual = list(base), list(dual)
    if len(base) != len(dual):
        raise VarSpaceMismatch("base and dual variable lists differ in length")
    for b in base:
        a.space.index(b)
    spectators = [v for v in a.space if v not in base]
    clash = set(dual) & set(spectators)
    if clash:
        raise VarSpaceMismatch(f"dual names {sorted(clash)} collide with spectator variables")
    rename = dict(zip(base, dual))
    target = VarSpace([rename.get(v, v) for v in a.space])
    n = len(a.space)
    image_pos = {}
    image_der = {}
    for b, w in rename.items():
        image_pos[b] = -WeylElement.der(target, w)
        image_der[b] = WeylElement.var(target, w)
    result = WeylElement.zero(target)
    for key, c in a.terms.items():
        spect = [0] * (2 * n)
        factors = []
        for j, v in enumerate(a.space):
            if v in rename:
                pe, de = key[j], key[n + j]
                if pe:
                    factors.append(image_pos[v] ** pe)
                if de:
                    factors.append(image_der[v] ** de)
            else:
                spect[j], spect[n + j] = key[j], key[n + j]
        term = WeylElement._raw(target, {tuple(spect): c})
        # images of distinct variables commute, so the per-variable order is free
        for f in factors:
            term = term * f
        result = result + term
    return result


def substitute_lambda(a, c):
    """Coefficientwise specialization of lambda; works on Weyl and polynomial elements."""
    return a.map_coefficients(lambda s: eval_lambda(s, c))


def euler_weight(a: WeylElement, names) -> int | None:
    """Weight w with [sum v d_v, a] = w a over ``names``; None when a is not homogeneous."""
    n = len(a.space)
    idx = [a.space.index(v) for v in names]
    weights = {sum(key[j] - key[n + j] for j in idx) for key in a.terms}
    if len(weights) != 1:
        return None
    return weights.pop()


def euler_operator(space, names) -> WeylElement:
    space = _space(space)
    out = WeylElement.zero(space)
    for v in names:
        out = out + WeylElement.var(space, v) * WeylElement.der(space, v)
    return out
