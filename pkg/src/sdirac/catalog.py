"""Concrete operators and matrices: the sl(2) and sl(3) realizations.

Variable conventions: ``x, y`` are the base coordinates (and the Fourier-dual
coordinates of the induced picture), ``xh, yh`` the non-compact picture
coordinates, ``q`` the fiber coordinate of the Fock model C[q].
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .scalar import I, LAMBDA, ZERO, Scalar, frac
from .weyl import PolyElement, VarSpace, WeylElement, apply, commutator

BASE = VarSpace(("x", "y", "q"))
HAT = VarSpace(("xh", "yh", "q"))
FIBER = VarSpace(("q",))

SL3_LABELS = ("f1", "f2", "e", "h", "f", "h0", "e1", "e2")
FIBER_LABELS = ("e", "h", "f")
SYMMETRY_LABELS = ("dx", "dy", "O1", "O2", "X", "H", "Y", "E")

HALF = frac(1, 2)


class DecompositionError(ValueError):
    """A matrix is not in the span of the requested basis."""


def _gens(space):
    v, d = WeylElement.generators(space)
    return v, d


# --- sl(2) catalogs on C[x, y] (x) C[q] -------------------------------------


def mp2_catalog() -> dict:
    v, d = _gens(BASE)
    x, y, q = v["x"], v["y"], v["q"]
    dx, dy, dq = d["x"], d["y"], d["q"]
    return {
        "X": -y * dx - (I / 2) * q**2,
        "H": -x * dx + y * dy + q * dq + HALF,
        "Y": -x * dy - (I / 2) * dq**2,
    }


def howe_catalog() -> dict:
    v, d = _gens(BASE)
    x, y, q = v["x"], v["y"], v["q"]
    dx, dy, dq = d["x"], d["y"], d["q"]
    return {
        "Xs": y * dq + I * x * q,
        "E": x * dx + y * dy + HALF,
        "Ds": I * q * dy - dx * dq,
    }


def symmetry_catalog() -> dict:
    """The eight first-order symmetries of the symplectic Dirac operator."""
    v, d = _gens(BASE)
    x, y, q = v["x"], v["y"], v["q"]
    dx, dy, dq = d["x"], d["y"], d["q"]
    o1 = x**2 * dx + x * y * dy - HALF * x * q * dq + (I / 2) * y * dq**2 + HALF * x
    o2 = x * y * dx + y**2 * dy + HALF * y * q * dq + (I / 2) * x * q**2 + y
    mp2, howe = mp2_catalog(), howe_catalog()
    return {"dx": dx, "dy": dy, "O1": o1, "O2": o2,
            "X": mp2["X"], "H": mp2["H"], "Y": mp2["Y"], "E": howe["E"]}


def symmetry_rewritings(cat=None) -> dict:
    """O1 and O2 rewritten through H, X, Y, E with position-variable prefactors."""
    cat = cat if cat is not None else symmetry_catalog()
    v, _ = _gens(BASE)
    x, y = v["x"], v["y"]
    H, X, Y, E = cat["H"], cat["X"], cat["Y"], cat["E"]
    return {
        "O1": -HALF * x * H - y * Y + HALF * x * E + HALF * x,
        "O2": HALF * y * H - x * X + HALF * y * E + HALF * y,
    }


# --- sl(3) matrix model -----------------------------------------------------


class Sl3Matrix:
    """Traceless 3x3 matrix with Scalar entries."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(tuple(Scalar.coerce(v) for v in r) for r in entries)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("expected a 3x3 array")
        if rows[0][0] + rows[1][1] + rows[2][2]:
            raise ValueError("sl(3) matrices must be traceless")
        self.entries = rows

    @classmethod
    def unit(cls, j: int, k: int) -> "Sl3Matrix":
        """Matrix unit E_jk, 1-based indices, j != k."""
        rows = [[0] * 3 for _ in range(3)]
        rows[j - 1][k - 1] = 1
        return cls(rows)

    @classmethod
    def diag(cls, *vals) -> "Sl3Matrix":
        rows = [[0] * 3 for _ in range(3)]
        for k, v in enumerate(vals):
            rows[k][k] = v
        return cls(rows)

    @classmethod
    def zero(cls) -> "Sl3Matrix":
        return cls([[0] * 3 for _ in range(3)])

    def trace(self) -> Scalar:
        return self.entries[0][0] + self.entries[1][1] + self.entries[2][2]

    def flat(self):
        return [v for r in self.entries for v in r]

    def __eq__(self, other):
        return isinstance(other, Sl3Matrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other):
        return Sl3Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return Sl3Matrix([[-a for a in r] for r in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Scalar.coerce(c)
        return Sl3Matrix([[a * c for a in r] for r in self.entries])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.flat())

    def text(self) -> str:
        return "[" + ", ".join("[" + ", ".join(v.text() for v in r) + "]" for r in self.entries) + "]"

    __str__ = text

    def __repr__(self):
        return f"Sl3Matrix({self.text()})"


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(3)), ZERO) for j in range(3)] for i in range(3)]


def matrix_bracket(a: Sl3Matrix, b: Sl3Matrix) -> Sl3Matrix:
    ab = _matmul(a.entries, b.entries)
    ba = _matmul(b.entries, a.entries)
    return Sl3Matrix([[ab[i][j] - ba[i][j] for j in range(3)] for i in range(3)])


def sl3_basis() -> dict:
    return {
        "e1": Sl3Matrix.unit(1, 2),
        "e2": Sl3Matrix.unit(1, 3),
        "f1": Sl3Matrix.unit(2, 1),
        "f2": Sl3Matrix.unit(3, 1),
        "e": Sl3Matrix.unit(2, 3),
        "h": Sl3Matrix.diag(0, 1, -1),
        "f": Sl3Matrix.unit(3, 2),
        "h0": Sl3Matrix.diag(1, Fraction(-1, 2), Fraction(-1, 2)),
    }


def expand_in_basis(m: Sl3Matrix, basis=None) -> list:
    """Exact coordinates of m in ``basis`` (a label->matrix dict or a list; default sl(3) basis)."""
    if basis is None:
        b = sl3_basis()
        basis = [b[k] for k in SL3_LABELS]
    elif isinstance(basis, Mapping):
        basis = list(basis.values())
    cols = [bm.flat() for bm in basis]
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(9)]
    sol = linalg.solve(rows, m.flat(), len(cols))
    if sol is None:
        raise DecompositionError(f"{m} is not in the span of the basis")
    part, null = sol
    if null:
        raise DecompositionError("basis matrices are linearly dependent")
    return part


def rho(m: Sl3Matrix) -> Scalar:
    """Half the trace of ad(m) restricted to the nilradical span{e1, e2}."""
    b = sl3_basis()
    total = ZERO
    for label in ("e1", "e2"):
        coords = dict(zip(SL3_LABELS, expand_in_basis(matrix_bracket(m, b[label]))))
        total = total + coords[label]
    return total * HALF


def rho_character() -> dict:
    b = sl3_basis()
    return {"h0": rho(b["h0"]), "h": rho(b["h"])}


@dataclass
class LieMap:
    """Realizations of basis labels as operators together with their matrix images."""

    labels: tuple
    realizations: dict
    images: dict


def symmetry_to_sl3(cat=None) -> LieMap:
    sym = cat if cat is not None else symmetry_catalog()
    third = Fraction(-1, 3)
    images = {
        "dx": -Sl3Matrix.unit(2, 1),
        "dy": -Sl3Matrix.unit(3, 1),
        "O1": Sl3Matrix.unit(1, 2),
        "O2": Sl3Matrix.unit(1, 3),
        "X": Sl3Matrix.unit(2, 3),
        "Y": Sl3Matrix.unit(3, 2),
        "H": Sl3Matrix.diag(0, 1, -1),
        "E": Sl3Matrix.diag(Fraction(2, 3), third, third),
    }
    return LieMap(SYMMETRY_LABELS, {k: sym[k] for k in SYMMETRY_LABELS}, images)


# --- fiber actions and induced families -------------------------------------


@dataclass
class FiberAction:
    """sl(2) action on C[q] extended to the parabolic by zero on h0 and the nilradical."""

    name: str
    images: dict

    def image(self, label: str, space=FIBER) -> WeylElement:
        if label in self.images:
            return self.images[label].embed(space)
        if label in ("h0", "e1", "e2"):
            return WeylElement.zero(space)
        raise KeyError(f"{label} is not in the parabolic subalgebra")

    def relations(self) -> dict:
        """Residuals of the three sl(2) relations; all zero for a genuine action."""
        e, h, f = (self.images[k] for k in FIBER_LABELS)
        return {
            "[h,e]=2e": commutator(h, e) - 2 * e,
            "[h,f]=-2f": commutator(h, f) + 2 * f,
            "[e,f]=h": commutator(e, f) - h,
        }


def fiber_sigma() -> FiberAction:
    q, dq = WeylElement.var(FIBER, "q"), WeylElement.der(FIBER, "q")
    return FiberAction("sigma", {"e": (I / 2) * dq**2, "h": -q * dq - HALF, "f": (I / 2) * q**2})


def fiber_sigma_dual() -> FiberAction:
    q, dq = WeylElement.var(FIBER, "q"), WeylElement.der(FIBER, "q")
    return FiberAction("sigmastar", {"e": -(I / 2) * q**2, "h": q * dq + HALF, "f": -(I / 2) * dq**2})


@dataclass
class OperatorFamily:
    images: dict
    lam: Scalar
    space: VarSpace
    fiber: str = "sigma"

    def __getitem__(self, label) -> WeylElement:
        return self.images[label]

    def __iter__(self):
        return iter(SL3_LABELS)


def _lam(lam) -> Scalar:
    return LAMBDA if lam is None else Scalar.coerce(lam)


def build_pi(lam=None, fiber=None, space=HAT) -> OperatorFamily:
    """Induced action in the non-compact picture; lam=None keeps lambda symbolic."""
    lam = _lam(lam)
    fiber = fiber if fiber is not None else fiber_sigma()
    space = VarSpace(space)
    v, d = _gens(space)
    x, y = v[space[0]], v[space[1]]
    dx, dy = d[space[0]], d[space[1]]
    fe, fh, ff = (fiber.image(k, space) for k in FIBER_LABELS)
    euler = x * dx + y * dy
    shift = lam + frac(3, 2)
    images = {
        "f1": -dx,
        "f2": -dy,
        "e": -y * dx + fe,
        "h": -x * dx + y * dy + fh,
        "f": -x * dy + ff,
        "h0": frac(3, 2) * euler + shift,
        "e1": x * (euler + shift) - HALF * x * fh - y * ff,
        "e2": y * (euler + shift) + HALF * y * fh - x * fe,
    }
    return OperatorFamily(images, lam, space, fiber.name)


def build_pi_hat(lam=None, fiber=None, space=BASE) -> OperatorFamily:
    """Fourier-side action on C[x, y] (x) C[q]; lam=None keeps lambda symbolic."""
    lam = _lam(lam)
    fiber = fiber if fiber is not None else fiber_sigma()
    space = VarSpace(space)
    v, d = _gens(space)
    x, y = v[space[0]], v[space[1]]
    dx, dy = d[space[0]], d[space[1]]
    fe, fh, ff = (fiber.image(k, space) for k in FIBER_LABELS)
    euler = x * dx + y * dy
    inner = euler - lam + HALF
    images = {
        "f1": -x,
        "f2": -y,
        "e": x * dy + fe,
        "h": x * dx - y * dy + fh,
        "f": y * dx + ff,
        "h0": -frac(3, 2) * euler + lam - frac(3, 2),
        "e1": dx * inner + HALF * dx * fh + dy * ff,
        "e2": dy * inner - HALF * dy * fh + dx * fe,
    }
    return OperatorFamily(images, lam, space, fiber.name)


def dual_pairing(p1: PolyElement, p2: PolyElement) -> Scalar:
    """(p1, p2) = p1(d_q) p2(q) evaluated at q = 0."""
    if tuple(p1.space) != ("q",) or tuple(p2.space) != ("q",):
        raise ValueError("the pairing is defined on C[q]")
    dq = WeylElement.der(FIBER, "q")
    op = WeylElement.zero(FIBER)
    for (k,), c in p1.terms.items():
        op = op + (dq**k).scale(c)
    return apply(op, p2).coefficient((0,))


# --- named catalog ----------------------------------------------------------

ALIASES = {"sym.X": "mp2.X", "sym.H": "mp2.H", "sym.Y": "mp2.Y", "sym.E": "howe.E"}

_FAMILY_FIBER = {"pi": "sigma", "pihat": "sigma", "pistar": "sigmastar", "pihatstar": "sigmastar"}

# which fiber slots feed each generator of an induced family
_FIBER_SLOTS = {"f1": (), "f2": (), "h0": (), "e": ("e",), "h": ("h",), "f": ("f",),
                "e1": ("h", "f"), "e2": ("h", "e")}


def _base_entries() -> dict:
    out = {}
    for k, w in mp2_catalog().items():
        out[f"mp2.{k}"] = w
    for k, w in howe_catalog().items():
        out[f"howe.{k}"] = w
    sym = symmetry_catalog()
    for k in ("dx", "dy", "O1", "O2"):
        out[f"sym.{k}"] = sym[k]
    for fib in (fiber_sigma(), fiber_sigma_dual()):
        for k in FIBER_LABELS:
            out[f"{fib.name}.{k}"] = fib.images[k]
    for k, m in sl3_basis().items():
        out[f"sl3.{k}"] = m
    return out


class Catalog(Mapping):
    """Name -> element lookup with optional overrides (used to inject corrupted constants).

    Induced families ``pi``, ``pihat`` (fiber sigma) and ``pistar``, ``pihatstar``
    (fiber sigma*) are rebuilt from the stored fiber entries with symbolic lambda.
    """

    def __init__(self, overrides=None):
        overrides = {ALIASES.get(k, k): v for k, v in (overrides or {}).items()}
        entries = _base_entries()
        unknown = set(overrides) - set(entries) - set(self._derived_names())
        if unknown:
            raise KeyError(f"unknown catalog names {sorted(unknown)}")
        entries.update({k: v for k, v in overrides.items() if k in entries})
        self._entries = entries
        for prefix, fib_name in _FAMILY_FIBER.items():
            fib = self.fiber(fib_name)
            fam = build_pi(None, fib) if prefix in ("pi", "pistar") else build_pi_hat(None, fib)
            for label in SL3_LABELS:
                entries[f"{prefix}.{label}"] = fam[label]
        entries.update({k: v for k, v in overrides.items() if k not in _base_entries()})
        self.overrides = frozenset(overrides)

    @staticmethod
    def _derived_names():
        return [f"{p}.{k}" for p in _FAMILY_FIBER for k in SL3_LABELS]

    def __getitem__(self, name):
        return self._entries[ALIASES.get(name, name)]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def with_override(self, name, value) -> "Catalog":
        merged = {k: self._entries[k] for k in self.overrides}
        merged[name] = value
        return Catalog(merged)

    def fiber(self, name: str) -> FiberAction:
        return FiberAction(name, {k: self._entries[f"{name}.{k}"] for k in FIBER_LABELS})

    def family(self, prefix: str) -> OperatorFamily:
        fib = _FAMILY_FIBER[prefix]
        space = HAT if prefix in ("pi", "pistar") else BASE
        return OperatorFamily({k: self[f"{prefix}.{k}"] for k in SL3_LABELS}, LAMBDA, space, fib)

    def symmetry(self) -> dict:
        return {k: self[f"sym.{k}"] for k in SYMMETRY_LABELS}

    def lie_map(self) -> LieMap:
        return symmetry_to_sl3(self.symmetry())

    def sl3(self) -> dict:
        return {k: self[f"sl3.{k}"] for k in SL3_LABELS}

    def dependencies(self, name: str) -> frozenset:
        """Stored constants that determine the named entry (the entry itself included)."""
        name = ALIASES.get(name, name)
        prefix, _, label = name.partition(".")
        if prefix in _FAMILY_FIBER:
            fib = _FAMILY_FIBER[prefix]
            return frozenset({name} | {f"{fib}.{s}" for s in _FIBER_SLOTS[label]})
        return frozenset({name})

    def weyl_names(self):
        return [k for k, v in self._entries.items() if isinstance(v, WeylElement)]


DEFAULT = None


def default_catalog() -> Catalog:
    global DEFAULT
    if DEFAULT is None:
        DEFAULT = Catalog()
    return DEFAULT
