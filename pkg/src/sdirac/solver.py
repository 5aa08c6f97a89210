"""Singular-vector search on graded sectors of C[x, y] (x) C[q].

A vector is singular when both nilradical operators pihat(e1), pihat(e2)
annihilate it.  Both lower the (x, y)-degree by one, so the problem splits
into finite sectors of fixed (x, y)-degree and bounded q-degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .catalog import BASE, build_pi_hat
from .scalar import ONE_P, LambdaPoly, Scalar, poly_gcd
from .weyl import PolyElement, WeylElement, apply

PARITIES = ("even", "odd", "both")


class InvariantBreach(RuntimeError):
    """An internal consistency condition failed (e.g. an image escaped its codomain)."""


@dataclass(frozen=True)
class GradedSector:
    n: int
    qmax: int
    parity: str = "both"

    def __post_init__(self):
        if self.n < 0 or self.qmax < 0:
            raise ValueError("sector degrees must be nonnegative")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")

    def admits(self, c: int) -> bool:
        return self.parity == "both" or (c % 2 == 0) == (self.parity == "even")


def sector_basis(s: GradedSector) -> list:
    """Exponent tuples (a, b, c) of x^a y^b q^c with a + b = n, c <= qmax of the right parity."""
    return [(a, s.n - a, c) for a in range(s.n, -1, -1) for c in range(s.qmax + 1) if s.admits(c)]


def nilradical_operators(lam=None, fiber=None):
    fam = build_pi_hat(lam, fiber)
    return fam["e1"], fam["e2"]


def image_sector(s: GradedSector, fiber=None) -> GradedSector | None:
    """Smallest sector holding pihat(e1)m, pihat(e2)m for every basis monomial m; None if all vanish."""
    if s.n == 0:
        return None
    degrees = set()
    for op in nilradical_operators(None, fiber):
        for m in sector_basis(s):
            img = apply(op, PolyElement.monomial(BASE, m))
            for (a, b, c) in img.terms:
                if a + b != s.n - 1:
                    raise InvariantBreach(f"{op} does not lower the (x, y)-degree by one")
                degrees.add(c)
    if not degrees:
        return None
    parities = {c % 2 for c in degrees}
    parity = "both" if len(parities) == 2 else ("even" if parities == {0} else "odd")
    return GradedSector(s.n - 1, max(degrees), parity)


@dataclass
class OperatorMatrix:
    rows: list
    cols: list
    entries: list

    def specialize(self, lam) -> "OperatorMatrix":
        from .scalar import eval_lambda

        return OperatorMatrix(self.rows, self.cols, [[eval_lambda(v, lam) for v in r] for r in self.entries])


def operator_matrix(w: WeylElement, domain: GradedSector, codomain=None) -> OperatorMatrix:
    """Matrix of w from the domain sector to ``codomain`` (a sector, a monomial list, or the image sector)."""
    cols = sector_basis(domain)
    if codomain is None:
        codomain = image_sector(domain)
    if codomain is None:
        rows = []
    elif isinstance(codomain, GradedSector):
        rows = sector_basis(codomain)
    else:
        rows = list(codomain)
    index = {m: k for k, m in enumerate(rows)}
    entries = [[Scalar(0)] * len(cols) for _ in rows]
    for j, m in enumerate(cols):
        img = apply(w, PolyElement.monomial(BASE, m))
        for key, c in img.terms.items():
            if key not in index:
                raise InvariantBreach(f"image term {key} of {w} escapes the codomain")
            entries[index[key]][j] = c
    return OperatorMatrix(rows, cols, entries)


def _stacked(s: GradedSector, lam=None, fiber=None):
    codomain = image_sector(s, fiber)
    rows = []
    for op in nilradical_operators(lam, fiber):
        rows.extend(operator_matrix(op, s, codomain).entries)
    return rows


def _to_poly(cols, basis) -> PolyElement:
    return PolyElement(BASE, {m: c for m, c in zip(basis, cols) if c})


def kernel_at(lam, s: GradedSector, fiber=None) -> list:
    """Exact basis of the joint kernel of pihat(e1), pihat(e2) on the sector at a fixed lambda."""
    basis = sector_basis(s)
    rows = _stacked(s, Scalar.coerce(lam), fiber)
    return [_to_poly(v, basis) for v in linalg.nullspace(rows, len(basis))]


def bareiss(rows, ncols: int):
    """Fraction-free row reduction over Q(i)[lambda].

    Returns ``(pivots, pivot_columns)``; the k-th pivot is a k x k minor, so the
    rank can only drop at a root of one of them.
    """
    m = [list(r) for r in rows]
    prev = ONE_P
    pivots, pcols = [], []
    r = 0
    for c in range(ncols):
        cand = [k for k in range(r, len(m)) if not m[k][c].is_zero()]
        if not cand:
            continue
        k = min(cand, key=lambda k: (m[k][c].degree, k))
        m[r], m[k] = m[k], m[r]
        p = m[r][c]
        for k in range(r + 1, len(m)):
            mk = m[k]
            f = mk[c]
            for j in range(c + 1, ncols):
                mk[j] = (p * mk[j] - f * m[r][j]).exact_div(prev)
            mk[c] = LambdaPoly()
        prev = p
        pivots.append(p)
        pcols.append(c)
        r += 1
        if r == len(m):
            break
    return pivots, pcols


def rational_roots(p: LambdaPoly):
    """Rational roots of p and the leftover factors with no rational root (as text)."""
    import sympy

    if p.degree <= 0:
        return [], []
    re, im = p.real_part(), p.imag_part()
    g = poly_gcd(re, im) if not im.is_zero() else re.monic()
    leftover = []
    cofactor = p.exact_div(g) if g.degree > 0 else p
    if cofactor.degree > 0:
        leftover.append(cofactor.monic().text())
    if g.degree <= 0:
        return [], leftover
    lam = sympy.Symbol("lambda")
    sp = sympy.Poly([sympy.Rational(c.re.numerator, c.re.denominator) for c in reversed(g.coeffs)],
                    lam, domain="QQ")
    roots = []
    for fac, _mult in sp.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -b / a
            roots.append(Fraction(int(r.p), int(r.q)))
        else:
            leftover.append(str(fac.as_expr()))
    return sorted(set(roots)), leftover


@dataclass
class KernelResult:
    sector: GradedSector
    generic_dim: int
    critical_lambdas: list = field(default_factory=list)
    pivot_polynomials: list = field(default_factory=list)
    basis_at: dict = field(default_factory=dict)
    unresolved: list = field(default_factory=list)


def kernel_symbolic(s: GradedSector, fiber=None) -> KernelResult:
    """Kernel dimension for generic lambda and the rational lambdas where it jumps."""
    basis = sector_basis(s)
    if not basis:
        return KernelResult(s, 0)
    rows = [[v.num for v in r] for r in _stacked(s, None, fiber)]
    pivots, _ = bareiss(rows, len(basis))
    generic = len(basis) - len(pivots)
    result = KernelResult(s, generic, pivot_polynomials=pivots)
    candidates = set()
    for p in pivots:
        roots, rest = rational_roots(p)
        candidates.update(roots)
        for t in rest:
            if t not in result.unresolved:
                result.unresolved.append(t)
    for c in sorted(candidates):
        kern = kernel_at(c, s, fiber)
        if len(kern) > generic:
            result.critical_lambdas.append(c)
            result.basis_at[c] = kern
    return result


def lambda_text(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def sector_report(res: KernelResult) -> dict:
    s = res.sector
    return {
        "n": s.n,
        "parity": s.parity,
        "qmax": s.qmax,
        "dim": len(sector_basis(s)),
        "generic_dim": res.generic_dim,
        "critical": [
            {"lambda": lambda_text(c), "dim": len(res.basis_at[c]), "basis": [b.text() for b in res.basis_at[c]]}
            for c in res.critical_lambdas
        ],
        "unresolved_factors": list(res.unresolved),
    }


def singular_search(n_max: int, qmax: int, parities=PARITIES, fiber=None) -> list:
    """Run kernel_symbolic over all sectors with n <= n_max and the given parities."""
    if n_max < 0 or qmax < 0:
        raise ValueError("n_max and qmax must be nonnegative")
    rows = []
    for n in range(n_max + 1):
        for parity in parities:
            rows.append(sector_report(kernel_symbolic(GradedSector(n, qmax, parity), fiber)))
    return rows
