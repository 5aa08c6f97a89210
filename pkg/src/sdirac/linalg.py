"""Exact Gauss-Jordan elimination over the Scalar field."""

from __future__ import annotations

from .scalar import ONE, ZERO, Scalar


def rref(rows, ncols: int):
    """Reduced row echelon form. Returns ``(rows, pivot_columns)``; input is not modified."""
    m = [[Scalar.coerce(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((k for k in range(r, len(m)) if m[k][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = ONE / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c]:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols: int):
    """Basis of {v : rows . v = 0}, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows, rhs, ncols: int):
    """Solve rows . v = rhs. Returns ``(particular, nullspace)`` or ``None`` if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    part = [ZERO] * ncols
    for row, p in zip(red, pivots):
        part[p] = row[ncols]
    return part, nullspace(rows, ncols)
