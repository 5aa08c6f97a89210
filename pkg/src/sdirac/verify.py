"""Exact re-verification of every operator identity, reported as zero/non-zero residuals."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .catalog import (
    BASE,
    FIBER,
    HAT,
    SL3_LABELS,
    Catalog,
    DecompositionError,
    build_pi,
    build_pi_hat,
    default_catalog,
    dual_pairing,
    expand_in_basis,
    matrix_bracket,
    rho,
    symmetry_rewritings,
)
from .scalar import I, LAMBDA, ZERO, GaussianRational, LambdaPoly, Scalar, frac, poly_gcd
from .solver import GradedSector, kernel_at, kernel_symbolic, rational_roots, sector_basis
from .weyl import (
    PolyElement,
    VarSpace,
    WeylElement,
    WeylMonomial,
    apply,
    commutator,
    compose_monomials,
    fourier,
)

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "sdirac verification report",
    "type": "object",
    "required": ["suite", "checks", "passed", "failed"],
    "properties": {
        "suite": {"type": "string"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "residual"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail"]},
                    "residual": {"type": "string"},
                },
            },
        },
        "passed": {"type": "integer", "minimum": 0},
        "failed": {"type": "integer", "minimum": 0},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}


@dataclass
class IdentityCheck:
    """One identity; ``residual`` is canonical text and is ``"0"`` exactly when it holds."""

    name: str
    residual: str
    uses: frozenset = frozenset()
    suite: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.residual == "0" else "fail"

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "residual": self.residual}


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.status == "pass" for c in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    def by_name(self, name) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name, residual, uses=()):
        self.checks.append(IdentityCheck(name, _text(residual), frozenset(uses), self.suite))

    def identity(self, name, lhs, rhs, uses=()):
        self.add(name, lhs - rhs, uses)

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "failed": self.failed,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _text(residual) -> str:
    if isinstance(residual, str):
        return residual
    if residual is None:
        return "0"
    if hasattr(residual, "is_zero") and residual.is_zero():
        return "0"
    return residual.text()


def _cat(cat) -> Catalog:
    return cat if cat is not None else default_catalog()


# --- symmetries of the symplectic Dirac operator ------------------------------

# (name, left, right, expected as [(coefficient, label), ...])
SYMMETRY_TABLE = [
    ("[dx,O2]=-X", "dx", "O2", [(-1, "X")]),
    ("[dy,O1]=-Y", "dy", "O1", [(-1, "Y")]),
    ("[dy,O2]=1/2(3E+H)", "dy", "O2", [(Fraction(3, 2), "E"), (Fraction(1, 2), "H")]),
    ("[dx,O1]=1/2(3E-H)", "dx", "O1", [(Fraction(3, 2), "E"), (Fraction(-1, 2), "H")]),
    ("[O2,H]=-O2", "O2", "H", [(-1, "O2")]),
    ("[O1,H]=O1", "O1", "H", [(1, "O1")]),
    ("[O2,E]=-O2", "O2", "E", [(-1, "O2")]),
    ("[O1,E]=-O1", "O1", "E", [(-1, "O1")]),
    ("[O2,Y]=O1", "O2", "Y", [(1, "O1")]),
    ("[O1,X]=O2", "O1", "X", [(1, "O2")]),
    ("[dx,H]=-dx", "dx", "H", [(-1, "dx")]),
    ("[dy,H]=dy", "dy", "H", [(1, "dy")]),
    ("[dx,Y]=-dy", "dx", "Y", [(-1, "dy")]),
    ("[dy,X]=-dx", "dy", "X", [(-1, "dx")]),
    ("[dx,E]=dx", "dx", "E", [(1, "dx")]),
    ("[dy,E]=dy", "dy", "E", [(1, "dy")]),
    ("[H,X]=2X", "H", "X", [(2, "X")]),
    ("[H,Y]=-2Y", "H", "Y", [(-2, "Y")]),
    ("[X,Y]=H", "X", "Y", [(1, "H")]),
]

_SYM_NAME = {"dx": "sym.dx", "dy": "sym.dy", "O1": "sym.O1", "O2": "sym.O2",
             "X": "mp2.X", "H": "mp2.H", "Y": "mp2.Y", "E": "howe.E"}


def _combo(space, terms, elements):
    out = WeylElement.zero(space)
    for c, label in terms:
        out = out + elements[label].scale(Scalar(c))
    return out


def check_symmetry_tables(cat=None) -> VerificationReport:
    cat = _cat(cat)
    sym = cat.symmetry()
    lmap = cat.lie_map()
    rep = VerificationReport("symmetry")
    listed = set()
    for name, a, b, rhs in SYMMETRY_TABLE:
        listed.add(frozenset((a, b)))
        uses = {_SYM_NAME[a], _SYM_NAME[b]} | {_SYM_NAME[l] for _, l in rhs}
        rep.identity(name, commutator(sym[a], sym[b]), _combo(BASE, rhs, sym), uses)

    ds = cat["howe.Ds"]
    x, y = WeylElement.var(BASE, "x"), WeylElement.var(BASE, "y")
    rep.identity("[Ds,O1]=3/2*x*Ds", commutator(ds, sym["O1"]), frac(3, 2) * x * ds, {"howe.Ds", "sym.O1"})
    rep.identity("[Ds,O2]=3/2*y*Ds", commutator(ds, sym["O2"]), frac(3, 2) * y * ds, {"howe.Ds", "sym.O2"})
    rep.add("[dx,Ds]=0", commutator(sym["dx"], ds), {"howe.Ds", "sym.dx"})
    rep.add("[dy,Ds]=0", commutator(sym["dy"], ds), {"howe.Ds", "sym.dy"})

    rw = symmetry_rewritings(sym)
    rep.identity("O1=-1/2*x*H-y*Y+1/2*x*E+1/2*x", sym["O1"], rw["O1"],
                 {"sym.O1", "mp2.H", "mp2.Y", "howe.E"})
    rep.identity("O2=1/2*y*H-x*X+1/2*y*E+1/2*y", sym["O2"], rw["O2"],
                 {"sym.O2", "mp2.H", "mp2.X", "howe.E"})

    # pairs the table leaves out are compared with the matrix-model prediction
    images = [lmap.images[k] for k in lmap.labels]
    for a, b in combinations(lmap.labels, 2):
        if frozenset((a, b)) in listed:
            continue
        uses = {_SYM_NAME[a], _SYM_NAME[b]}
        coords = expand_in_basis(matrix_bracket(lmap.images[a], lmap.images[b]), images)
        pred = _combo(BASE, [(c, l) for c, l in zip(coords, lmap.labels) if c], sym)
        uses |= {_SYM_NAME[l] for c, l in zip(coords, lmap.labels) if c}
        rep.identity(f"[{a},{b}]=model", commutator(sym[a], sym[b]), pred, uses)
    return rep


def check_howe(cat=None) -> VerificationReport:
    """Brackets among X_s, E, D_s and their commutation with the mp(2) triple."""
    cat = _cat(cat)
    xs, e, ds = cat["howe.Xs"], cat["howe.E"], cat["howe.Ds"]
    v, d = WeylElement.generators(BASE)
    euler = v["x"] * d["x"] + v["y"] * d["y"]
    rep = VerificationReport("howe")
    rep.identity("[Ds,Xs]=-i(x*d_x+y*d_y+1)", commutator(ds, xs), -I * (euler + 1), {"howe.Ds", "howe.Xs"})
    rep.identity("[E,Xs]=Xs", commutator(e, xs), xs, {"howe.E", "howe.Xs"})
    rep.identity("[E,Ds]=-Ds", commutator(e, ds), -ds, {"howe.E", "howe.Ds"})
    for t in ("X", "H", "Y"):
        for name in ("Xs", "E", "Ds"):
            rep.add(f"[{name},{t}]=0", commutator(cat[f"howe.{name}"], cat[f"mp2.{t}"]),
                    {f"howe.{name}", f"mp2.{t}"})
    rep.notes.append("[Ds,Xs] = -i(E + 1/2): the triple closes as sl(2) with E shifted to x*d_x + y*d_y + 1")
    return rep


def check_homomorphism(lmap=None, name="homomorphism", uses_of=None) -> VerificationReport:
    """Compare operator brackets with 3x3 matrix brackets on all basis pairs, plus injectivity."""
    lmap = lmap if lmap is not None else default_catalog().lie_map()
    uses_of = uses_of or (lambda label: {_SYM_NAME.get(label, label)})
    rep = VerificationReport(name)
    labels = list(lmap.labels)
    images = [lmap.images[k] for k in labels]
    space = lmap.realizations[labels[0]].space
    for a, b in combinations(labels, 2):
        uses = uses_of(a) | uses_of(b)
        lhs = commutator(lmap.realizations[a], lmap.realizations[b])
        try:
            coords = expand_in_basis(matrix_bracket(lmap.images[a], lmap.images[b]), images)
        except DecompositionError as exc:
            rep.add(f"[{a},{b}]", f"matrix side undecomposable: {exc}", uses)
            continue
        pred = _combo(space, [(c, l) for c, l in zip(coords, labels) if c], lmap.realizations)
        rep.identity(f"[{a},{b}]", lhs, pred, uses | {u for c, l in zip(coords, labels) if c for u in uses_of(l)})
    mrank = linalg.rank([m.flat() for m in images], 9)
    rep.add("matrix images independent", "0" if mrank == len(labels) else f"rank {mrank} < {len(labels)}",
            set().union(*(uses_of(l) for l in labels)))
    keys = sorted({k for w in lmap.realizations.values() for k in w.terms})
    wrows = [[lmap.realizations[l].terms.get(k, ZERO) for k in keys] for l in labels]
    wrank = linalg.rank(wrows, len(keys))
    rep.add("realizations independent", "0" if wrank == len(labels) else f"rank {wrank} < {len(labels)}",
            set().union(*(uses_of(l) for l in labels)))
    return rep


def check_pi_families(cat=None) -> VerificationReport:
    """Lie homomorphism property of the induced families with symbolic lambda, and Fourier compatibility."""
    cat = _cat(cat)
    sl3 = cat.sl3()
    basis = [sl3[k] for k in SL3_LABELS]
    rep = VerificationReport("pi_families")
    for prefix in ("pi", "pihat", "pistar", "pihatstar"):
        fam = cat.family(prefix)
        for a, b in combinations(SL3_LABELS, 2):
            uses = cat.dependencies(f"{prefix}.{a}") | cat.dependencies(f"{prefix}.{b}")
            uses |= {f"sl3.{a}", f"sl3.{b}"} | {f"sl3.{k}" for k in SL3_LABELS}
            coords = expand_in_basis(matrix_bracket(sl3[a], sl3[b]), basis)
            pred = WeylElement.zero(fam.space)
            for c, l in zip(coords, SL3_LABELS):
                if c:
                    pred = pred + fam[l].scale(c)
                    uses |= cat.dependencies(f"{prefix}.{l}")
            rep.identity(f"{prefix} [{a},{b}]", commutator(fam[a], fam[b]), pred, uses)
    for src, dst in (("pi", "pihat"), ("pistar", "pihatstar")):
        for label in SL3_LABELS:
            uses = cat.dependencies(f"{src}.{label}") | cat.dependencies(f"{dst}.{label}")
            image = fourier(cat[f"{src}.{label}"], ["xh", "yh"], ["x", "y"])
            rep.identity(f"fourier({src}.{label})={dst}.{label}", image, cat[f"{dst}.{label}"], uses)
    return rep


def check_rho(cat=None) -> VerificationReport:
    cat = _cat(cat)
    sl3 = cat.sl3()
    rep = VerificationReport("rho")
    rep.identity("rho(h0)=3/2", Scalar(rho(sl3["h0"])), frac(3, 2), {"sl3.h0", "sl3.e1", "sl3.e2"})
    rep.identity("rho(h)=0", Scalar(rho(sl3["h"])), ZERO, {"sl3.h", "sl3.e1", "sl3.e2"})
    grade = {"e1": 1, "e2": 1, "f1": -1, "f2": -1, "e": 0, "h": 0, "f": 0, "h0": 0}
    for k, s in grade.items():
        rep.identity(f"[h0,{k}]={s}*3/2*{k}", matrix_bracket(sl3["h0"], sl3[k]),
                     sl3[k] * frac(3 * s, 2), {"sl3.h0", f"sl3.{k}"})
    return rep


def _q_monomials(deg):
    return [PolyElement.monomial(FIBER, (k,)) for k in range(deg + 1)]


def check_fibers(cat=None, max_degree=6) -> VerificationReport:
    cat = _cat(cat)
    rep = VerificationReport("fiber")
    for name in ("sigma", "sigmastar"):
        fib = cat.fiber(name)
        uses = {f"{name}.{k}" for k in ("e", "h", "f")}
        for rel, res in fib.relations().items():
            rep.add(f"{name} {rel}", res, uses)
    sig, dual = cat.fiber("sigma"), cat.fiber("sigmastar")
    monos = _q_monomials(max_degree)
    for z in ("e", "h", "f"):
        bad = []
        for p1 in monos:
            for p2 in monos:
                s = dual_pairing(apply(sig.images[z], p1), p2) + dual_pairing(p1, apply(dual.images[z], p2))
                if s:
                    bad.append(f"({p1},{p2})->{s}")
        rep.add(f"pairing(sigma({z})p1,p2)+pairing(p1,sigmastar({z})p2)=0",
                "; ".join(bad[:3]) if bad else "0", {f"sigma.{z}", f"sigmastar.{z}"})
    for label in ("h0", "e1", "e2"):
        rep.add(f"sigma({label})=0", sig.image(label), set())
    return rep


# --- singular vectors ---------------------------------------------------------


def _lift(v0: PolyElement) -> PolyElement:
    if v0.space != BASE:
        v0 = PolyElement.from_weyl(v0.to_weyl().embed(BASE))
    return v0


def nilradical_residuals(cat, k: int, v0: PolyElement):
    """pihat(e1) and pihat(e2) applied to X_s^k v0, lambda symbolic."""
    v0 = _lift(v0)
    vec = v0
    for _ in range(k):
        vec = apply(cat["howe.Xs"], vec)
    return apply(cat["pihat.e1"], vec), apply(cat["pihat.e2"], vec)


def common_lambda_roots(*residuals):
    """Common zero locus in lambda of all coefficients.

    Returns ``("all", None)`` when everything vanishes identically, otherwise
    ``(gcd, rational_roots)`` where gcd is the monic gcd of all coefficient numerators.
    """
    g = LambdaPoly()
    for res in residuals:
        for c in res.terms.values():
            g = poly_gcd(g, c.num)
    if g.is_zero():
        return "all", None
    roots, _ = rational_roots(g)
    return g, roots


def _squarefree(g: LambdaPoly) -> LambdaPoly:
    if g.degree <= 0:
        return g
    return g.exact_div(poly_gcd(g, g.derivative())).monic()


def check_singular(v0: PolyElement, cat=None, label=None) -> VerificationReport:
    cat = _cat(cat)
    v0b = _lift(v0)
    label = label or str(v0)
    rep = VerificationReport("singular")
    uses = {"howe.Xs", "pihat.e1", "pihat.e2", "sigma.e", "sigma.h", "sigma.f"}
    r1, r2 = nilradical_residuals(cat, 1, v0b)
    v, d = WeylElement.generators(BASE)
    factor = frac(3, 4) - LAMBDA
    rep.identity(f"pihat(e1)Xs({label})=(3/4-lambda)*i*q*v0", r1, apply(I * v["q"], v0b).scale(factor), uses)
    rep.identity(f"pihat(e2)Xs({label})=(3/4-lambda)*d_q(v0)", r2, apply(d["q"], v0b).scale(factor), uses)
    g, _ = common_lambda_roots(r1, r2)
    target = LambdaPoly([Fraction(-3, 4), 1])
    if g == "all":
        res = "residuals vanish for every lambda"
    else:
        sf = _squarefree(g)
        res = "0" if sf == target else f"common zero locus of residuals: {sf.text()} = 0"
    rep.add(f"Xs({label}) singular iff lambda=3/4", res, uses)
    return rep


def power_closed_form(k: int, v0: PolyElement, cat=None, numerator=None) -> PolyElement:
    """(k - lambda + 1/4)(i k q X_s^(k-1) + i k(k-1)/2 y X_s^(k-2)) v0 - i c/4 q X_s^(k-1) v0.

    ``numerator`` is c; the engine-derived value is k(k+1).
    """
    cat = _cat(cat)
    v0 = _lift(v0)
    c = k * (k + 1) if numerator is None else numerator
    xs = cat["howe.Xs"]
    v, _ = WeylElement.generators(BASE)

    def power(j):
        out = v0
        for _ in range(j):
            out = apply(xs, out)
        return out

    pre = Scalar(k) - LAMBDA + frac(1, 4)
    out = apply(I * k * v["q"], power(k - 1)).scale(pre)
    if k >= 2:
        out = out + apply(I * frac(k * (k - 1), 2) * v["y"], power(k - 2)).scale(pre)
    return out - apply(I * frac(c, 4) * v["q"], power(k - 1))


def check_nonsingular_powers(k: int, v0: PolyElement, cat=None, label=None) -> VerificationReport:
    if not 2 <= k <= 4:
        raise ValueError("k must lie in 2..4")
    cat = _cat(cat)
    label = label or str(v0)
    rep = VerificationReport("powers")
    uses = {"howe.Xs", "pihat.e1", "pihat.e2", "sigma.e", "sigma.h", "sigma.f"}
    r1, r2 = nilradical_residuals(cat, k, v0)
    g, _ = common_lambda_roots(r1, r2)
    if g == "all":
        res = "residuals vanish for every lambda"
    else:
        res = "0" if g.degree == 0 else f"common root locus {g.text()} = 0"
    rep.add(f"Xs^{k}({label}) not singular for any lambda", res, uses)
    rep.identity(f"pihat(e1)Xs^{k}({label}) closed form", r1, power_closed_form(k, v0, cat), uses)
    alt = power_closed_form(k, v0, cat, numerator=k * (k - 1))
    rep.notes.append(
        f"k={k}, v0={label}: closed form with k(k-1)/4 {'matches' if alt == r1 else 'does not match'}"
        f" the expansion, with k(k+1)/4 {'matches' if power_closed_form(k, v0, cat) == r1 else 'does not match'}"
    )
    return rep


# --- intertwining operators ---------------------------------------------------


@dataclass
class IntertwiningSolution:
    """Affine solution set {point + span(directions)} in (lambda1, lambda2), or empty."""

    point: tuple | None
    directions: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        if self.point is None:
            return "empty"
        return {0: "point", 1: "line", 2: "plane"}[len(self.directions)]

    def contains(self, l1, l2) -> bool:
        if self.point is None:
            return False
        target = [Scalar.coerce(l1) - self.point[0], Scalar.coerce(l2) - self.point[1]]
        if not self.directions:
            return not any(target)
        rows = [[d[0] for d in self.directions], [d[1] for d in self.directions]]
        return linalg.solve(rows, target, len(self.directions)) is not None

    def text(self) -> str:
        if self.point is None:
            return "empty"
        pt = f"(lambda1, lambda2) = ({self.point[0]}, {self.point[1]})"
        if not self.directions:
            return pt
        return pt + " + span" + ", ".join(f"({a}, {b})" for a, b in self.directions)


def _split_affine(w: WeylElement):
    const, lin = {}, {}
    for key, c in w.terms.items():
        if not c.is_polynomial() or c.num.degree > 1:
            raise ValueError(f"coefficient {c} is not affine in lambda")
        cs = c.num.coeffs
        if len(cs) >= 1 and cs[0]:
            const[key] = Scalar(cs[0])
        if len(cs) == 2:
            lin[key] = Scalar(cs[1])
    return WeylElement(w.space, const), WeylElement(w.space, lin)


def intertwining_residuals(d: WeylElement, fiber, l1, l2) -> dict:
    """D pi_{l1}(X) - pi_{l2}(X) D for each generator X."""
    a = build_pi(l1, fiber, d.space)
    b = build_pi(l2, fiber, d.space)
    return {k: d * a[k] - b[k] * d for k in SL3_LABELS}


def solve_intertwining(d: WeylElement, fiber) -> IntertwiningSolution:
    """All (lambda1, lambda2) with D pi_lambda1(X) = pi_lambda2(X) D for every generator X."""
    if d.max_lambda_degree() > 0:
        raise ValueError("the operator must not depend on lambda")
    fam = build_pi(None, fiber, d.space)
    rows, rhs = [], []
    for label in SL3_LABELS:
        p0, p1 = _split_affine(fam[label])
        c0 = d * p0 - p0 * d
        a = d * p1
        b = p1 * d
        for key in set(c0.terms) | set(a.terms) | set(b.terms):
            rows.append([a.terms.get(key, ZERO), -b.terms.get(key, ZERO)])
            rhs.append(-c0.terms.get(key, ZERO))
    sol = linalg.solve(rows, rhs, 2)
    if sol is None:
        return IntertwiningSolution(None)
    part, null = sol
    return IntertwiningSolution(tuple(part), [tuple(v) for v in null])


def dirac_hat(cat=None) -> WeylElement:
    """D_s written in the non-compact picture coordinates xh, yh, q."""
    ds = _cat(cat)["howe.Ds"]
    return WeylElement(HAT, ds.terms)


def check_intertwining(cat=None) -> VerificationReport:
    cat = _cat(cat)
    rep = VerificationReport("intertwining")
    uses = {"howe.Ds", "sigmastar.e", "sigmastar.h", "sigmastar.f"}
    d = dirac_hat(cat)
    fib = cat.fiber("sigmastar")
    sol = solve_intertwining(d, fib)
    if sol.kind != "point":
        rep.add("Ds intertwines exactly one pair", f"solution set is {sol.kind}: {sol.text()}", uses)
        return rep
    rep.add("Ds intertwines exactly one pair", "0", uses)
    l1, l2 = sol.point
    rep.identity("lambda2-lambda1=3/2", l2 - l1, frac(3, 2), uses)
    for label, res in intertwining_residuals(d, fib, l1, l2).items():
        rep.add(f"Ds pi*_{l1}({label}) = pi*_{l2}({label}) Ds", res, uses)
    grid = [Fraction(k, 2) for k in range(-2, 3)]
    leaks = []
    for a in grid:
        for b in grid:
            if sol.contains(a, b):
                continue
            if not any(intertwining_residuals(d, fib, a, b).values()):
                leaks.append(f"({a},{b})")
    rep.add("grid pairs off the solution set fail", ", ".join(leaks) if leaks else "0", uses)
    shift = frac(3, 2)
    rep.notes.append(
        f"intertwining pair (lambda1, lambda2) = ({l1}, {l2}); with rho = 3/2 the twisted weights are "
        f"lambda+rho = ({l1 + shift}, {l2 + shift}), so family subscripts are lambda and bundle labels lambda+rho"
    )
    return rep


# --- engine properties --------------------------------------------------------


def random_scalar(rng: random.Random, lam=True) -> Scalar:
    re = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    im = Fraction(rng.randint(-5, 5), rng.randint(1, 4)) if rng.random() < 0.5 else 0
    s = Scalar(GaussianRational(re, im))
    if lam and rng.random() < 0.2:
        s = s + LAMBDA * rng.randint(-3, 3)
    return s


def random_element(rng: random.Random, space, max_degree=3, max_terms=4, lam=True) -> WeylElement:
    space = VarSpace(space)
    n = len(space)
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        total = rng.randint(0, max_degree)
        key = [0] * (2 * n)
        for _ in range(total):
            key[rng.randrange(2 * n)] += 1
        terms[tuple(key)] = random_scalar(rng, lam)
    return WeylElement(space, terms)


def random_poly(rng: random.Random, space, max_degree=4, max_terms=4) -> PolyElement:
    space = VarSpace(space)
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        key = [0] * len(space)
        for _ in range(rng.randint(0, max_degree)):
            key[rng.randrange(len(space))] += 1
        terms[tuple(key)] = random_scalar(rng, lam=False)
    return PolyElement(space, terms)


def _monomials_upto(space, degree):
    n = len(space)
    out = []

    def rec(prefix, left):
        if len(prefix) == n:
            out.append(PolyElement.monomial(space, prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e)

    rec([], degree)
    return out


def check_engine_properties(cases=50, seed=0) -> VerificationReport:
    """Randomized algebra laws; ``cases`` draws per law from a seeded generator."""
    rng = random.Random(seed)
    rep = VerificationReport("engine")
    space = VarSpace("x,y,q")
    hat = VarSpace("xh,yh,q")
    small = VarSpace("x,q")
    oracle_polys = _monomials_upto(small, 8)
    failures = {"associativity": [], "module action": [], "fourier multiplicative": [],
                "fourier commutator": [], "compose vs apply": []}
    for t in range(cases):
        a, b, c = (random_element(rng, space) for _ in range(3))
        if (a * b) * c != a * (b * c):
            failures["associativity"].append(t)
        p = random_poly(rng, space)
        if apply(a * b, p) != apply(a, apply(b, p)):
            failures["module action"].append(t)
        u, w = random_element(rng, hat), random_element(rng, hat)
        fu, fw = fourier(u, ["xh", "yh"], ["x", "y"]), fourier(w, ["xh", "yh"], ["x", "y"])
        if fourier(u * w, ["xh", "yh"], ["x", "y"]) != fu * fw:
            failures["fourier multiplicative"].append(t)
        if fourier(commutator(u, w), ["xh", "yh"], ["x", "y"]) != commutator(fu, fw):
            failures["fourier commutator"].append(t)
        m1 = WeylMonomial(*_rand_mono(rng, 2, 4))
        m2 = WeylMonomial(*_rand_mono(rng, 2, 4))
        prod = compose_monomials(small, m1, m2)
        e1 = WeylElement.monomial(small, m1.pos, m1.der)
        e2 = WeylElement.monomial(small, m2.pos, m2.der)
        if any(apply(prod, p) != apply(e1, apply(e2, p)) for p in oracle_polys):
            failures["compose vs apply"].append(t)
    for law, bad in failures.items():
        rep.add(f"{law} ({cases} cases, seed {seed})", "0" if not bad else f"failed on cases {bad[:5]}")
    return rep


def _rand_mono(rng, n, max_degree):
    key = [0] * (2 * n)
    for _ in range(rng.randint(0, max_degree)):
        key[rng.randrange(2 * n)] += 1
    return tuple(key[:n]), tuple(key[n:])


# --- solver suite -------------------------------------------------------------


def _in_span(vec: PolyElement, basis) -> bool:
    keys = sorted({k for b in basis for k in b.terms} | set(vec.terms))
    rows = [[b.terms.get(k, ZERO) for b in basis] for k in keys]
    return linalg.solve(rows, [vec.terms.get(k, ZERO) for k in keys], len(basis)) is not None


def check_solver(cat=None) -> VerificationReport:
    cat = _cat(cat)
    fib = cat.fiber("sigma")
    uses = {"sigma.e", "sigma.h", "sigma.f", "pihat.e1", "pihat.e2"}
    rep = VerificationReport("solver")
    sector = GradedSector(1, 3, "odd")
    res = kernel_symbolic(sector, fib)
    crit = Fraction(3, 4)
    rep.add("sector (1,3,odd): 3/4 is critical",
            "0" if crit in res.critical_lambdas else f"critical set {res.critical_lambdas}", uses)
    kern = kernel_at(crit, sector, fib)
    xs = cat["howe.Xs"]
    for v0e in (0, 2):
        img = apply(xs, PolyElement.monomial(BASE, (0, 0, v0e)))
        rep.add(f"Xs(q^{v0e}) in kernel at 3/4", "0" if kern and _in_span(img, kern) else f"{img} not in kernel",
                uses | {"howe.Xs"})
    for parity in ("even", "odd", "both"):
        s0 = GradedSector(0, 4, parity)
        r0 = kernel_symbolic(s0, fib)
        full = r0.generic_dim == len(sector_basis(s0)) and not r0.critical_lambdas
        rep.add(f"degree-0 sector ({parity}) fully singular", "0" if full else f"generic dim {r0.generic_dim}", uses)
    fam = build_pi_hat(crit, fib)
    ops = (fam["e1"], fam["e2"])
    bad = [str(k) for k in kern if any(apply(op, k) for op in ops)]
    rep.add("kernel elements annihilated at 3/4", ", ".join(bad) if bad else "0", uses)
    return rep


# --- driver ---------------------------------------------------------------------

SUITES = {
    "symmetry": lambda cat, **kw: check_symmetry_tables(cat),
    "howe": lambda cat, **kw: check_howe(cat),
    "homomorphism": lambda cat, **kw: check_homomorphism(cat.lie_map()),
    "pi_families": lambda cat, **kw: check_pi_families(cat),
    "rho": lambda cat, **kw: check_rho(cat),
    "fiber": lambda cat, **kw: check_fibers(cat),
    "singular": lambda cat, **kw: _merge("singular", [
        check_singular(PolyElement.monomial(FIBER, (k,)), cat, label=str(PolyElement.monomial(FIBER, (k,))))
        for k in range(3)]),
    "powers": lambda cat, **kw: _merge("powers", [
        check_nonsingular_powers(k, PolyElement.monomial(FIBER, (e,)), cat) for k in (2, 3) for e in (0, 1)]),
    "intertwining": lambda cat, **kw: check_intertwining(cat),
    "engine": lambda cat, engine_cases=50, **kw: check_engine_properties(engine_cases),
    "solver": lambda cat, **kw: check_solver(cat),
}


def _merge(suite, reports) -> VerificationReport:
    out = VerificationReport(suite)
    for r in reports:
        for c in r.checks:
            c.suite = suite
            out.checks.append(c)
        out.notes.extend(r.notes)
    return out


def run_suite(name, cat=None, **kw) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rep = SUITES[name](_cat(cat), **kw)
    rep.suite = name
    for c in rep.checks:
        c.suite = name
    return rep


def run_all(cat=None, engine_cases=50, timings=None) -> VerificationReport:
    """Every suite in a fixed order; check names are prefixed with their suite."""
    cat = _cat(cat)
    out = VerificationReport("all")
    for name in SUITES:
        t0 = time.perf_counter()
        rep = run_suite(name, cat, engine_cases=engine_cases)
        if timings is not None:
            timings[name] = time.perf_counter() - t0
        for c in rep.checks:
            out.checks.append(IdentityCheck(f"{name}: {c.name}", c.residual, c.uses, name))
        out.notes.extend(f"{name}: {n}" for n in rep.notes)
    return out
