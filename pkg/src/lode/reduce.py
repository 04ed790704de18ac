"""Reducibility: Riccati solutions, the second symmetric power and operator factorization."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from .classify import Kind, classify
from .errors import ResidualTooLarge
from .jets import INF, Jet, coerce, iszero, scalar_sqrt, solve_by_degree
from .lde import Lde

FORMAL = "FORMAL"
ANALYTIC = "ANALYTIC"


@dataclass(frozen=True)
class RiccatiSolution:
    r: Jet
    sign: int


@dataclass(frozen=True)
class Factorization:
    alpha1: Jet
    alpha2: Jet


def riccati_residual(e: Lde, r: Jet) -> Jet:
    """2 delta r - r^2 + Delta."""
    return r.delta(e.nu) * 2 - r * r + e.delta


def riccati_formal(e: Lde, sign: int = 1, N: int | None = None) -> RiccatiSolution:
    """Formal solution of 2 delta r = r^2 - Delta with r(0) = sign sqrt(Delta(0))."""
    N = e.order if N is None else N
    ex = e.exact
    d = e.delta.truncate(N)
    r0 = scalar_sqrt(d[0]) if not iszero(d[0]) else coerce(0, ex)
    if sign < 0:
        r0 = -r0
    g = Jet.const(r0, N, ex)

    def F(r: Jet) -> Jet:
        return r * r - d - r.delta(e.nu) * 2

    g = solve_by_degree(F, g, range(1, N + 1), tol=None if ex else 1e-12)
    return RiccatiSolution(g, 1 if sign >= 0 else -1)


def factor(e: Lde, sol: RiccatiSolution, tol: float = 1e-8) -> Factorization:
    r = sol.r
    if not e.exact:
        res = riccati_residual(e, r)
        upto = min(res.order, e.order)
        if not all(iszero(res[j], tol) for j in range(0, upto + 1)):
            raise ResidualTooLarge("Riccati residual exceeds tolerance")
    return Factorization((e.p - r) / 2, (e.p + r) / 2)


def expand(f: Factorization, nu: int) -> Lde:
    return Lde.from_factored(nu, f.alpha1, f.alpha2)


# ------------------------------------------------------- symmetric power


def symmetric_power_operator(e: Lde, h: Jet) -> Jet:
    """delta^3 h - Delta delta h - (1/2)(delta Delta) h."""
    nu = e.nu
    d = e.delta
    dh = h.delta(nu)
    return dh.delta(nu).delta(nu) - d * dh - d.delta(nu) * h / 2


def factorized_operator(e: Lde, r: Jet, h: Jet) -> Jet:
    """(delta - r) delta (delta + r) h."""
    nu = e.nu
    u = h.delta(nu) + r * h
    w = u.delta(nu)
    return w.delta(nu) - r * w


def _valuation_shift(e: Lde) -> int:
    nu = e.nu
    if nu == 0:
        return 0
    d = e.delta
    v = d.val if d.coeffs else 2 * nu
    return nu + min(v, 2 * nu)


def symmetric_power_kernel(e: Lde, N: int | None = None, tol: float = 1e-9) -> list[Jet]:
    """Basis of the formal power-series solutions h_0 + ... + h_N x^N."""
    s = _valuation_shift(e)
    N = e.order - s if N is None else N
    ex = e.exact
    rows = N + s + 1
    cols = []
    for n in range(N + 1):
        xn = Jet.monomial(coerce(1, ex), n, INF, ex)
        img = symmetric_power_operator(e, xn)
        cols.append([img[m] if m <= img.order else None for m in range(rows)])
    if any(c is None for col in cols for c in col):
        raise ValueError("equation known to too low an order for this kernel size")
    if ex:
        M = DomainMatrix([[cols[n][m] for n in range(N + 1)] for m in range(rows)], (rows, N + 1), QQ_I)
        ns = M.nullspace()
        basis = []
        for row in ns.to_Matrix().tolist():
            coeffs = [QQ_I.from_sympy(v) for v in row]
            basis.append(coeffs)
    else:
        A = np.array([[complex(cols[n][m]) for n in range(N + 1)] for m in range(rows)])
        _, sv, vh = np.linalg.svd(A)
        rank = int(np.sum(sv > tol * max(1.0, sv[0] if sv.size else 1.0)))
        basis = [list(v.conj()) for v in vh[rank:]]
    out = []
    for coeffs in basis:
        j = Jet(0, coeffs, N, ex)
        out.append(j / j.leading())
    return _echelon(out)


def _echelon(basis: list[Jet]) -> list[Jet]:
    """Reduce a basis so that leading exponents are distinct and leading coefficients are 1."""
    out: list[Jet] = []
    for h in sorted(basis, key=lambda j: j.val):
        for g in out:
            if h.coeffs and not iszero(h[g.val]):
                h = h - g * h[g.val]
        if h.coeffs:
            out.append(h / h.leading())
    out.sort(key=lambda j: j.val)
    final = []
    for i, h in enumerate(out):
        for g in out[i + 1:]:
            if not iszero(h[g.val]):
                h = h - g * h[g.val]
        final.append(h)
    return final


# ---------------------------------------------------------------- report


@dataclass
class ReducibilityReport:
    scope: str
    riccati: dict
    kernel_dimension: int
    reducible: bool | None = None
    normal_form_equivalent: bool | None = None
    consistent: bool = True
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        from .jets import scalar_to_json

        return {
            "scope": self.scope,
            "riccati": {
                k: [scalar_to_json(c) for c in v.to_list(0, v.order)] if v is not None else None
                for k, v in self.riccati.items()
            },
            "kernel_dimension": self.kernel_dimension,
            "reducible": self.reducible,
            "normal_form_equivalent": self.normal_form_equivalent,
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


def stokes_reducibility(multipliers: list, tol: float = 1e-10) -> tuple[bool, bool]:
    """(reducible, normal_form_equivalent) from a full period of Stokes multipliers."""
    zero = [iszero(s, tol) for s in multipliers]
    odd = all(z for i, z in enumerate(zero) if i % 2)
    even = all(z for i, z in enumerate(zero) if not i % 2)
    return odd or even, all(zero)


def reducibility_report(e: Lde, stokes=None, N: int | None = None) -> ReducibilityReport:
    cls = classify(e, None if e.exact else 1e-10)
    N = min(e.order - e.nu, 12) if N is None else N
    ric = {}
    notes = []
    for sign, key in ((1, "plus"), (-1, "minus")):
        try:
            ric[key] = riccati_formal(e, sign, N).r
        except Exception as exc:  # resonance or inexact root
            ric[key] = None
            notes.append(f"riccati {key}: {type(exc).__name__}: {exc}")
    try:
        dim = len(symmetric_power_kernel(e, N - _valuation_shift(e)))
    except Exception as exc:
        dim = -1
        notes.append(f"kernel: {type(exc).__name__}: {exc}")
    if cls.kind == Kind.IRREGULAR_RES_NONDEG:
        notes.append("half-integer branches are not part of the integer-power kernel")
    report = ReducibilityReport(FORMAL, ric, dim, notes=notes)
    if stokes is not None:
        mult = list(stokes.multipliers) if hasattr(stokes, "multipliers") else list(stokes)
        red, nfe = stokes_reducibility(mult)
        report.scope = ANALYTIC
        report.reducible = red
        report.normal_form_equivalent = nfe
        if cls.kind == Kind.IRREGULAR_NONRES:
            report.consistent = (dim >= 1 or not nfe) and (ric["plus"] is not None or not red)
    return report
