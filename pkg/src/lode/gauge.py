"""Companion-system gauge equivalence at jet level, and the rank-two degenerate counterexample."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from .classify import Kind, _phi_scalings, classify, solve_delta_law
from .errors import LodeError
from .jets import INF, Jet, coerce, iszero, solve_by_degree, to_complex
from .lde import Lde, PointTransformation

Matrix = list  # 2x2 nested list of jets


def companion_matrix(e: Lde) -> Matrix:
    ex = e.exact
    return [[Jet.zero(INF, ex), Jet.const(coerce(1, ex), INF, ex)], [e.q, e.p]]


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def gauge_residual(A1: Matrix, A2: Matrix, T: Matrix, phi: Jet, nu: int) -> Matrix:
    """T A1 - psi (A2 o phi) T + delta T; zero when v2(phi) = T v1 maps solutions."""
    psi = PointTransformation(phi, Jet.const(1, INF, phi.exact)).psi(nu)
    B = [[A2[i][j].compose(phi) * psi for j in range(2)] for i in range(2)]
    TA, BT = _matmul(T, A1), _matmul(B, T)
    return [[TA[i][j] - BT[i][j] + T[i][j].delta(nu) for j in range(2)] for i in range(2)]


@dataclass(frozen=True)
class GaugeResult:
    phi: Jet
    T: Matrix

    def det0(self):
        T = self.T
        return T[0][0][0] * T[1][1][0] - T[0][1][0] * T[1][0][0]


def _system_phis(e1: Lde, e2: Lde, N: int) -> list:
    """Candidate coordinate changes, fixed modulo x^(nu+1) by the leading formal data."""
    nu, ex = e1.nu, e1.exact
    X = Jet.x(INF, ex)
    if nu == 0:
        return [X]
    try:
        kind = classify(e1, None if ex else 1e-10).kind
    except LodeError:
        return [X]
    if kind not in (Kind.IRREGULAR_NONRES, Kind.IRREGULAR_RES_NONDEG):
        return [X]
    resonant = kind == Kind.IRREGULAR_RES_NONDEG
    out = []
    try:
        scalings = _phi_scalings(e1, e2, resonant)
    except (LodeError, ZeroDivisionError):
        return []
    for c in scalings:
        try:
            phi = solve_delta_law(e1.delta.truncate(2 * nu), e2.delta.truncate(2 * nu), nu, 2 * nu, c, resonant)
        except LodeError:
            continue
        # higher terms are absorbed by the gauge; keep the nu-jet, known far enough
        # for the residual up to degree N + nu
        out.append(Jet(phi.val, phi.to_list(1, nu), N + 2 * nu + 3, ex))
    return out


def _solve_gauge(A1: Matrix, A2: Matrix, phi: Jet, nu: int, N: int, exact: bool) -> Matrix | None:
    M = N + nu
    cols = []
    for i in range(2):
        for j in range(2):
            for n in range(M + 1):
                T = [[Jet.zero(INF, exact) for _ in range(2)] for _ in range(2)]
                T[i][j] = Jet.monomial(coerce(1, exact), n, INF, exact)
                R = gauge_residual(A1, A2, T, phi, nu)
                col = []
                for a in range(2):
                    for b in range(2):
                        r = R[a][b]
                        col.extend(r[d] if d <= r.order else None for d in range(M + 1))
                if any(v is None for v in col):
                    raise ValueError("coefficients known to too low an order for the gauge system")
                cols.append(col)
    rows = len(cols[0])
    ncols = len(cols)
    if exact:
        mat = DomainMatrix([[cols[c][r] for c in range(ncols)] for r in range(rows)], (rows, ncols), QQ_I)
        basis = [[QQ_I.from_sympy(v) for v in row] for row in mat.nullspace().to_Matrix().tolist()]
    else:
        A = np.array([[complex(cols[c][r]) for c in range(ncols)] for r in range(rows)])
        _, sv, vh = np.linalg.svd(A)
        rank = int(np.sum(sv > 1e-9 * max(1.0, sv[0])))
        basis = [list(v.conj()) for v in vh[rank:]]
    if not basis:
        return None

    def build(vec) -> Matrix:
        T = [[None, None], [None, None]]
        k = 0
        for i in range(2):
            for j in range(2):
                T[i][j] = Jet(0, list(vec[k : k + M + 1]), N, exact)
                k += M + 1
        return T

    def det0(T):
        return T[0][0][0] * T[1][1][0] - T[0][1][0] * T[1][0][0]

    # det T(0) is a quadratic form on the solution space: probe it on a few
    # deterministic combinations
    d = len(basis)
    probes = [[1 if a == b else 0 for a in range(d)] for b in range(d)]
    probes += [[(b + 1) ** a for a in range(d)] for b in range(1, 4)]
    for w in probes:
        vec = [sum(coerce(w[a], exact) * basis[a][k] for a in range(d)) for k in range(len(basis[0]))]
        T = build(vec)
        if not iszero(det0(T), None if exact else 1e-8):
            return T
    return None


def companion_gauge(e1: Lde, e2: Lde, N: int | None = None, phi: Jet | None = None) -> GaugeResult | None:
    """phi and T with v2(phi(x)) = T(x) v1(x) between the companion systems, to order N."""
    if e1.nu != e2.nu:
        return None
    nu = e1.nu
    exact = e1.exact and e2.exact
    if not exact:
        e1, e2 = e1.to_float(), e2.to_float()
    N = min(e1.order, e2.order) - nu if N is None else N
    A1, A2 = companion_matrix(e1), companion_matrix(e2)
    phis = [phi] if phi is not None else _system_phis(e1, e2, N)
    for ph in phis:
        T = _solve_gauge(A1, A2, ph, nu, N, exact)
        if T is not None:
            return GaugeResult(ph, T)
    return None


# ------------------------------------------------- pull back through L


def apply_log_derivative(e_tilde: Lde, phi: Jet, L: Jet) -> tuple[Jet, Jet]:
    """(p, q) obtained from e~ through x~ = phi and y~ = t y with delta log t = L.

    L may carry the low-order terms of a non-analytic t.
    """
    nu = e_tilde.nu
    psi = PointTransformation(phi, Jet.const(1, INF, phi.exact)).psi(nu)
    A = psi * e_tilde.p.compose(phi) + psi.delta(nu) / psi
    p = A - L * 2
    q = psi * psi * e_tilde.q.compose(phi) + A * L - L.delta(nu) - L * L
    return p, q


# --------------------------------------------- degenerate rank-two example


@dataclass(frozen=True)
class Example1Obstruction:
    phi: Jet
    log_t: Jet
    L: Jet
    negative_part: dict
    expected: complex
    pullback_ok: bool

    @property
    def obstructed(self) -> bool:
        return any(abs(v) > 1e-12 for v in self.negative_part.values())


def example1_obstruction(c, c_tilde, N: int = 8) -> Example1Obstruction:
    """Formal equivalence attempt between the rank-two examples with parameters c and c~.

    Stokes data force the ratio of solutions to scale by k = c / c~.  The
    coordinate change is then fixed degree by degree and log t acquires the
    Laurent term log(k) / x.
    """
    from .stokes import example1_equation

    c, ct = complex(to_complex(c)), complex(to_complex(c_tilde))
    k = c / ct
    M = N + 3
    X = Jet.x(M + 2, False)
    one = Jet.const(1.0, INF, False)

    def F(g: Jet) -> Jet:
        # log of psi (phi/x) (1 + c~ phi) e^{-1/phi} / (k x (1 + c x) e^{-1/x})
        phi = X * (one + g)
        psi = PointTransformation(phi, one).psi(2)
        return (
            psi.log()
            + (one + g).log()
            + (one + phi * ct).log()
            + g.shift(-1) / (one + g)
            - cmath.log(k)
            - (one + X * c).log()
        )

    g = solve_by_degree(F, Jet.zero(M, False), range(1, M + 1), shift=-1, tol=1e-12)
    phi = (X * (one + g)).truncate(N + 1)
    # y1 = exp(-1/(2 x^2)) on both sides: log t = 1/(2 x^2) - 1/(2 phi^2)
    u = (one + g).truncate(N)
    log_t = ((one - u.power(-2)) * 0.5).shift(-2)
    L = log_t.delta(2)
    negative = {j: log_t[j] for j in range(log_t.val, 0)} if log_t.coeffs and log_t.val < 0 else {}
    e1, e2 = example1_equation(c, N + 4), example1_equation(ct, N + 4)
    p, q = apply_log_derivative(e2, phi, L)
    upto = min(N - 1, p.order, q.order)
    ok = p.equal_to(e1.p, upto, 1e-9) and q.equal_to(e1.q, upto, 1e-9)
    return Example1Obstruction(phi, log_t, L, negative, cmath.log(k), ok)
