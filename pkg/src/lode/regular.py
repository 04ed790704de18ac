"""Regular singular points: Frobenius solutions, monodromy type and the analytic normal forms."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .classify import Kind, classify, regular_exponents
from .errors import DegenerateInput, ExactnessRequired, OrderExhausted, ResidualTooLarge
from .jets import INF, Jet, coerce, is_integer, iszero, jet_newton_solve, scalar_roots, to_complex
from .lde import Lde, PointTransformation, apply_transformation


class MonodromyType(str, Enum):
    DIAGONALIZABLE = "DIAGONALIZABLE"
    NON_DIAGONALIZABLE = "NON_DIAGONALIZABLE"


@dataclass(frozen=True)
class RegularData:
    """Solution basis y1 = T11 x^l1, y2 = T12 x^l2 + epsilon T11 x^l1 log x."""

    lambda1: object
    lambda2: object
    k: int | None
    epsilon: int
    T11: Jet
    T12: Jet
    C: object = None  # obstruction at degree k, normalized by k


def _series(e: Lde, s, N: int, a0, rhs=None, tol=None, stop_at=None):
    """Coefficients u_n of L(x^s u) = x^s rhs, with u_0 = a0.

    Returns (u, obstruction) where the obstruction is the residual at the
    degree ``stop_at`` where the indicial polynomial vanishes (u at that
    degree is set to 0).
    """
    p, q = e.p, e.q
    zero = a0 * 0
    u = [a0]
    obstruction = None
    p0, q0 = p[0], q[0]
    for n in range(1, N + 1):
        sn = s + n
        acc = zero
        for i in range(1, n + 1):
            acc = acc + (p[i] * (sn - i) + q[i]) * u[n - i]
        if rhs is not None:
            acc = acc + rhs[n]
        f = sn * sn - p0 * sn - q0
        if n == stop_at:
            obstruction = acc
            u.append(zero)
            continue
        u.append(acc / f)
    return u, obstruction


def frobenius(e: Lde, N: int, tol: float | None = None) -> RegularData:
    ex = e.exact
    if not ex and tol is None:
        tol = 1e-10
    cls = classify(e, tol)
    if not cls.regular:
        raise DegenerateInput(f"frobenius needs a regular singular point, got {cls}")
    l1, l2 = regular_exponents(e)
    diff = l1 - l2
    k = is_integer(diff, tol)
    one = coerce(1, ex)
    u1, _ = _series(e, l1, N, one)
    T11 = Jet(0, u1, N, ex)
    if k is None or k < 0:
        u2, _ = _series(e, l2, N, one)
        return RegularData(l1, l2, None, 0, T11, Jet(0, u2, N, ex))
    if k > N:
        if k > e.order:
            raise OrderExhausted(f"resonance at degree {k} beyond the known order {e.order}")
        N = k
        T11 = Jet(0, _series(e, l1, N, one)[0], N, ex)
    if k > 0:
        u2, R = _series(e, l2, N, one, stop_at=k)
        if iszero(R, tol):
            return RegularData(l1, l2, k, 0, T11, Jet(0, u2, N, ex))
        C = R / k
        a0 = one / C
    else:
        C = None
        a0 = one * 0
    # log companion: L(x^l2 u) = p V - 2 delta V with V = T11 x^l1 = x^l2 x^k T11
    V = T11.shift(k)
    dV = Jet(V.val, [(l2 + V.val + i) * c for i, c in enumerate(V.coeffs)], V.order, ex) if V.coeffs else V
    rhs = e.p * V - dV * 2
    u2 = [a0]
    p, q = e.p, e.q
    for n in range(1, N + 1):
        sn = l2 + n
        acc = rhs[n]
        for i in range(1, n + 1):
            acc = acc + (p[i] * (sn - i) + q[i]) * u2[n - i]
        f = sn * sn - p[0] * sn - q[0]
        if n == k:
            if not iszero(acc, tol):
                raise ResidualTooLarge("log companion normalization failed")
            u2.append(one * 0)
            continue
        u2.append(acc / f)
    return RegularData(l1, l2, k, 1, T11, Jet(0, u2, N, ex), C)


def frobenius_residuals(e: Lde, d: RegularData, N: int) -> tuple[Jet, Jet]:
    """x^-l residuals of both basis elements (log parts separated), to order N."""
    ex = e.exact

    def op(u: Jet, s) -> Jet:
        # x^-s L(x^s u) with delta_0 x^s u = x^s (delta + s) u
        du = u.delta(0) + u * s
        ddu = du.delta(0) + du * s
        return ddu - e.p * du - e.q * u

    r1 = op(d.T11, d.lambda1)
    r2 = op(d.T12, d.lambda2)
    if d.epsilon:
        V = d.T11.shift(d.k)
        dV = V.delta(0) + V * d.lambda2
        r2 = r2 + dV * 2 - e.p * V
    return r1.truncate(N), r2.truncate(N)


def monodromy_type(d: RegularData) -> MonodromyType:
    return MonodromyType.NON_DIAGONALIZABLE if d.epsilon else MonodromyType.DIAGONALIZABLE


def normal_form_b1(l1, l2, k: int | None, epsilon: int, N: int, exact: bool = True) -> tuple[str, Lde]:
    a1 = Jet.const(l1, N, exact)
    if not epsilon:
        return "B1a", Lde.from_factored(0, a1, Jet.const(l2, N, exact))
    if k == 0:
        return "B1b", Lde.from_factored(0, a1, a1)
    xk = Jet.monomial(coerce(1, exact), k, N, exact)
    a2 = Jet.const(l2, N, exact) - xk * k / (1 - xk)
    return "B1c", Lde.from_factored(0, a1, a2)


def normal_form_b1d(l1, l2, k: int, N: int, exact: bool = True) -> Lde:
    xk = Jet.monomial(coerce(1, exact), k, N, exact)
    return Lde.from_factored(0, Jet.const(l1, N, exact), Jet.const(l2, N, exact) - xk * k)


@dataclass(frozen=True)
class Reduction:
    form: str
    T: PointTransformation
    normal_form: Lde
    data: RegularData

    def __iter__(self):
        return iter((self.form, self.T))


def reduce_to_normal_form(e: Lde, N: int, tol: float | None = None) -> Reduction:
    """Normal form nf and T with e = apply_transformation(nf, T) to order N."""
    N = min(N, e.order)
    d = frobenius(e, N, tol)
    ex = e.exact
    l1, l2 = d.lambda1, d.lambda2
    form, nf = normal_form_b1(l1, l2, d.k, d.epsilon, N + 2, ex)
    ratio = d.T12 / d.T11
    X = Jet.x(N + 1, ex)
    one = coerce(1, ex)
    c = one
    if form == "B1a":
        w = l2 - l1
        target = ratio.log()
        g = jet_newton_solve(lambda g: (1 + g).log() * w - target, 0, N, ex, tol)
        lam = l1
    elif form == "B1b":
        g = ratio.exp() - 1
        lam = l1
    else:
        k, C = d.k, d.C
        roots = scalar_roots(C / k, k, ex)
        if not roots:
            raise ExactnessRequired(f"no exact {k}-th root of {C}/{k} for the scaling")
        c = sorted(roots, key=lambda z: (abs(to_complex(z) - abs(to_complex(z))), -to_complex(z).imag))[0]
        xk = Jet.monomial(one, k, INF, ex)
        g = jet_newton_solve(
            lambda g: (1 + g).power(-k) / C + xk * (1 + g).log() - ratio, 0, N, ex, tol
        )
        lam = l1
    phi = X * (1 + g) * c
    t_proof = d.T11 * (1 + g).power(-lam) if not iszero(lam) else d.T11
    T = PointTransformation(phi.truncate(N + 1), (1 / t_proof).truncate(N))
    back = apply_transformation(nf, T)
    upto = min(N, back.order)
    if not back.equal_to(e, upto, tol if not ex else None):
        raise ResidualTooLarge(f"normal form round trip failed for {form}")
    return Reduction(form, T, nf.truncate(N), d)


def regular_equivalent(e1: Lde, e2: Lde, tol: float | None = None) -> bool:
    d1, d2 = frobenius(e1, 2, tol), frobenius(e2, 2, tol)
    same = iszero(d1.lambda1 - d2.lambda1, tol) and iszero(d1.lambda2 - d2.lambda2, tol)
    return same and d1.epsilon == d2.epsilon


def regular_transformation(e1: Lde, e2: Lde, N: int, meromorphic: bool = False) -> PointTransformation | None:
    """T with e1 = apply_transformation(e2, T), through the common normal form."""
    tol = None if e1.exact else 1e-8
    S = None
    if meromorphic:
        from .classify import meromorphic_invariant_match

        m = meromorphic_invariant_match(e1, e2)
        if m is None:
            return None
        if m:
            S = PointTransformation(Jet.x(INF, e2.exact), Jet.const(1, INF, e2.exact), -m)
            e2 = apply_transformation(e2, S)
    if not regular_equivalent(e1, e2, tol):
        return None
    r1 = reduce_to_normal_form(e1, N, tol)
    r2 = reduce_to_normal_form(e2, N, tol)
    T = r2.T.inverse().then(r1.T)
    T = PointTransformation(T.phi.truncate(N + 1), T.t.truncate(N), T.m)
    if S is not None:
        T = S.then(T)
    return T


def regular_kind(e: Lde) -> Kind:
    return classify(e).kind
