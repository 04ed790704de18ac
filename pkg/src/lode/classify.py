"""Singularity types, formal invariants, formal normal forms and formal equivalence."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DegenerateInput,
    ExactnessRequired,
    OrderExhausted,
    ResidualTooLarge,
    ResonantObstruction,
)
from .jets import (
    INF,
    Jet,
    coerce,
    is_integer,
    iszero,
    parts,
    scalar_roots,
    scalar_sqrt,
    solve_by_degree,
    to_complex,
    unit_root,
)
from .lde import Lde, PointTransformation, apply_transformation, delta_law_rhs


class Kind(str, Enum):
    NON_SINGULAR = "NON_SINGULAR"
    REGULAR_STRONG_NONRES = "REGULAR_STRONG_NONRES"
    REGULAR_RESONANT = "REGULAR_RESONANT"
    IRREGULAR_NONRES = "IRREGULAR_NONRES"
    IRREGULAR_RES_NONDEG = "IRREGULAR_RES_NONDEG"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class SingularityClass:
    kind: Kind
    nu: int
    k: int | None = None

    @property
    def regular(self) -> bool:
        return self.kind in (Kind.REGULAR_STRONG_NONRES, Kind.REGULAR_RESONANT)

    def __str__(self) -> str:
        return f"{self.kind.value}(k={self.k})" if self.k is not None else self.kind.value


def working_order(nu: int) -> int:
    return max(2 * nu + 4, 8)


def _key(c) -> tuple:
    return tuple(float(v) for v in parts(c))


def _order_pair(a, b):
    """Order so that Re a >= Re b, ties broken by Im."""
    return (a, b) if _key(a) >= _key(b) else (b, a)


def regular_exponents(e: Lde):
    """Roots of lambda^2 - p(0) lambda - q(0), ordered by real then imaginary part."""
    p0, q0 = e.p[0], e.q[0]
    s = scalar_sqrt(p0 * p0 + 4 * q0) if not iszero(p0 * p0 + 4 * q0) else p0 * 0
    return _order_pair((p0 + s) / 2, (p0 - s) / 2)


def classify(e: Lde, tol: float | None = None) -> SingularityClass:
    if e.nonsingular:
        return SingularityClass(Kind.NON_SINGULAR, e.nu)
    d = e.delta
    if e.nu == 0:
        d0 = d[0]
        if iszero(d0, tol):
            return SingularityClass(Kind.REGULAR_RESONANT, 0, 0)
        if e.exact:
            try:
                s = scalar_sqrt(d0)
            except ExactnessRequired:
                return SingularityClass(Kind.REGULAR_STRONG_NONRES, 0)
            k = is_integer(s)
        else:
            if tol is None:
                raise ExactnessRequired("resonance test in float mode needs a tolerance")
            k = is_integer(complex(d0) ** 0.5, tol)
        if k is None:
            return SingularityClass(Kind.REGULAR_STRONG_NONRES, 0)
        return SingularityClass(Kind.REGULAR_RESONANT, 0, abs(k))
    if not iszero(d[0], tol):
        return SingularityClass(Kind.IRREGULAR_NONRES, e.nu)
    if iszero(e.p[0], tol) and not iszero(d[1], tol):
        return SingularityClass(Kind.IRREGULAR_RES_NONDEG, e.nu)
    return SingularityClass(Kind.DEGENERATE, e.nu)


def _require_nondegenerate(e: Lde, cls: SingularityClass | None = None) -> SingularityClass:
    cls = cls or classify(e, None if e.exact else 1e-10)
    if cls.kind == Kind.DEGENERATE:
        raise DegenerateInput("degenerate irregular singularity (Delta(0) = 0 and Delta'(0) = 0 or p(0) != 0)")
    if cls.kind == Kind.NON_SINGULAR:
        raise DegenerateInput("the origin is not a singular point")
    return cls


# ------------------------------------------------------------ Delta law


def solve_delta_law(
    delta1: Jet,
    delta2: Jet,
    nu: int,
    N: int,
    c,
    resonant: bool = False,
    t_param=0,
) -> Jet:
    """Find phi = c x (1 + ...) with delta1 = psi^2 delta2(phi) + Schwarzian terms.

    The coefficient of x^(j+1) in phi/c is fixed by the coefficient of x^j
    (x^(j+1) in the resonant case) of the law.  In the non-resonant irregular
    case the coefficient at j = nu is free and set to ``t_param``.
    """
    ex = delta1.exact
    c = coerce(c, ex) if ex or not isinstance(c, (float, complex)) else complex(c)
    X = Jet.x(INF, ex)
    shift = 1 if resonant else 0
    top = N - shift

    def F(g: Jet) -> Jet:
        phi = (X * g) * c
        T = PointTransformation(phi, Jet.const(1, INF, ex))
        return delta_law_rhs(delta2, T, nu) - delta1

    g = Jet.const(1, top, ex)
    free = {} if resonant or nu == 0 else {nu: t_param}
    g = solve_by_degree(F, g, range(1, top + 1), shift=shift, free=free, tol=None if ex else 1e-10)
    res = F(g)
    tol = None if ex else 1e-8
    if not all(iszero(res[d], tol) for d in range(0, N + 1)):
        raise ResonantObstruction("Delta law has no solution with this leading coefficient")
    return (X * g) * c


def _phi_scalings(e1: Lde, e2: Lde, resonant: bool) -> list:
    nu = e1.nu
    if nu == 0:
        return [coerce(1, e1.exact)]
    if resonant:
        roots = scalar_roots(e2.delta[1] / e1.delta[1], 2 * nu - 1, e1.exact)
    else:
        roots = scalar_roots(e2.delta[0] / e1.delta[0], 2 * nu, e1.exact)
    return sorted(roots, key=lambda c: (abs(to_complex(c) - 1), _key(c)))


def normal_delta(nu: int, mu, resonant: bool, exact: bool) -> Jet:
    if resonant:
        return Jet.x(INF, exact)
    one = coerce(1, exact)
    if nu == 0:
        return Jet.const(mu * mu, INF, exact)
    r = Jet.const(one, INF, exact) + Jet.monomial(mu, nu, INF, exact)
    return r * r


@dataclass(frozen=True)
class QDNormalization:
    phi: Jet
    normalized: Lde
    mu: object
    c: object

    def __iter__(self):
        return iter((self.phi, self.normalized))


def _residue_mu(e: Lde, c):
    """Coefficient of x^nu of sqrt(Delta) on the branch sqrt(Delta)(0) = c^(-nu)."""
    nu = e.nu
    d = e.delta.truncate(nu)
    s = d.sqrt()
    if not iszero(s[0] - c ** (-nu) if e.exact else s[0] - complex(c) ** (-nu), None if e.exact else 1e-8):
        s = -s
    return s[nu]


def normalize_quadratic_differential(e: Lde, N: int | None = None, c=None, t_param=0) -> QDNormalization:
    cls = _require_nondegenerate(e)
    nu = e.nu
    N = e.order if N is None else N
    resonant = cls.kind == Kind.IRREGULAR_RES_NONDEG
    if nu == 0:
        d0 = e.delta[0]
        if iszero(d0):
            raise ResonantObstruction("Delta(0) = 0: no constant normal form")
        mu = scalar_sqrt(d0)
        c = coerce(1, e.exact)
    elif resonant:
        mu = None
        if c is None:
            roots = scalar_roots(1 / e.delta[1], 2 * nu - 1, e.exact)
            if not roots:
                raise ExactnessRequired("no exact scaling normalizes Delta'(0)")
            c = min(roots, key=_key) if not e.exact else roots[0]
    else:
        if c is None:
            roots = scalar_roots(1 / e.delta[0], 2 * nu, e.exact)
            if not roots:
                raise ExactnessRequired("no exact scaling normalizes Delta(0)")
            c = roots[0]
        mu = _residue_mu(e, c)
    target = normal_delta(nu, mu, resonant, e.exact)
    phi = solve_delta_law(e.delta.truncate(N), target, nu, N, c, resonant, t_param)
    T = PointTransformation(phi, Jet.const(1, INF, e.exact))
    normalized = apply_transformation(e, T.inverse())
    return QDNormalization(phi, normalized.truncate(min(N, normalized.order)), mu, c)


# --------------------------------------------------------- formal invariants


@dataclass(frozen=True)
class FormalInvariant:
    """Canonical formal invariant.

    ``variant`` is REGULAR (scalars ``lambda1``, ``lambda2``), NONRES
    (nu-jets ``lambda1``, ``lambda2`` with lambda2 - lambda1 = 1 + mu x^nu)
    or RES_NONDEG (nu-jet ``P`` with Delta normalized to x).
    """

    variant: str
    nu: int
    lambda1: object = None
    lambda2: object = None
    mu: object = None
    P: Jet | None = None
    G: tuple = ()
    group_order: int = 1
    own: tuple | None = field(default=None, compare=False)
    extra: dict = field(default_factory=dict, compare=False)

    def same_as(self, other: FormalInvariant, tol: float | None = None) -> bool:
        if (self.variant, self.nu) != (other.variant, other.nu):
            return False
        if self.variant == "REGULAR":
            return iszero(self.lambda1 - other.lambda1, tol) and iszero(self.lambda2 - other.lambda2, tol)
        if self.variant == "NONRES" and not iszero(self.mu - other.mu, tol):
            return False
        return self.P.equal_to(other.P, self.nu, tol)


def _rotate_coeffs(P: list, nu: int, l: int, n: int, exact: bool):
    w = unit_root(l, n, exact)
    if w is None:
        return None
    winv = 1 / w
    out = []
    for j, a in enumerate(P):
        e = j - nu
        out.append(a * (w**e if e >= 0 else winv ** (-e)))
    return out


def _stabilizer(P: list, nu: int, n: int, mu=None, flip_mu: bool = False) -> tuple:
    G = []
    for l in range(n):
        ok = all(iszero(a) or (l * (j - nu)) % n == 0 for j, a in enumerate(P))
        if flip_mu and l % 2 and mu is not None and not iszero(mu):
            ok = False
        if ok:
            G.append(l)
    return tuple(G)


def _canonical_orbit(P: list, mu, nu: int, n: int, exact: bool, flip_mu: bool):
    best = None
    for l in range(n):
        Q = _rotate_coeffs(P, nu, l, n, exact)
        if Q is None:
            continue
        m = mu
        if mu is not None and flip_mu and l % 2:
            m = -mu
        # prefer the largest mu, then the smallest P coefficients
        key = ([] if m is None else [tuple(-v for v in _key(m))]) + [_key(a) for a in Q]
        if not exact:
            key = [tuple(round(v, 9) for v in k) for k in key]
        if best is None or key < best[0]:
            best = (key, Q, m, l)
    return best[1], best[2], best[3]


def formal_invariants(e: Lde, N: int | None = None) -> FormalInvariant:
    cls = _require_nondegenerate(e)
    nu = e.nu
    ex = e.exact
    if nu == 0:
        l1, l2 = regular_exponents(e)
        return FormalInvariant("REGULAR", 0, l1, l2, mu=l1 - l2)
    resonant = cls.kind == Kind.IRREGULAR_RES_NONDEG
    work = 2 * nu + 2 if N is None else N
    qd = normalize_quadratic_differential(e, work)
    P = qd.normalized.p.to_list(0, nu)
    if resonant:
        n = 2 * nu - 1
        Pc, _, l = _canonical_orbit(P, None, nu, n, ex, False)
        Pj = Jet.from_list(Pc, nu, exact=ex)
        return FormalInvariant("RES_NONDEG", nu, P=Pj, G=_stabilizer(Pc, nu, n), group_order=n, extra={"rotation": l})
    n = 2 * nu
    Pc, mu, l = _canonical_orbit(P, qd.mu, nu, n, ex, True)
    Pj = Jet.from_list(Pc, nu, exact=ex)
    one = coerce(1, ex)
    r = Jet.const(one, nu, ex) + Jet.monomial(mu, nu, nu, ex)
    return FormalInvariant(
        "NONRES",
        nu,
        (Pj - r) / 2,
        (Pj + r) / 2,
        mu=mu,
        P=Pj,
        G=_stabilizer(Pc, nu, n, mu, True),
        group_order=n,
        own=characteristic_jets(e),
        extra={"rotation": l},
    )


def characteristic_jets(e: Lde):
    """nu-jets of the roots of lambda^2 - p lambda - q, with lambda2 - lambda1 = sqrt(Delta).

    Returns None when sqrt(Delta(0)) is not exactly representable.
    """
    nu = e.nu
    try:
        r = e.delta.truncate(nu).sqrt()
    except ExactnessRequired:
        return None
    P = e.p.truncate(nu)
    return ((P - r) / 2, (P + r) / 2)


def invariant_orbit(inv: FormalInvariant) -> list:
    """Representable members (lambda1, lambda2, mu) of the rotation orbit of a NONRES invariant."""
    nu, n = inv.nu, inv.group_order
    ex = inv.P.exact
    out = []
    P = inv.P.to_list(0, nu)
    for l in range(n):
        Q = _rotate_coeffs(P, nu, l, n, ex)
        if Q is None:
            continue
        mu = -inv.mu if l % 2 else inv.mu
        Pj = Jet.from_list(Q, nu, exact=ex)
        r = Jet.const(coerce(1, ex), nu, ex) + Jet.monomial(mu, nu, nu, ex)
        out.append(((Pj - r) / 2, (Pj + r) / 2, mu))
    return out


def formal_normal_form(
    inv: FormalInvariant, nu: int | None = None, N: int | None = None, canonical: bool = False
) -> Lde:
    """Formal normal form built from the lambda-jets of ``inv``.

    For NONRES invariants the equation's own characteristic jets are used when
    known (so that the equivalence has phi = x + O(x^(nu+1))); pass
    ``canonical=True`` for the canonical representative.
    """
    nu = inv.nu if nu is None else nu
    N = working_order(nu) if N is None else N
    if inv.variant == "REGULAR":
        ex = not isinstance(inv.lambda1, complex)
        l1 = Jet.const(inv.lambda1, N, ex)
        l2 = Jet.const(inv.lambda2, N, ex)
        return Lde.from_factored(0, l1, l2)
    if inv.variant == "RES_NONDEG":
        P = inv.P.truncate(nu)
        P = Jet(P.val, P.coeffs, N, P.exact) if P.coeffs else Jet.zero(N, P.exact)
        ex = P.exact
        X = Jet.x(N, ex)
        x2n = Jet.monomial(coerce(1, ex), 2 * nu, N, ex)
        const = coerce(nu, ex) - coerce(1, ex) / 4
        q = (X - P * P + P.delta(nu) * 2 - x2n * const) / 4
        return Lde(nu, P, q.truncate(N))
    a, b = inv.own if inv.own is not None and not canonical else (inv.lambda1, inv.lambda2)
    l1 = Jet(a.val, a.coeffs, N, a.exact) if a.coeffs else Jet.zero(N, a.exact)
    l2 = Jet(b.val, b.coeffs, N, b.exact) if b.coeffs else Jet.zero(N, b.exact)
    r = l2 - l1
    dlog = r.delta(nu) / r
    s = l1 + l2
    p = s + dlog
    q = -(l1 * l2) + s.delta(nu) / 2 - s * dlog / 2
    return Lde(nu, p.truncate(N), q.truncate(N))


def normal_form_delta(inv: FormalInvariant, N: int) -> Jet:
    """Closed expression of Delta of the formal normal form."""
    nu = inv.nu
    if inv.variant == "RES_NONDEG":
        ex = inv.P.exact
        return Jet.x(N, ex) - Jet.monomial(coerce(nu, ex) - coerce(1, ex) / 4, 2 * nu, N, ex)
    l1 = Jet(inv.lambda1.val, inv.lambda1.coeffs, N + nu, inv.lambda1.exact)
    l2 = Jet(inv.lambda2.val, inv.lambda2.coeffs, N + nu, inv.lambda2.exact)
    r = l2 - l1
    L = r.log()
    dL = L.delta(nu)
    return (r * r - dL.delta(nu) * 2 + dL * dL).truncate(N)


# ---------------------------------------------------------- equivalence


def _t_from_p(e1: Lde, e2: Lde, phi: Jet, N: int, meromorphic: bool, tol):
    """Solve the p-law for t given phi; returns (t, m) or None."""
    nu = e1.nu
    T0 = PointTransformation(phi, Jet.const(1, INF, phi.exact))
    psi = T0.psi(nu)
    A = psi * e2.p.compose(phi) + psi.delta(nu) / psi
    L = (A - e1.p) / 2
    m = 0
    for j in range(0, nu):
        if not iszero(L[j], tol):
            return None
    if not iszero(L[nu], tol):
        if not meromorphic:
            return None
        mm = is_integer(L[nu], tol if tol is not None else None) if L.exact else is_integer(L[nu], tol or 1e-8)
        if mm is None:
            return None
        m = mm
        L = L - Jet.monomial(m, nu, INF, L.exact)
    logt = L.delta_inverse(nu)
    t = logt.exp()
    return t, m


def formal_equivalence(
    e1: Lde,
    e2: Lde,
    N: int | None = None,
    t_param=0,
    meromorphic: bool = False,
) -> PointTransformation | None:
    """Formal transformation T with e1 = apply_transformation(e2, T), or None."""
    c1, c2 = _require_nondegenerate(e1), _require_nondegenerate(e2)
    if e1.nu != e2.nu or c1.kind != c2.kind:
        return None
    nu = e1.nu
    if e1.exact != e2.exact:
        e1, e2 = e1.to_float(), e2.to_float()
    N = min(e1.order, e2.order) - nu if N is None else N
    tol = None if e1.exact else 1e-8
    if nu == 0:
        from .regular import regular_transformation

        return regular_transformation(e1, e2, N, meromorphic)
    resonant = c1.kind == Kind.IRREGULAR_RES_NONDEG
    for c in _phi_scalings(e1, e2, resonant):
        try:
            phi = solve_delta_law(e1.delta.truncate(N + nu), e2.delta, nu, N + nu, c, resonant, t_param)
        except ResonantObstruction:
            continue
        got = _t_from_p(e1, e2, phi, N, meromorphic, tol)
        if got is None:
            continue
        t, m = got
        T = PointTransformation(phi.truncate(N + 1), t.truncate(N), m)
        check = apply_transformation(e2, T)
        upto = min(N, check.order)
        if not check.equal_to(e1, upto, tol):
            raise ResidualTooLarge("formal transformation failed verification")
        return T
    return None


def meromorphic_invariant_match(e1: Lde, e2: Lde) -> int | None:
    """Integer m with e2 formally equivalent to e1 transformed by x^m, else None."""
    c1, c2 = _require_nondegenerate(e1), _require_nondegenerate(e2)
    if e1.nu != e2.nu:
        return None
    tol = None if e1.exact and e2.exact else 1e-8
    nu = e1.nu
    if nu == 0:
        if not iszero(e1.delta[0] - e2.delta[0], tol):
            return None
        m = is_integer((e1.p[0] - e2.p[0]) / 2, tol)
        if m is None:
            return None
        from .regular import frobenius

        d1, d2 = frobenius(e1, 2), frobenius(e2, 2)
        return m if d1.epsilon == d2.epsilon else None
    if c1.kind != c2.kind:
        return None
    i1, i2 = formal_invariants(e1), formal_invariants(e2)
    if i1.variant == "NONRES" and not iszero(i1.mu - i2.mu, tol):
        return None
    if not i1.P.truncate(nu - 1).equal_to(i2.P.truncate(nu - 1), nu - 1, tol):
        return None
    m = is_integer((i1.P[nu] - i2.P[nu]) / 2, tol)
    return m


def invariant_to_json(inv: FormalInvariant) -> dict:
    from .jets import scalar_to_json

    def jet(j):
        return [scalar_to_json(j[k]) for k in range(0, inv.nu + 1)]

    out = {"variant": inv.variant, "nu": inv.nu}
    if inv.variant == "REGULAR":
        out["lambda1"] = scalar_to_json(inv.lambda1)
        out["lambda2"] = scalar_to_json(inv.lambda2)
        return out
    out["P"] = jet(inv.P)
    if inv.variant == "NONRES":
        out["lambda1"] = jet(inv.lambda1)
        out["lambda2"] = jet(inv.lambda2)
        out["mu"] = scalar_to_json(inv.mu)
    out["G"] = list(inv.G)
    out["group_order"] = inv.group_order
    return out


__all__ = [
    "Kind",
    "SingularityClass",
    "FormalInvariant",
    "QDNormalization",
    "classify",
    "regular_exponents",
    "normalize_quadratic_differential",
    "solve_delta_law",
    "formal_invariants",
    "characteristic_jets",
    "invariant_orbit",
    "formal_normal_form",
    "normal_form_delta",
    "formal_equivalence",
    "meromorphic_invariant_match",
    "working_order",
    "to_complex",
    "OrderExhausted",
]
