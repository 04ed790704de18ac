"""The equation model delta^2 y - p delta y - q y = 0 with delta = x^(nu+1) d/dx."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateRatio, EssentialSingularity, OrderExhausted
from .jets import INF, Jet, coerce, iszero


@dataclass(frozen=True)
class Lde:
    """Singular equation of Poincare rank ``nu`` given by its (p, q) jets."""

    nu: int
    p: Jet
    q: Jet
    nonsingular: bool = False
    _delta: Jet | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError("nu must be non-negative")
        if self.p.exact != self.q.exact:
            object.__setattr__(self, "p", self.p.to_float())
            object.__setattr__(self, "q", self.q.to_float())
        if (self.p.coeffs and self.p.val < 0) or (self.q.coeffs and self.q.val < 0):
            raise ValueError("p and q must be analytic at 0")
        if self.nu > 0 and not self.nonsingular and _lowerable(self.p, self.q):
            raise ValueError(f"nu = {self.nu} is not minimal for these coefficients")

    # constructors
    @classmethod
    def from_delta(cls, nu: int, p: Jet, q: Jet) -> Lde:
        return cls(nu, p, q)

    @classmethod
    def from_raw(cls, a1: Jet, a0: Jet) -> Lde:
        """Equation y'' + a1 y' + a0 y = 0 with Laurent coefficients."""
        m1 = -a1.val if a1.coeffs else -INF
        m0 = -a0.val if a0.coeffs else -INF
        nu = max(m1 - 1, -(-m0 // 2) - 1)
        nonsingular = nu < 0
        nu = max(nu, 0)
        one = a1._one()
        p = Jet.monomial((nu + 1) * one, nu, INF, a1.exact) - a1.shift(nu + 1)
        q = -a0.shift(2 * nu + 2)
        if p.coeffs and p.val < 0 or q.coeffs and q.val < 0:
            raise EssentialSingularity("coefficients not representable at this rank")
        return cls(nu, p, q, nonsingular=nonsingular)

    @classmethod
    def from_factored(cls, nu: int, alpha1: Jet, alpha2: Jet) -> Lde:
        """Expand (delta - alpha2)(delta - alpha1)."""
        p = alpha1 + alpha2
        q = -(alpha1 * alpha2) + alpha1.delta(nu)
        return cls(nu, p, q)

    # basic data
    @property
    def exact(self) -> bool:
        return self.p.exact

    @property
    def order(self) -> int:
        return min(self.p.order, self.q.order)

    @property
    def delta(self) -> Jet:
        if self._delta is None:
            object.__setattr__(self, "_delta", discriminant(self))
        return self._delta

    def truncate(self, n: int) -> Lde:
        return Lde(self.nu, self.p.truncate(n), self.q.truncate(n), self.nonsingular)

    def to_float(self) -> Lde:
        return Lde(self.nu, self.p.to_float(), self.q.to_float(), self.nonsingular)

    def equal_to(self, other: Lde, upto: int | None = None, tol: float | None = None) -> bool:
        if self.nu != other.nu:
            return False
        return self.p.equal_to(other.p, upto, tol) and self.q.equal_to(other.q, upto, tol)

    def apply_operator(self, y: Jet) -> Jet:
        """delta^2 y - p delta y - q y."""
        dy = y.delta(self.nu)
        return dy.delta(self.nu) - self.p * dy - self.q * y


def _lowerable(p: Jet, q: Jet) -> bool:
    return iszero(p[0]) and iszero(q[0]) and iszero(q[1])


def discriminant(e: Lde) -> Jet:
    """Delta = p^2 + 4q - 2 delta p."""
    return e.p * e.p + e.q * 4 - e.p.delta(e.nu) * 2


def companion(e: Lde) -> list[list[Jet]]:
    zero = Jet.zero(INF, e.exact)
    one = Jet.const(e.p._one(), INF, e.exact)
    return [[zero, one], [e.q, e.p]]


# --------------------------------------------------------- transformations


@dataclass(frozen=True)
class PointTransformation:
    """x~ = phi(x), y~ = t(x) x^m y."""

    phi: Jet
    t: Jet
    m: int = 0

    def __post_init__(self):
        if self.phi.val != 1:
            raise ValueError("phi must be x * (nonzero constant) + O(x^2)")
        if self.t.val != 0:
            raise ValueError("t must be a unit (t(0) != 0)")

    @classmethod
    def identity(cls, order: int, exact: bool = True) -> PointTransformation:
        return cls(Jet.x(INF, exact), Jet.const(1, INF, exact))

    @property
    def exact(self) -> bool:
        return self.phi.exact and self.t.exact

    def psi(self, nu: int) -> Jet:
        """delta phi / phi^(nu+1)."""
        return self.phi.derivative() / self.phi.shift(-1) ** (nu + 1)

    def then(self, other: PointTransformation) -> PointTransformation:
        """Transformation equal to applying ``self`` first and ``other`` second."""
        phi = self.phi.compose(other.phi)
        t = self.t.compose(other.phi) * other.t
        if self.m:
            t = t * other.phi.shift(-1) ** self.m
        return PointTransformation(phi, t, self.m + other.m)

    def inverse(self) -> PointTransformation:
        inv = self.phi.reverse()
        t = self.t.compose(inv)
        if self.m:
            t = t * inv.shift(-1) ** self.m
        return PointTransformation(inv, 1 / t, -self.m)

    def truncate(self, n: int) -> PointTransformation:
        return PointTransformation(self.phi.truncate(n + 1), self.t.truncate(n), self.m)

    def equal_to(self, other: PointTransformation, upto: int, tol: float | None = None) -> bool:
        return (
            self.m == other.m
            and self.phi.equal_to(other.phi, upto + 1, tol)
            and self.t.equal_to(other.t, upto, tol)
        )


def apply_transformation(e_tilde: Lde, T: PointTransformation, N: int | None = None) -> Lde:
    """Pull the tilde-equation back through T.

    Solutions correspond by y~(phi(x)) = t(x) x^m y(x).
    """
    nu = e_tilde.nu
    psi = T.psi(nu)
    dpsi = psi.delta(nu) / psi
    A = psi * e_tilde.p.compose(T.phi) + dpsi
    L = T.t.delta(nu) / T.t
    if T.m:
        L = L + Jet.monomial(T.m, nu, INF, L.exact)
    p = A - L * 2
    q = psi * psi * e_tilde.q.compose(T.phi) + A * L - L.delta(nu) - L * L
    if N is not None:
        if min(p.order, q.order) < N:
            raise OrderExhausted(f"transformed equation known only to order {min(p.order, q.order)} < {N}")
        p, q = p.truncate(N), q.truncate(N)
    return Lde(nu, p, q, e_tilde.nonsingular)


def pushforward(e: Lde, T: PointTransformation, N: int | None = None) -> Lde:
    """Inverse direction: the tilde-equation whose pull-back through T is ``e``."""
    return apply_transformation(e, T.inverse(), N)


def delta_law_rhs(delta_tilde: Jet, T: PointTransformation, nu: int) -> Jet:
    """psi^2 Delta~(phi) - 2 delta(delta psi/psi) + (delta psi/psi)^2."""
    psi = T.psi(nu)
    dpsi = psi.delta(nu) / psi
    return psi * psi * delta_tilde.compose(T.phi) - dpsi.delta(nu) * 2 + dpsi * dpsi


# -------------------------------------------------------------- Schwarzian


def schwarzian_from_ratio(R: Jet, nu: int) -> Jet:
    """delta R - R^2 / 2 for R = delta^2 f / delta f."""
    return R.delta(nu) - R * R / 2


def schwarzian(f: Jet, nu: int) -> Jet:
    df = f.delta(nu)
    if df.is_zero():
        raise DegenerateRatio("delta f vanishes to working order")
    return schwarzian_from_ratio(df.delta(nu) / df, nu)


@dataclass(frozen=True)
class Germ:
    """f = u x^a exp(int D delta^-1) + c log x.

    ``u`` is a unit jet; the log term is allowed only when ``a`` is an integer
    and ``D`` vanishes, in which case ``x^a u`` is a Laurent jet.
    """

    u: Jet
    a: object = 0
    D: Jet | None = None
    c: object = 0

    def ratio(self, nu: int) -> Jet:
        """delta^2 f / delta f."""
        ex = self.u.exact
        if not iszero(coerce(self.c, ex)):
            F = self.u.shift(int(self.a))
            df = F.delta(nu) + Jet.monomial(coerce(self.c, ex), nu, INF, ex)
            return df.delta(nu) / df
        W = self.u.delta(nu) / self.u
        if not iszero(coerce(self.a, ex)):
            W = W + Jet.monomial(coerce(self.a, ex), nu, INF, ex)
        if self.D is not None:
            W = W + self.D
        if W.is_zero():
            raise DegenerateRatio("delta f vanishes to working order")
        return W + W.delta(nu) / W

    def schwarzian(self, nu: int) -> Jet:
        return schwarzian_from_ratio(self.ratio(nu), nu)
