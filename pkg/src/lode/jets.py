"""Truncated Laurent series over exact Gaussian rationals or complex floats.

A :class:`Jet` stores the coefficients of exponents ``val .. order``; every
term of exponent above ``order`` is unknown.  Arithmetic propagates the
largest truncation order justified by the operands.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import gmpy2
from sympy.polys.domains import QQ, QQ_I

from .errors import (
    BranchAmbiguity,
    DivisionByZeroSeries,
    EssentialSingularity,
    ExactnessRequired,
    NoRootAtOrigin,
    OrderExhausted,
    ResonantObstruction,
    SingularJacobian,
)

GaussRat = type(QQ_I(0, 0))
INF = 10**9  # truncation order of exact constants
FLOAT_EPS = 1e-13
DEFAULT_TOL = 1e-10
EXACT = "exact"
FLOAT = "float"

# ----------------------------------------------------------------- scalars


def _rat(v):
    if isinstance(v, bool):
        v = int(v)
    if isinstance(v, int):
        return QQ(v)
    if isinstance(v, Fraction):
        return QQ(v.numerator, v.denominator)
    if type(v) is type(QQ(1)):
        return v
    if isinstance(v, str):
        if any(ch in v for ch in ".eE"):
            raise ExactnessRequired(f"decimal literal {v!r} in exact mode")
        f = Fraction(v)
        return QQ(f.numerator, f.denominator)
    raise ExactnessRequired(f"cannot represent {v!r} exactly")


def exact(re=0, im=0) -> GaussRat:
    """Exact complex number with rational parts."""
    if isinstance(re, GaussRat) and not im:
        return re
    return QQ_I(_rat(re), _rat(im))


def is_exact(c) -> bool:
    return isinstance(c, GaussRat)


def to_complex(c) -> complex:
    if isinstance(c, GaussRat):
        return complex(float(c.x), float(c.y))
    return complex(c)


def coerce(v, exact_mode: bool):
    """Convert a Python number or field element to the requested mode."""
    if isinstance(v, GaussRat):
        return v if exact_mode else to_complex(v)
    if isinstance(v, (int, Fraction, str)) or type(v) is type(QQ(1)):
        return exact(v) if exact_mode else to_complex(exact(v))
    if isinstance(v, (float, complex)):
        if exact_mode:
            raise ExactnessRequired(f"float {v!r} in exact mode")
        return complex(v)
    raise TypeError(f"unsupported scalar {v!r}")


def iszero(c, tol: float | None = None) -> bool:
    if isinstance(c, GaussRat):
        return not c
    return abs(c) <= (FLOAT_EPS if tol is None else tol)


def parts(c) -> tuple:
    """Real and imaginary part, exact when possible (used for ordering)."""
    if isinstance(c, GaussRat):
        return (c.x, c.y)
    c = complex(c)
    return (c.real, c.imag)


def rat_str(q) -> str:
    q = gmpy2.mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_to_json(c) -> list:
    if isinstance(c, GaussRat):
        return [rat_str(c.x), rat_str(c.y)]
    c = complex(c)
    return [repr(c.real), repr(c.imag)]


def is_integer(c, tol: float | None = None) -> int | None:
    """Return the integer value of ``c`` or ``None``."""
    if isinstance(c, GaussRat):
        if c.y == 0 and gmpy2.mpq(c.x).denominator == 1:
            return int(gmpy2.mpq(c.x))
        return None
    if tol is None:
        raise ExactnessRequired("integrality test in float mode needs a tolerance")
    c = complex(c)
    n = round(c.real)
    return n if abs(c - n) <= tol else None


def _rat_sqrt(q):
    q = gmpy2.mpq(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    if gmpy2.is_square(n) and gmpy2.is_square(d):
        return QQ(int(gmpy2.isqrt(n)), int(gmpy2.isqrt(d)))
    return None


def scalar_sqrt(c, branch: int = 1):
    """Principal square root (times ``branch``), exact when it exists."""
    if isinstance(c, GaussRat):
        a, b = gmpy2.mpq(c.x), gmpy2.mpq(c.y)
        m = _rat_sqrt(a * a + b * b)
        if m is None:
            raise ExactnessRequired(f"{c} has no square root in Q(i)")
        m = gmpy2.mpq(m)
        xr = _rat_sqrt((a + m) / 2)
        if xr is None:
            raise ExactnessRequired(f"{c} has no square root in Q(i)")
        xr = gmpy2.mpq(xr)
        if xr != 0:
            yr = b / (2 * xr)
        else:
            yr = gmpy2.mpq(_rat_sqrt(-a) or 0)
        root = QQ_I(QQ(xr.numerator, xr.denominator), QQ(yr.numerator, yr.denominator))
        return root if branch > 0 else -root
    c = complex(c)
    if c.real < 0 and abs(c.imag) <= FLOAT_EPS * max(1.0, abs(c)):
        raise BranchAmbiguity(f"{c} lies on the branch cut of sqrt")
    r = cmath.sqrt(c)
    return r if branch > 0 else -r


def scalar_roots(c, n: int, exact_mode: bool | None = None) -> list:
    """All n-th roots of ``c`` representable in the current mode.

    In exact mode only the roots lying in Q(i) are returned (possibly none).
    """
    if n == 1:
        return [c]
    exact_mode = is_exact(c) if exact_mode is None else exact_mode
    z = to_complex(c)
    approx = [cmath.rect(abs(z) ** (1.0 / n), (cmath.phase(z) + 2 * math.pi * j) / n) for j in range(n)]
    if not exact_mode:
        return approx
    out = []
    for r in approx:
        for den in (10**6, 10**12):
            cand = exact(Fraction(r.real).limit_denominator(den), Fraction(r.imag).limit_denominator(den))
            if cand**n == c:
                if cand not in out:
                    out.append(cand)
                break
    return out


def unit_root(k: int, n: int, exact_mode: bool = True):
    """exp(2 pi i k / n); ``None`` when not in Q(i) in exact mode."""
    k %= n
    if exact_mode:
        if (4 * k) % n:
            return None
        return [exact(1), exact(0, 1), exact(-1), exact(0, -1)][(4 * k) // n]
    return cmath.exp(2j * math.pi * k / n)


# -------------------------------------------------------------------- jets


def _check_finite(n: int) -> None:
    if n > INF // 2:
        raise OrderExhausted("series of an exact polynomial needs an explicit truncation order")


class Jet:
    """Truncated Laurent series ``sum_{e=val}^{order} coeffs[e-val] x^e``."""

    __slots__ = ("val", "coeffs", "order", "exact")

    def __init__(self, val: int, coeffs: Sequence, order: int, exact: bool | None = None):
        coeffs = list(coeffs)
        if exact is None:
            exact = not any(isinstance(c, (float, complex)) for c in coeffs)
        coeffs = [coerce(c, exact) for c in coeffs]
        coeffs = coeffs[: max(0, order - val + 1)]
        i = 0
        while i < len(coeffs) and iszero(coeffs[i]):
            i += 1
        coeffs = coeffs[i:]
        val += i
        while coeffs and iszero(coeffs[-1]):
            coeffs.pop()
        if not coeffs:
            val = order + 1
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    # constructors
    @classmethod
    def from_list(cls, coeffs: Iterable, order: int | None = None, val: int = 0, exact: bool | None = None) -> Jet:
        coeffs = list(coeffs)
        if order is None:
            order = val + len(coeffs) - 1
        return cls(val, coeffs, order, exact)

    @classmethod
    def zero(cls, order: int, exact: bool = True) -> Jet:
        return cls(order + 1, [], order, exact)

    @classmethod
    def const(cls, c, order: int, exact: bool | None = None) -> Jet:
        if exact is None:
            exact = not isinstance(c, (float, complex))
        return cls(0, [c], order, exact)

    @classmethod
    def monomial(cls, c, k: int, order: int, exact: bool | None = None) -> Jet:
        if exact is None:
            exact = not isinstance(c, (float, complex))
        return cls(k, [c], order, exact)

    @classmethod
    def x(cls, order: int, exact: bool = True) -> Jet:
        return cls.monomial(1, 1, order, exact)

    # access
    def __getitem__(self, e: int):
        if e > self.order:
            raise OrderExhausted(f"coefficient of x^{e} unknown (order {self.order})")
        if e < self.val or e - self.val >= len(self.coeffs):
            return self._zero()
        return self.coeffs[e - self.val]

    def _zero(self):
        return exact(0) if self.exact else 0j

    def _one(self):
        return exact(1) if self.exact else 1 + 0j

    def coefficients(self, lo: int, hi: int) -> list:
        return [self[e] for e in range(lo, hi + 1)]

    def is_zero(self, tol: float | None = None) -> bool:
        return all(iszero(c, tol) for c in self.coeffs)

    def leading(self):
        if not self.coeffs:
            raise DivisionByZeroSeries("zero jet has no leading coefficient")
        return self.coeffs[0]

    @property
    def mode(self) -> str:
        return EXACT if self.exact else FLOAT

    def __repr__(self) -> str:
        terms = [f"({c})*x^{self.val + i}" for i, c in enumerate(self.coeffs) if not iszero(c)]
        return f"Jet[{' + '.join(terms) or '0'} + O(x^{self.order + 1})]"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        return self.order == other.order and self.equal_to(other, self.order)

    def __hash__(self):
        return hash((self.val, self.order, tuple(str(c) for c in self.coeffs)))

    def equal_to(self, other: Jet, upto: int | None = None, tol: float | None = None) -> bool:
        """Coefficient-wise equality up to exponent ``upto``."""
        hi = min(self.order, other.order) if upto is None else upto
        if hi > min(self.order, other.order):
            return False
        lo = min(self.val, other.val)
        d = self - other if self.exact == other.exact else self.to_float() - other.to_float()
        return all(iszero(d[e], tol) for e in range(lo, hi + 1))

    def to_float(self) -> Jet:
        return Jet(self.val, [to_complex(c) for c in self.coeffs], self.order, False)

    def to_list(self, lo: int = 0, hi: int | None = None) -> list:
        hi = self.order if hi is None else hi
        return [self[e] for e in range(lo, hi + 1)]

    # helpers
    def _lift(self, other) -> Jet:
        if isinstance(other, Jet):
            return other
        return Jet.const(coerce(other, self.exact), INF, self.exact)

    def _pair(self, other):
        other = self._lift(other)
        if self.exact and not other.exact:
            return self.to_float(), other
        if other.exact and not self.exact:
            return self, other.to_float()
        return self, other

    def truncate(self, order: int) -> Jet:
        return Jet(self.val, self.coeffs, min(order, self.order), self.exact)

    def shift(self, k: int) -> Jet:
        """Multiply by x^k."""
        return Jet(self.val + k, self.coeffs, self.order + k, self.exact)

    def scale(self, c) -> Jet:
        c = coerce(c, self.exact) if not isinstance(c, (float, complex)) or not self.exact else c
        if isinstance(c, (float, complex)) and self.exact:
            return self.to_float().scale(c)
        return Jet(self.val, [a * c for a in self.coeffs], self.order, self.exact)

    # arithmetic
    def __neg__(self) -> Jet:
        return Jet(self.val, [-a for a in self.coeffs], self.order, self.exact)

    def __add__(self, other) -> Jet:
        f, g = self._pair(other)
        order = min(f.order, g.order)
        lo = min(f.val, g.val)
        tops = [h.val + len(h.coeffs) - 1 for h in (f, g) if h.coeffs]
        hi = min(order, max(tops, default=lo - 1))
        out = []
        for e in range(lo, hi + 1):
            out.append(f._get(e) + g._get(e))
        return Jet(lo, out, order, f.exact)

    __radd__ = __add__

    def __sub__(self, other) -> Jet:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Jet:
        return (-self) + other

    def _get(self, e: int):
        i = e - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self._zero()

    def __mul__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return self.scale(other)
        f, g = self._pair(other)
        order = min(f.order + g.val, g.order + f.val)
        lo = f.val + g.val
        n = min(order - lo + 1, len(f.coeffs) + len(g.coeffs) - 1)
        if n <= 0:
            return Jet.zero(order, f.exact)
        a, b = f.coeffs, g.coeffs
        out = [f._zero()] * n
        for i, ai in enumerate(a[:n]):
            if iszero(ai):
                continue
            for j, bj in enumerate(b[: n - i]):
                out[i + j] = out[i + j] + ai * bj
        return Jet(lo, out, order, f.exact)

    __rmul__ = __mul__

    def inverse(self) -> Jet:
        if not self.coeffs:
            raise DivisionByZeroSeries("division by a jet that vanishes to its order")
        b = self.val
        u0 = self.coeffs[0]
        m = self.order - b  # relative order of the unit part
        inv0 = self._one() / u0
        if len(self.coeffs) == 1:
            return Jet(-b, [inv0], m - b, self.exact)
        _check_finite(m)
        out = [inv0]
        for n in range(1, m + 1):
            s = self._zero()
            for k in range(1, min(n, len(self.coeffs) - 1) + 1):
                s = s + self.coeffs[k] * out[n - k]
            out.append(-s * inv0)
        return Jet(-b, out, m - b, self.exact)

    def __truediv__(self, other) -> Jet:
        if not isinstance(other, Jet):
            c = coerce(other, self.exact) if not isinstance(other, (float, complex)) else other
            if iszero(c):
                raise DivisionByZeroSeries("division by zero scalar")
            return self.scale(self._one() / c if not isinstance(c, (float, complex)) else 1 / c)
        f, g = self._pair(other)
        if not g.coeffs:
            raise DivisionByZeroSeries("division by a jet that vanishes to its order")
        b = g.val
        u = g.shift(-b)
        res = f * u.inverse()
        order = min(f.order, g.order - b + f.val) - b
        return res.shift(-b).truncate(order)

    def __rtruediv__(self, other) -> Jet:
        return self._lift(other) / self

    def __pow__(self, n: int) -> Jet:
        if not isinstance(n, int):
            return self.power(n)
        if n < 0:
            return (self ** (-n)).inverse_full()
        result = Jet.const(self._one(), INF, self.exact)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse_full(self) -> Jet:
        return Jet.const(self._one(), INF, self.exact) / self

    # calculus
    def derivative(self) -> Jet:
        out = [(self.val + i) * c for i, c in enumerate(self.coeffs)]
        return Jet(self.val - 1, out, self.order - 1, self.exact)

    def delta(self, nu: int) -> Jet:
        """delta_nu f = x^(nu+1) f'."""
        return self.derivative().shift(nu + 1)

    def delta_inverse(self, nu: int) -> Jet:
        """Antiderivative for delta_nu with zero constant term.

        Requires the coefficient of x^nu to vanish (otherwise a logarithm appears).
        """
        out = {}
        for i, c in enumerate(self.coeffs):
            e = self.val + i
            if e == nu:
                if not iszero(c):
                    raise ResonantObstruction(f"delta_{nu}^-1 of x^{nu} is a logarithm")
                continue
            out[e - nu] = c / (e - nu)
        if not out:
            return Jet.zero(self.order - nu, self.exact)
        lo = min(out)
        hi = self.order - nu
        return Jet(lo, [out.get(e, self._zero()) for e in range(lo, hi + 1)], hi, self.exact)

    # composition and transcendental lifts
    def compose(self, g: Jet) -> Jet:
        """f(g(x)); requires val(g) >= 1."""
        if g.val < 1:
            raise ValueError("compose requires val(g) >= 1")
        f, g = self._pair(g)
        k = g.val
        cap = k * (f.order + 1) - 1
        if not f.coeffs:
            return Jet.zero(cap, f.exact)
        hi = f.val + len(f.coeffs) - 1
        # Horner over non-negative exponents, then over 1/g for the pole part
        acc = Jet.zero(INF, f.exact)
        for e in range(hi, -1, -1):
            acc = (acc * g).truncate(cap) + f._get(e)
        if f.val < 0:
            ginv = Jet.const(f._one(), INF, f.exact) / g
            neg = Jet.zero(INF, f.exact)
            for e in range(f.val, 0):
                neg = (neg + f._get(e)) * ginv
            acc = acc + neg
        return acc.truncate(cap)

    def reverse(self) -> Jet:
        """Compositional inverse of f = c1 x + O(x^2)."""
        if self.val != 1:
            raise ValueError("reverse requires f = c1 x + O(x^2) with c1 != 0")
        c1 = self.coeffs[0]
        n = self.order
        xj = Jet.x(n, self.exact)
        g = xj / c1
        for _ in range(n):
            r = self.compose(g) - xj
            g = (g - r / c1).truncate(n)
        return g

    def exp(self, tol: float | None = None) -> Jet:
        if self.order > INF // 2 and self._is_constant():
            c0 = self._get(0)
            if self.exact and not iszero(c0):
                raise ExactnessRequired("exp of a nonzero constant is transcendental")
            return Jet.const(self._one() if self.exact else cmath.exp(c0), self.order, self.exact)
        _check_finite(self.order - self.val)
        if self.val < 0 and self.coeffs:
            raise EssentialSingularity("exp of a jet with a pole")
        c0 = self._get(0)
        if self.exact:
            if not iszero(c0):
                raise ExactnessRequired("exp of a nonzero constant is transcendental")
            e0 = self._one()
        else:
            e0 = cmath.exp(c0)
        n = self.order
        out = [e0]
        for m in range(1, n + 1):
            s = self._zero()
            for k in range(1, m + 1):
                ck = self._get(k)
                if not iszero(ck):
                    s = s + k * ck * out[m - k]
            out.append(s / m)
        return Jet(0, out, n, self.exact)

    def log(self, tol: float | None = None) -> Jet:
        """Principal logarithm; the constant must be 1 in exact mode."""
        if self.order > INF // 2 and self._is_constant() and self.coeffs:
            c0 = self.coeffs[0]
            if self.exact and c0 != exact(1):
                raise ExactnessRequired("log of a constant other than 1 is transcendental")
            return Jet.const(self._zero() if self.exact else cmath.log(c0), self.order, self.exact)
        _check_finite(self.order - self.val)
        if self.val != 0:
            raise EssentialSingularity("log of a jet vanishing or with a pole at 0")
        c0 = self.coeffs[0]
        if self.exact:
            if c0 != exact(1):
                raise ExactnessRequired("log of a constant other than 1 is transcendental")
            l0 = exact(0)
        else:
            if c0.real < 0 and abs(c0.imag) <= (tol or FLOAT_EPS) * abs(c0):
                raise BranchAmbiguity(f"log: constant {c0} lies on the branch cut")
            l0 = cmath.log(c0)
        u = self / c0
        d = u.derivative() / u
        # integrate d
        out = [l0] + [d._get(e - 1) / e for e in range(1, self.order + 1)]
        return Jet(0, out, self.order, self.exact)

    def sqrt(self, branch: int = 1) -> Jet:
        """Square root with principal branch of the leading coefficient times ``branch``."""
        _check_finite(self.order - self.val)
        if not self.coeffs:
            raise DivisionByZeroSeries("sqrt of a zero jet")
        if self.val % 2:
            raise BranchAmbiguity("sqrt of a jet with odd valuation is not a Laurent series")
        u = self.shift(-self.val)
        s0 = scalar_sqrt(u.coeffs[0], branch)
        n = u.order
        out = [s0]
        for m in range(1, n + 1):
            acc = u._get(m)
            for k in range(1, m):
                acc = acc - out[k] * out[m - k]
            out.append(acc / (2 * s0))
        return Jet(0, out, n, self.exact).shift(self.val // 2)

    def power(self, alpha) -> Jet:
        """f**alpha for f(0) = 1 (binomial series)."""
        _check_finite(self.order - self.val)
        if self.val != 0 or (self.exact and self.coeffs[0] != exact(1)):
            if not self.exact and self.val == 0:
                c0 = self.coeffs[0]
                return (self / c0).power(alpha) * complex(c0) ** complex(alpha)
            raise ExactnessRequired("power requires constant term 1")
        a = coerce(alpha, self.exact) if not isinstance(alpha, (float, complex)) or not self.exact else alpha
        n = self.order
        out = [self._one()]
        # (1+h)^a via P' f = a f' P
        for m in range(1, n + 1):
            s = self._zero()
            for k in range(1, m + 1):
                fk = self._get(k)
                if iszero(fk):
                    continue
                s = s + fk * out[m - k] * (a * k - (m - k))
            out.append(s / m)
        return Jet(0, out, n, self.exact)

    def _is_constant(self) -> bool:
        return not self.coeffs or (self.val == 0 and len(self.coeffs) == 1)

    def rotate(self, omega) -> Jet:
        """f(omega x)."""
        out = []
        w = self._one()
        if self.val < 0:
            w = (self._one() / omega) ** (-self.val)
        else:
            w = omega**self.val if self.val else w
        for c in self.coeffs:
            out.append(c * w)
            w = w * omega
        return Jet(self.val, out, self.order, self.exact)


def as_jet(v, order: int, exact_mode: bool = True) -> Jet:
    if isinstance(v, Jet):
        return v
    return Jet.const(coerce(v, exact_mode), order, exact_mode)


def delta_nu(f: Jet, nu: int) -> Jet:
    return f.delta(nu)


def compose(f: Jet, g: Jet) -> Jet:
    return f.compose(g)


def reverse(f: Jet) -> Jet:
    return f.reverse()


# ------------------------------------------------------------- solvers


def jet_newton_solve(F: Callable[[Jet], Jet], y0, N: int, exact_mode: bool = True, tol: float | None = None) -> Jet:
    """Solve F(x, g(x)) = 0 with g(0) = y0 to order N.

    Uses the contraction g -> g - F_y(0, y0)^(-1) F(x, g), which fixes one
    more coefficient per iteration.
    """
    y0 = coerce(y0, exact_mode)
    g = Jet.const(y0, N, exact_mode)
    F0 = F(g)
    if not iszero(F0[0], tol):
        raise NoRootAtOrigin(f"F(0, y0) = {F0[0]} != 0")
    probe = F(g + Jet.x(N, exact_mode))
    J = probe[1] - F0[1]
    if iszero(J, tol):
        raise SingularJacobian("dF/dy(0, y0) = 0")
    for _ in range(N + 1):
        r = F(g)
        hi = min(N, r.order)
        if all(iszero(r[e], tol) for e in range(min(r.val, 0), hi + 1)):
            break
        g = (g - r.truncate(N) / J).truncate(N)
    return g


def solve_by_degree(
    F: Callable[[Jet], Jet],
    g: Jet,
    degrees: Iterable[int],
    shift: int = 0,
    free: dict | None = None,
    tol: float | None = None,
) -> Jet:
    """Fix the coefficients of ``g`` one degree at a time.

    For each ``j`` in ``degrees`` the coefficient of x^j in ``g`` is chosen so
    that the coefficient of x^(j+shift) in F(g) vanishes.  The response is
    affine in the unknown coefficient, so two evaluations determine it.
    Degrees with zero response are free: their value comes from ``free``
    (default 0) and the residual must already vanish there, otherwise
    :class:`ResonantObstruction` is raised.
    """
    free = free or {}
    for j in degrees:
        d = j + shift
        r0 = F(g)[d]
        unit = Jet.monomial(g._one(), j, g.order, g.exact)
        slope = F(g + unit)[d] - r0
        if iszero(slope, tol):
            if not iszero(r0, tol):
                err = ResonantObstruction(f"obstruction at degree {d}: residual {r0}")
                err.degree = d
                err.residual = r0
                raise err
            if j in free:
                g = g + Jet.monomial(coerce(free[j], g.exact), j, g.order, g.exact)
            continue
        g = g - Jet.monomial(r0 / slope, j, g.order, g.exact)
    return g
