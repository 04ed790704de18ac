"""Analytic invariants: projective Stokes collections, numeric monodromy and rank-one closed forms."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import mpmath
import numpy as np

from .classify import Kind, classify, formal_invariants
from .errors import DegenerateInput, DivergentTerm, PoleOnPath, ToleranceNotMet
from .jets import Jet, iszero, to_complex
from .lde import Lde

# Sign in front of 2 cos(pi sqrt(Delta2 + 1)) in the rank-one trace identity.
# Reducible equations force (det M)^(-1/2) tr M = 2 cos(pi mu), which equals
# -2 cos(pi sqrt(Delta2 + 1)); PRINTED_TRACE_SIGN keeps the other convention.
TRACE_SIGN = -1
PRINTED_TRACE_SIGN = 1

MONODROMY_TOL = 1e-8


class Parity(str, Enum):
    TRANSLATION = "TRANSLATION"  # f -> f + s
    MOEBIUS_FLAT = "MOEBIUS_FLAT"  # f -> f / (1 + s f)


class Family(str, Enum):
    R_ONE = "R_ONE"
    R_EXP_MINUS_X = "R_EXP_MINUS_X"


def parity(l: int) -> Parity:
    return Parity.TRANSLATION if l % 2 else Parity.MOEBIUS_FLAT


@dataclass(frozen=True)
class StokesCollection:
    """Multipliers s_0 .. s_{n-1}; n = 2 nu (NONRES) or 2 nu - 1 (RES_NONDEG)."""

    nu: int
    multipliers: tuple
    variant: str = "NONRES"
    mu: complex = 0

    def __post_init__(self):
        object.__setattr__(self, "multipliers", tuple(complex(to_complex(s)) for s in self.multipliers))
        object.__setattr__(self, "mu", complex(to_complex(self.mu)))
        expected = {"NONRES": 2 * self.nu, "RES_NONDEG": 2 * self.nu - 1}.get(self.variant)
        if expected is not None and len(self.multipliers) != expected:
            raise ValueError(f"{self.variant} with nu = {self.nu} needs {expected} multipliers")

    @property
    def count(self) -> int:
        return len(self.multipliers)

    @property
    def parity(self) -> tuple:
        return tuple(parity(l) for l in range(self.count))

    def multiplier(self, l: int) -> complex:
        """s_l for any integer l, through the extension rule."""
        n = self.count
        k, r = divmod(l, n)
        s = self.multipliers[r]
        if self.variant == "RES_NONDEG":
            return s
        E = cmath.exp(2j * math.pi * self.mu)
        return s * E**k if r % 2 else s * E ** (-k)

    def operator(self, l: int) -> np.ndarray:
        """sigma_l as a 2x2 matrix acting on f by Moebius transformation."""
        s = self.multiplier(l)
        if parity(l) is Parity.TRANSLATION:
            return np.array([[1, s], [0, 1]], dtype=complex)
        return np.array([[1, 0], [s, 1]], dtype=complex)

    def all_zero(self, tol: float = 1e-12) -> bool:
        return all(abs(s) <= tol for s in self.multipliers)

    def to_json(self) -> dict:
        return {
            "nu": self.nu,
            "variant": self.variant,
            "mu": [self.mu.real, self.mu.imag],
            "multipliers": [[s.real, s.imag] for s in self.multipliers],
            "parity": [p.value for p in self.parity],
        }


def stokes_equivalent(a: StokesCollection, b: StokesCollection, G=(0,), tol: float = 1e-10):
    """Witness (c, g) with sigma'_l = iota^g (c^-1 sigma_{l+g}) (c iota^g), or None.

    ``b`` plays sigma'.  On multipliers: s'_l = c s_{l+g} when l + g is even
    and s'_l = s_{l+g} / c when l + g is odd.  RES_NONDEG freezes c = 1.
    """
    if (a.nu, a.variant, a.count) != (b.nu, b.variant, b.count):
        return None
    n = a.count
    frozen = a.variant == "RES_NONDEG"
    scale = max(1.0, *(abs(s) for s in a.multipliers + b.multipliers))
    for g in G:
        src = [a.multiplier(l + g) for l in range(n)]
        dst = list(b.multipliers)
        if any((abs(s) <= tol * scale) != (abs(t) <= tol * scale) for s, t in zip(src, dst)):
            continue
        c = 1
        if not frozen:
            for l, (s, t) in enumerate(zip(src, dst)):
                if abs(s) > tol * scale:
                    c = t / s if (l + g) % 2 == 0 else s / t
                    break
        ok = True
        for l, (s, t) in enumerate(zip(src, dst)):
            pred = c * s if (l + g) % 2 == 0 else s / c
            if abs(pred - t) > tol * scale:
                ok = False
                break
        if ok:
            return complex(c), g % n
    return None


# -------------------------------------------------------------- monodromy


def _poly(j: Jet) -> np.ndarray:
    if not j.coeffs:
        return np.zeros(1, dtype=complex)
    return np.array([complex(to_complex(j[k])) for k in range(0, j.val + len(j.coeffs))], dtype=complex)


def _taylor_shift(c: np.ndarray, a: complex, K: int) -> np.ndarray:
    """Coefficients of P(a + h) in h, up to degree K."""
    c = c.copy()
    n = len(c)
    out = np.zeros(K + 1, dtype=complex)
    for k in range(min(n, K + 1)):
        # synthetic division: the remainder is the next Taylor coefficient
        acc = 0j
        for i in range(n - 1, k - 1, -1):
            acc = acc * a + c[i]
            c[i] = acc
        out[k] = c[k]
    return out


def _step(P: np.ndarray, Q: np.ndarray, nu: int, xa: complex, h: complex, V: np.ndarray, order: int) -> np.ndarray:
    """Taylor step of dV/dx = A(x) V / x^(nu+1) from xa to xa + h."""
    p = _taylor_shift(P, xa, order)
    q = _taylor_shift(Q, xa, order)
    m = nu + 1
    w = np.array([math.comb(m + k - 1, k) * (-1) ** k / xa ** (m + k) for k in range(order + 1)], dtype=complex)
    wp = np.convolve(p, w)[: order + 1]
    wq = np.convolve(q, w)[: order + 1]
    B = np.zeros((order + 1, 2, 2), dtype=complex)
    B[:, 0, 1] = w
    B[:, 1, 0] = wq
    B[:, 1, 1] = wp
    terms = [V]
    for n in range(order):
        acc = np.zeros((2, 2), dtype=complex)
        for j in range(n + 1):
            acc += B[j] @ terms[n - j]
        terms.append(acc / (n + 1))
    out = np.zeros((2, 2), dtype=complex)
    hp = 1.0 + 0j
    for t in terms:
        out += t * hp
        hp *= h
    return out


def _loop(P, Q, nu, radius, steps, order, theta0=0.0) -> np.ndarray:
    V = np.eye(2, dtype=complex)
    pts = [radius * cmath.exp(1j * (theta0 + 2 * math.pi * k / steps)) for k in range(steps + 1)]
    for xa, xb in zip(pts, pts[1:]):
        V = _step(P, Q, nu, xa, xb - xa, V, order)
    return V


def numeric_monodromy(
    e: Lde, radius: float = 1.0, steps: int = 64, tol: float = MONODROMY_TOL, order: int = 20, theta0: float = 0.0
) -> np.ndarray:
    """M with V(e^{2 pi i} x) = V(x) M for the companion system, V(x0) = I."""
    if not (radius > 0 and math.isfinite(radius)):
        raise PoleOnPath("the loop radius must be positive and finite")
    for j in (e.p, e.q):
        if j.coeffs and j.val < 0:
            raise PoleOnPath("companion matrix has a pole off the origin")
    P, Q = _poly(e.p), _poly(e.q)
    prev = _loop(P, Q, e.nu, radius, steps, order, theta0)
    while steps < 1 << 14:
        steps *= 2
        cur = _loop(P, Q, e.nu, radius, steps, order, theta0)
        if np.max(np.abs(cur - prev)) <= tol * max(1.0, np.max(np.abs(cur))):
            return cur
        prev = cur
    raise ToleranceNotMet(f"monodromy did not converge to {tol} with {steps} steps")


# ------------------------------------------------------ rank-one invariants


def trace_closed_form(delta2, sign: int = TRACE_SIGN) -> complex:
    """(det M)^(-1/2) tr M as a function of Delta2."""
    return sign * 2 * cmath.cos(math.pi * cmath.sqrt(complex(to_complex(delta2)) + 1))


def s0_s_pi_closed_form(mu, delta2, sign: int = TRACE_SIGN) -> complex:
    """s_0 s_pi from 2 cos(pi mu) + e^{pi i mu} s_0 s_pi = trace_closed_form."""
    mu = complex(to_complex(mu))
    r = cmath.sqrt(complex(to_complex(delta2)) + 1)
    a, b = math.pi * (mu + r) / 2, math.pi * (mu - r) / 2
    if sign > 0:
        return 4 * cmath.exp(-1j * math.pi * mu) * cmath.sin(a) * cmath.sin(b)
    return -4 * cmath.exp(-1j * math.pi * mu) * cmath.cos(a) * cmath.cos(b)


@dataclass(frozen=True)
class Nu1Invariants:
    mu: complex | None
    p1: complex
    delta2: complex
    cos_invariant: complex
    s0_s_pi: complex | None
    det_M: complex
    tr_M: complex
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def c(z):
            return None if z is None else [z.real, z.imag]

        return {
            "mu": c(self.mu),
            "p1": c(self.p1),
            "delta2": c(self.delta2),
            "cos_invariant": c(self.cos_invariant),
            "s0_s_pi": c(self.s0_s_pi),
            "det_M": c(self.det_M),
            "tr_M": c(self.tr_M),
            **{k: c(v) if isinstance(v, complex) else v for k, v in self.extra.items()},
        }


def nu1_invariants(e: Lde, radius: float = 1.0, tol: float = MONODROMY_TOL) -> Nu1Invariants:
    if e.nu != 1:
        raise DegenerateInput("rank-one invariants need nu = 1")
    cls = classify(e, None if e.exact else 1e-10)
    if cls.kind not in (Kind.IRREGULAR_NONRES, Kind.IRREGULAR_RES_NONDEG):
        raise DegenerateInput(f"rank-one invariants need a non-degenerate irregular point, got {cls}")
    p1 = complex(to_complex(e.p[1]))
    d = e.delta
    delta2 = complex(to_complex(d[2]))
    M = numeric_monodromy(e, radius, tol=tol)
    det, tr = complex(np.linalg.det(M)), complex(np.trace(M))
    branch = cmath.exp(-1j * math.pi * p1)
    normalized_trace = branch * tr
    mu = None
    s0s = None
    extra = {"det_expected": cmath.exp(2j * math.pi * p1), "normalized_trace": normalized_trace}
    if cls.kind == Kind.IRREGULAR_NONRES:
        mu = complex(to_complex(formal_invariants(e).mu))
        s0s = s0_s_pi_closed_form(mu, delta2)
        extra["s0_s_pi_monodromy"] = (normalized_trace - 2 * cmath.cos(math.pi * mu)) * cmath.exp(-1j * math.pi * mu)
    return Nu1Invariants(mu, p1, delta2, normalized_trace / 2, s0s, det, tr, extra)


def nu1_equivalent(a: Nu1Invariants, b: Nu1Invariants, tol: float = 1e-6) -> bool:
    """Rank-one analytic classification from (mu up to sign or p1, cos invariant)."""
    if abs(a.cos_invariant - b.cos_invariant) > tol:
        return False
    if a.mu is not None and b.mu is not None:
        return min(abs(a.mu - b.mu), abs(a.mu + b.mu)) <= tol
    return abs(a.p1 - b.p1) <= tol


# ------------------------------------------------------------ Gamma sums


def _is_nonpositive_int(mu: complex) -> bool:
    return mu.imag == 0 and mu.real <= 0 and mu.real == int(mu.real)


def gamma_stokes(mu, family: Family | str = Family.R_ONE, tol: float = 1e-16) -> complex:
    """s_pi for R = 1 or R = exp(-x) as an entire function of mu."""
    mu = complex(to_complex(mu))
    family = Family(family)
    pref = 2j * math.pi * cmath.exp(1j * math.pi * mu)
    if family is Family.R_ONE:
        if _is_nonpositive_int(mu):
            return 0j
        return pref * complex(mpmath.rgamma(mu))
    total = mpmath.mpc(0)
    j = 0
    while True:
        term = mpmath.rgamma(mu + j) / mpmath.factorial(j)
        total += term
        if j > 10 and abs(term) < tol * max(1e-300, abs(total)):
            break
        j += 1
    return pref * complex(total)


def laplace_stokes_quadrature(mu, R: Jet, tol: float = 1e-12) -> complex:
    """(e^{2 pi i mu} - 1) int_0^oo e^-s s^-mu R(1/s) ds, term by term."""
    mu = complex(to_complex(mu))
    pref = cmath.exp(2j * math.pi * mu) - 1
    total = 0j
    n = R.val + len(R.coeffs) if R.coeffs else 0
    for j in range(max(R.val, 0), n):
        r = complex(to_complex(R[j]))
        if r == 0:
            continue
        z = 1 - mu - j
        if z.real > 0:
            # s = u^(1/a), a = Re z, removes the endpoint singularity of s^(z-1)
            with mpmath.workdps(30):
                a = mpmath.mpf(z.real)
                w = mpmath.mpc(0, z.imag) / a
                val = mpmath.quad(lambda u: mpmath.exp(-(u ** (1 / a))) * u**w / a, [0, 1, mpmath.inf])
            if abs(complex(val) - complex(mpmath.gamma(z))) > max(tol, 1e-12) * max(1.0, abs(complex(val))):
                raise ToleranceNotMet(f"quadrature of term {j} disagrees with its Gamma value")
            total += r * pref * complex(val)
        elif _is_nonpositive_int(z):
            if abs(pref) > 0:
                raise DivergentTerm(f"term {j} hits a pole of Gamma at {z}")
            # removable limit of (e^{2 pi i mu} - 1) Gamma(1 - mu - j)
            total += r * 2j * math.pi * (-1) ** j * cmath.exp(1j * math.pi * mu) * complex(mpmath.rgamma(mu + j))
        else:
            total += r * pref * complex(mpmath.gamma(z))
    return total


# ---------------------------------------------------------- degenerate LT-1


def example1_equation(c, N: int = 10) -> Lde:
    """Rank two reducible equation with alpha1 = 1 and alpha2 = 1 + x + x^2 + c x^3 / (1 + c x)."""
    from .jets import coerce

    ex = not isinstance(c, (float, complex))
    cc = coerce(c, ex)
    x = Jet.x(N, ex)
    one = Jet.const(coerce(1, ex), N, ex)
    a2 = one + x + x * x + (x**3 * cc) / (one + x * cc)
    return Lde.from_factored(2, one, a2)


def example1_stokes(c) -> StokesCollection:
    """Multipliers (0, 2 pi i Res_{s=0} e^-s (1 + c/s))."""
    c = complex(to_complex(c))
    # Laurent coefficient of s^-1 in e^-s (1 + c s^-1): c * [s^0] e^-s = c
    E = Jet.from_list([(-1) ** k / math.factorial(k) for k in range(4)], exact=False)
    L = Jet(-1, [c, 1], 3, exact=False)
    res = (E * L)[-1]
    return StokesCollection(2, (0, 2j * math.pi * res), variant="DEGENERATE")
