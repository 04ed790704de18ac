"""Lie algebras of analytic infinitesimal linear point symmetries."""
from __future__ import annotations

from dataclasses import dataclass, field

from .classify import Kind, classify, formal_invariants, formal_normal_form
from .errors import DegenerateInput, UndecidableWithoutStokes
from .jets import INF, Jet, coerce, iszero, to_complex
from .lde import Lde
from .reduce import symmetric_power_kernel, symmetric_power_operator


@dataclass(frozen=True)
class SymmetryGenerator:
    """Y = h delta_nu + f y d/dy.

    ``f`` defaults to (c + delta h + p h) / 2 for the equation the generator
    is attached to; pass it explicitly to describe an arbitrary linear field.
    """

    h: Jet
    c: object = 0
    f: Jet | None = None
    label: str = ""

    def f_for(self, e: Lde) -> Jet:
        if self.f is not None:
            return self.f
        ex = e.exact
        c = Jet.const(coerce(self.c, ex), INF, ex)
        return (c + self.h.delta(e.nu) + e.p * self.h) / 2

    def g(self, nu: int) -> Jet:
        """Coefficient of d/dx."""
        return self.h.shift(nu + 1)

    def to_json(self) -> dict:
        from .jets import scalar_to_json

        out = {
            "label": self.label,
            "h": [scalar_to_json(v) for v in self.h.to_list(0, self.h.order)] if self.h.coeffs else [],
            "c": scalar_to_json(self.c if not isinstance(self.c, int) else coerce(self.c, True)),
        }
        if self.f is not None:
            out["f"] = [scalar_to_json(v) for v in self.f.to_list(0, self.f.order)] if self.f.coeffs else []
        return out


def scaling(exact: bool = True) -> SymmetryGenerator:
    """y d/dy."""
    return SymmetryGenerator(Jet.zero(INF, exact), coerce(2, exact), label="y d/dy")


def vector_field(h: Jet, f, label: str = "") -> SymmetryGenerator:
    """h delta_nu + f y d/dy with f given directly."""
    ex = h.exact
    if not isinstance(f, Jet):
        f = Jet.const(coerce(f, ex), INF, ex)
    return SymmetryGenerator(h, 0, f, label)


def _coefficients(e: Lde) -> tuple[Jet, Jet]:
    """A, B with y'' = A y' + B y."""
    nu, ex = e.nu, e.exact
    one = coerce(1, ex)
    A = e.p.shift(-nu - 1) - Jet.monomial(one * (nu + 1), -1, INF, ex)
    B = e.q.shift(-2 * nu - 2)
    return A, B


@dataclass(frozen=True)
class SymmetryCheck:
    ok: bool
    residual_y: Jet
    residual_yx: Jet
    alpha: Jet

    def __bool__(self) -> bool:
        return self.ok


def lie_residuals(e: Lde, Y: SymmetryGenerator) -> tuple[Jet, Jet, Jet]:
    """Components of [X, pr Y] - alpha X along y d/dy_x and y_x d/dy_x, and alpha = g'."""
    A, B = _coefficients(e)
    g = Y.g(e.nu)
    f = Y.f_for(e)
    g1, f1 = g.derivative(), f.derivative()
    Ry = f1.derivative() - A * f1 - g1 * B * 2 - g * B.derivative()
    Rz = f1 * 2 - g1.derivative() - g * A.derivative() - g1 * A
    return Ry, Rz, g1


def verify_symmetry(e: Lde, Y: SymmetryGenerator, N: int | None = None, tol: float | None = None) -> SymmetryCheck:
    """Check [X, pr^(1) Y] = g' X coefficient-wise on the known range."""
    if tol is None and not (e.exact and Y.h.exact):
        tol = 1e-8
    Ry, Rz, alpha = lie_residuals(e, Y)

    def zero(r: Jet) -> bool:
        if not r.coeffs:
            return True
        hi = r.order if N is None else min(r.order, r.val + N if r.val < 0 else N)
        return all(iszero(r[j], tol) for j in range(r.val, hi + 1))

    return SymmetryCheck(zero(Ry) and zero(Rz), Ry, Rz, alpha)


def bracket(Y1: SymmetryGenerator, Y2: SymmetryGenerator, e: Lde) -> SymmetryGenerator:
    nu = e.nu
    g1, g2 = Y1.g(nu), Y2.g(nu)
    f1, f2 = Y1.f_for(e), Y2.f_for(e)
    g = g1 * g2.derivative() - g2 * g1.derivative()
    f = g1 * f2.derivative() - g2 * f1.derivative()
    return SymmetryGenerator(g.shift(-nu - 1), 0, f, label=f"[{Y1.label}, {Y2.label}]")


@dataclass
class SymmetryAlgebra:
    generators: list
    dimension: int
    case: str
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "dimension": self.dimension,
            "generators": [g.to_json() for g in self.generators],
            "notes": list(self.notes),
        }


def _regular_case(e: Lde) -> str:
    from .regular import frobenius

    d = frobenius(e, 2)
    if d.k is None or d.k == 0:
        return "1a"
    return "1c" if d.epsilon else "1b"


def is_formal_normal_form(e: Lde, tol: float | None = None) -> bool:
    """Whether e coincides with the formal normal form built from its own characteristic jets."""
    inv = formal_invariants(e)
    if inv.own is None:
        return False
    nf = formal_normal_form(inv, N=e.order)
    return e.equal_to(nf, e.order, tol)


def symmetry_algebra(e: Lde, N: int | None = None, stokes=None) -> SymmetryAlgebra:
    """Generators, dimension and case label of the analytic linear symmetry algebra."""
    tol = None if e.exact else 1e-9
    cls = classify(e, tol)
    ex = e.exact
    gens = [scaling(ex)]
    notes = []
    if cls.kind == Kind.IRREGULAR_RES_NONDEG:
        return SymmetryAlgebra(gens, 1, "3")
    if cls.kind == Kind.DEGENERATE:
        raise DegenerateInput("degenerate irregular points are outside the classification")
    N = min(e.order, 12) if N is None else N
    if cls.regular:
        case = _regular_case(e)
        analytic = True
    else:
        analytic = None
        if is_formal_normal_form(e, tol):
            analytic = True
            notes.append("input is a formal normal form")
        elif stokes is not None:
            mult = stokes.multipliers if hasattr(stokes, "multipliers") else stokes
            analytic = all(abs(complex(to_complex(s))) <= 1e-10 for s in mult)
            notes.append("decided from supplied Stokes data")
        elif e.nu == 1:
            from .stokes import nu1_invariants

            inv = nu1_invariants(e)
            s0s = inv.extra["s0_s_pi_monodromy"]
            if abs(s0s) > 1e-6:
                analytic = False
                notes.append(f"s0 s_pi = {s0s:.6g} is nonzero")
        if analytic is None:
            raise UndecidableWithoutStokes("normal-form equivalence needs Stokes data for this input")
        case = "2a" if analytic else "2b"
    if analytic:
        s = 0 if cls.regular else e.nu
        kernel = symmetric_power_kernel(e, max(N - s, 1))
        for i, h in enumerate(kernel):
            gens.append(SymmetryGenerator(h, 0, label=f"h{i + 1}"))
    return SymmetryAlgebra(gens, len(gens), case, notes)


def pullback_generator(Y: SymmetryGenerator, T, nu: int) -> SymmetryGenerator:
    """Generator of e = apply_transformation(e~, T) induced by a generator h~ of e~."""
    return SymmetryGenerator(Y.h.compose(T.phi) / T.psi(nu), Y.c, label=Y.label)


def in_span(h: Jet, basis: list, tol: float | None = None) -> bool:
    """Whether h is a combination of the echelon basis (distinct leading exponents)."""
    r = h
    for b in basis:
        if r.coeffs and b.coeffs:
            r = r - b * r[b.val]
    upto = min([r.order] + [b.order for b in basis])
    return all(iszero(r[j], tol) for j in range(max(r.val, 0) if r.coeffs else 0, upto + 1)) if r.coeffs else True
