import random

import pytest

from helpers import const, fixture, rand_irregular_nonres, rand_transformation
from lode.classify import (
    FormalInvariant,
    Kind,
    classify,
    formal_equivalence,
    formal_invariants,
    formal_normal_form,
    meromorphic_invariant_match,
    normalize_quadratic_differential,
)
from lode.errors import DegenerateInput
from lode.jets import INF, Jet, exact, iszero, scalar_to_json
from lode.lde import Lde, PointTransformation, apply_transformation, delta_law_rhs

N = 8


def X(n=N):
    return Jet.x(n)


def from_delta(nu, p, d):
    """Equation with given p and Delta."""
    return Lde(nu, p, (d - p * p + p.delta(nu) * 2) / 4)


def strs(j, lo, hi):
    return [scalar_to_json(c)[0] for c in j.to_list(lo, hi)]


def test_classify_examples():
    assert classify(Lde(0, const("1/2", N), Jet.zero(N))).kind == Kind.REGULAR_STRONG_NONRES
    assert classify(Lde(1, Jet.zero(N), const("1/4", N))).kind == Kind.IRREGULAR_NONRES
    assert classify(fixture("example_lt1")).kind == Kind.DEGENERATE
    assert classify(fixture("lt_nf_nu1")).kind == Kind.IRREGULAR_RES_NONDEG
    c = classify(fixture("b1c"))
    assert c.kind == Kind.REGULAR_RESONANT and c.k == 1


def test_example_lt1_discriminant():
    # Delta = r^2 - 2 delta_2 r with r = alpha2 - alpha1 = x + x^2 + ...
    d = fixture("example_lt1").delta
    assert strs(d, 0, 3) == ["0", "0", "1", "0"]


def test_degenerate_rejected():
    with pytest.raises(DegenerateInput):
        formal_invariants(fixture("example_lt1"))


def test_normalize_fixed_point():
    mu = exact("2/3")
    e = from_delta(1, Jet.zero(N), (const(1, N) + X() * mu) ** 2)
    qd = normalize_quadratic_differential(e)
    assert qd.phi.equal_to(X(), N)
    assert qd.mu == mu


def test_normalize_sqrt_residue():
    e = Lde(1, Jet.zero(N), (const(1, N) + X()) / 4)
    qd = normalize_quadratic_differential(e)
    assert qd.mu == exact("1/2")
    target = (const(1, N) + X() / 2) ** 2
    assert qd.normalized.delta.equal_to(target, N - 2)
    # phi maps the normal form back onto e by the Delta law
    T = PointTransformation(qd.phi, const(1))
    assert e.delta.equal_to(delta_law_rhs(qd.normalized.delta, T, 1), N - 2)


@pytest.mark.parametrize("k,want", [(1, "1"), (2, "1/3"), (3, "1/5")])
def test_normalize_resonant(k, want):
    # Delta = x + x^(k+1): the first correction of phi is 1 / (2k - 2nu + 1)
    e = Lde(1, Jet.zero(N), (X() + Jet.monomial(exact(1), k + 1, N)) / 4)
    qd = normalize_quadratic_differential(e)
    assert qd.normalized.delta.equal_to(X(), N - 2)
    assert all(iszero(qd.phi[j]) for j in range(2, k + 1))
    assert qd.phi[k + 1] == exact(want)


def test_symmetry_group_nu2():
    e = from_delta(2, Jet.zero(N), (const(1, N) + X() ** 2 * exact(3)) ** 2)
    inv = formal_invariants(e)
    assert inv.group_order == 4 and inv.G == (0, 2)
    assert inv.mu == exact(3)
    e0 = Lde(2, Jet.zero(N), const("1/4", N))
    assert formal_invariants(e0).G == (0, 1, 2, 3)


def test_regular_invariants():
    inv = formal_invariants(Lde(0, const(1, N), Jet.zero(N)))
    assert inv.variant == "REGULAR"
    assert (inv.lambda1, inv.lambda2) == (exact(1), exact(0))


def test_half_sum_half_difference():
    p = const(1, N) + X() * 3
    e = from_delta(1, p, (const(1, N) + X()) ** 2)
    inv = formal_invariants(e)
    assert strs(inv.lambda1, 0, 1) == ["0", "1"]
    assert strs(inv.lambda2, 0, 1) == ["1", "2"]
    assert inv.mu == exact(1)


def test_normal_form_trivial():
    nf = formal_normal_form(FormalInvariant("NONRES", 1, Jet.zero(N), const(1, N), exact(0)), N=N)
    assert nf.p.equal_to(const(1, N), N) and nf.q.is_zero() and nf.delta.equal_to(const(1, N), N)


def test_normal_form_trace_free():
    mu = exact("1/3")
    one = const(1, N)
    r = one + X() * mu
    inv = FormalInvariant("NONRES", 1, -r / 2, r / 2, mu)
    nf = formal_normal_form(inv, N=N)
    assert nf.p.equal_to(X() * X() * mu / r, N)
    L = r.log()
    want = r * r - L.delta(1).delta(1) * 2 + L.delta(1) * L.delta(1)
    assert nf.delta.equal_to(want, N)


@pytest.mark.parametrize("nu", [1, 2, 3])
def test_normal_form_resonant(nu):
    # lambda2 - lambda1 = x^(1/2), lambda1 + lambda2 = P - x^nu / 2 give
    # p = P and Delta = r^2 - 2 delta(delta log r) + (delta log r)^2 with
    # delta log r = x^nu / 2, i.e. Delta = x - (nu - 1/4) x^(2 nu)
    P = Jet.monomial(exact(1), 1, N) if nu > 1 else Jet.zero(N)
    nf = formal_normal_form(FormalInvariant("RES_NONDEG", nu, P=P), N=N)
    assert nf.p.equal_to(P, N)
    half = Jet.monomial(exact("1/2"), nu, N)
    want = X() - half.delta(nu) * 2 + half * half
    assert nf.delta.equal_to(want, N)
    assert nf.delta[2 * nu] == -(exact(nu) - exact("1/4"))


def test_equivalence_identity():
    e = fixture("irregnormalform_nu1")
    T = formal_equivalence(e, e, 6)
    assert T.phi.equal_to(X(7), 7)
    assert all(iszero(T.t[j]) for j in range(1, 7))


# witness frozen from the degree-by-degree solve, re-verified below by pull-back
B1C_B1D_PHI = ["1", "0", "1/2", "5/12", "49/72", "1397/1440", "1193/800"]
B1C_B1D_T = ["1", "0", "1/2", "5/12", "49/72", "1397/1440", "1193/800"]


def test_b1c_b1d_witness():
    c, d = fixture("b1c"), fixture("b1d")
    T = formal_equivalence(d, c, 6)
    assert T is not None
    assert apply_transformation(c, T).equal_to(d, 6)
    T2 = formal_equivalence(c, d, 6)
    assert apply_transformation(d, T2).equal_to(c, 6)


def test_b1c_b1d_frozen_coefficients():
    from lode.cli import run
    import io
    import json

    out = io.StringIO()
    code = run(["equivalent", "--json", str(_fx("b1c")), str(_fx("b1d"))], out, io.StringIO())
    assert code == 0
    rep = json.loads(out.getvalue())
    assert rep["verdict"] == "YES"
    phi = [c[0] for c in rep["witness"]["phi"]["coeffs"]]
    t = [c[0] for c in rep["witness"]["t"]["coeffs"]]
    assert phi[: len(B1C_B1D_PHI)] == B1C_B1D_PHI
    assert t[: len(B1C_B1D_T)] == B1C_B1D_T


def test_b1c_b1d_witness_oracle():
    import sympy as sp

    from oracles import to_poly, transformed_coefficients, x

    n = 5
    c, d = fixture("b1c"), fixture("b1d")
    Xs = sp.symbols("X")
    phi = sum(sp.Rational(v) * x ** (k + 1) for k, v in enumerate(B1C_B1D_PHI[: n + 1]))
    t = sum(sp.Rational(v) * x**k for k, v in enumerate(B1C_B1D_T[: n + 1]))
    p, q = transformed_coefficients(0, to_poly(c.p, n).subs(x, Xs), to_poly(c.q, n).subs(x, Xs), phi, t, 0, n)
    assert sp.expand(p - to_poly(d.p, n)) == 0
    assert sp.expand(q - to_poly(d.q, n)) == 0


def _fx(name):
    from helpers import fixture_path

    return fixture_path(name)


@pytest.mark.parametrize("nu", [1, 2])
def test_equivalence_recovers_random_transformation(nu):
    rng = random.Random(40 + nu)
    e2 = rand_irregular_nonres(rng, nu, 14)
    T = rand_transformation(rng, 14)
    e1 = apply_transformation(e2, T)
    W = formal_equivalence(e1, e2, 6)
    assert W is not None
    assert apply_transformation(e2, W).equal_to(e1, 6)


def test_t_param_moves_phi_coefficient():
    e = fixture("irregnormalform_nu1")
    nf = formal_normal_form(formal_invariants(e), N=12)
    T = formal_equivalence(e, nf, 6, t_param=exact(2))
    assert T.phi[2] == exact(2)
    assert apply_transformation(nf, T).equal_to(e, 6)


def test_meromorphic_shift():
    e1 = fixture("b1a")
    e2 = apply_transformation(e1, PointTransformation(Jet.x(INF), const(1), 3))
    assert meromorphic_invariant_match(e1, e2) == 3
    assert meromorphic_invariant_match(e1, e1) == 0
    other = Lde.from_factored(0, const("1/3", 10), const(0, 10))
    assert meromorphic_invariant_match(e1, other) is None
    ei = fixture("irregnormalform_nu1")
    shifted = apply_transformation(ei, PointTransformation(Jet.x(INF), const(1), -2))
    assert meromorphic_invariant_match(ei, shifted) == -2
    W = formal_equivalence(shifted, ei, 6, meromorphic=True)
    assert W is not None and W.m == -2
    assert formal_equivalence(shifted, ei, 6) is None
