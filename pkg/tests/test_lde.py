import random

import pytest
import sympy as sp

from helpers import const, fixture, rand_lde, rand_transformation
from lode.errors import DegenerateRatio
from lode.jets import INF, Jet, exact, scalar_to_json
from lode.lde import (
    Germ,
    Lde,
    PointTransformation,
    apply_transformation,
    companion,
    delta_law_rhs,
    discriminant,
    pushforward,
    schwarzian,
)
from oracles import transformed_coefficients, x as sx


def J(cs, N, val=0):
    return Jet(val, [exact(c) for c in cs], N)


def strs(j, lo, hi):
    return [scalar_to_json(c)[0] for c in j.to_list(lo, hi)]


def test_rank_from_raw():
    inv_x = Jet.monomial(exact(1), -1, 8)
    inv_x2 = Jet.monomial(exact(1), -2, 8)
    assert Lde.from_raw(inv_x, inv_x2).nu == 0
    assert Lde.from_raw(Jet.zero(8), Jet.monomial(exact(1), -3, 8)).nu == 1
    e = Lde.from_raw(Jet.monomial(exact(1), -3, 8), Jet.zero(8))
    assert e.nu == 2
    assert strs(e.p, 0, 3) == ["-1", "0", "3", "0"]


def test_nonsingular_raw():
    e = Lde.from_raw(Jet.zero(6), Jet.zero(6))
    assert e.nonsingular


def test_rank_must_be_minimal():
    with pytest.raises(ValueError):
        Lde(1, Jet.zero(6), Jet.monomial(exact(1), 2, 6))


def test_discriminant_examples():
    q = J([1, 2, 3], 6)
    assert discriminant(Lde(1, Jet.zero(6), q)).equal_to(q * 4, 6)
    mu = exact("2/3")
    e = Lde.from_factored(0, Jet.zero(6), Jet.const(mu, 6))
    assert discriminant(e).equal_to(Jet.const(mu * mu, 6), 6)


def test_identity_transformation():
    e = fixture("irregnormalform_nu2")
    T = PointTransformation.identity(12)
    assert apply_transformation(e, T).equal_to(e, 10)


@pytest.mark.parametrize("nu,m", [(0, 3), (1, -2), (2, 1)])
def test_shift_changes_p_exactly(nu, m):
    rng = random.Random(nu)
    e = rand_lde(rng, nu, 8)
    T = PointTransformation(Jet.x(INF), const(1), m)
    got = apply_transformation(e, T)
    assert got.p.equal_to(e.p - Jet.monomial(exact(2 * m), nu, INF), 8)
    assert got.delta.equal_to(e.delta, 8)


# frozen with the sympy chain-rule oracle (tests/oracles.py)
P_FROZEN = ["1", "-3/2", "2", "-51/8", "-87/8", "-521/32"]
Q_FROZEN = ["1/3", "0", "-23/6", "23/2", "-779/48", "-715/48"]


def _oracle_case(N=8):
    et = Lde(1, J(["1", "1/2", "1"], N), J(["1/3", "-1"], N))
    T = PointTransformation(J([1, "1/2", -1], N + 1, 1), J([1, -1, 2], N), 1)
    return et, T


def test_transformation_against_frozen_oracle():
    et, T = _oracle_case()
    e = apply_transformation(et, T)
    assert strs(e.p, 0, 5) == P_FROZEN
    assert strs(e.q, 0, 5) == Q_FROZEN


def test_oracle_reproduces_frozen_values():
    X = sp.symbols("X")
    p, q = transformed_coefficients(
        1, 1 + X / 2 + X**2, sp.Rational(1, 3) - X, sx + sx**2 / 2 - sx**3, 1 - sx + 2 * sx**2, 1, 5
    )
    assert [str(p.coeff(sx, k)) for k in range(6)] == P_FROZEN
    assert [str(q.coeff(sx, k)) for k in range(6)] == Q_FROZEN


def test_pushforward_inverts():
    et, T = _oracle_case(10)
    e = apply_transformation(et, T)
    assert pushforward(e, T).equal_to(et, 6)


def test_composition_of_transformations():
    rng = random.Random(5)
    e = rand_lde(rng, 1, 12)
    S, T = rand_transformation(rng, 12), rand_transformation(rng, 12, 1)
    two_step = apply_transformation(apply_transformation(e, T), S)
    one_step = apply_transformation(e, T.then(S))
    assert two_step.equal_to(one_step, 8)


@pytest.mark.parametrize("nu", [0, 1, 2])
def test_delta_law_random(nu):
    rng = random.Random(100 + nu)
    for _ in range(5):
        et = rand_lde(rng, nu, 12)
        T = rand_transformation(rng, 12, rng.choice((0, 2)))
        assert apply_transformation(et, T).delta.equal_to(delta_law_rhs(et.delta, T, nu), 10)


def test_schwarzian_power():
    mu = exact("1/3")
    S = Germ(const(1, 8), mu).schwarzian(0)
    assert S.equal_to(Jet.const(-mu * mu / 2, 8), 8)


def test_schwarzian_moebius_invariant():
    # S_0(x) = -1/2, and post-composition with a Moebius map changes nothing
    N = 8
    x = Jet.x(N)
    one = const(1, N)
    f = (x * 2 + one * 3) / (one - x)
    assert schwarzian(f, 0).truncate(N - 1).equal_to(Jet.const(exact("-1/2"), N - 1), N - 1)


def test_schwarzian_constant_rejected():
    with pytest.raises(DegenerateRatio):
        schwarzian(const(2, 6), 1)


@pytest.mark.parametrize("nu", [0, 1, 2])
def test_schwarzian_transformation_rule(nu):
    rng = random.Random(7 + nu)
    N = 8
    T = rand_transformation(rng, N + 4)
    f = Jet(1, [exact(1), exact(rng.randint(-2, 2)), exact(rng.randint(-2, 2))], N + 4)
    psi = T.psi(nu)
    d = psi.delta(nu) / psi
    lhs = schwarzian(f.compose(T.phi), nu)
    rhs = psi * psi * schwarzian(f, nu).compose(T.phi) + d.delta(nu) - d * d / 2
    assert lhs.equal_to(rhs, N)


def test_companion_matrices():
    e = Lde(0, Jet.zero(4), Jet.zero(4))
    A = companion(e)
    assert A[0][0].is_zero() and strs(A[0][1], 0, 0) == ["1"] and A[1][0].is_zero() and A[1][1].is_zero()
    l1, l2 = exact("1/2"), exact(3)
    e = Lde.from_factored(0, Jet.const(l1, 4), Jet.const(l2, 4))
    A = companion(e)
    assert A[1][0].equal_to(Jet.const(-l1 * l2, 4), 4) and A[1][1].equal_to(Jet.const(l1 + l2, 4), 4)


def test_example_lt1_expansion():
    from lode.stokes import example1_equation

    e = example1_equation(1, 8)
    x = Jet.x(8)
    one = const(1, 8)
    a2 = one + x + x * x + x**3 / (one + x)
    assert e.p.equal_to(one + a2, 8)
    assert e.q.equal_to(-(one * a2) + one.delta(2), 8)
