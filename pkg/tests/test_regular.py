import pytest

from helpers import const, fixture
from lode.errors import DegenerateInput
from lode.jets import Jet, exact, iszero
from lode.lde import Lde, apply_transformation
from lode.regular import (
    MonodromyType,
    frobenius,
    frobenius_residuals,
    monodromy_type,
    normal_form_b1,
    reduce_to_normal_form,
    regular_equivalent,
    regular_transformation,
)

N = 8


def test_frobenius_b1a_is_pure_powers():
    d = frobenius(fixture("b1a"), N)
    assert (d.lambda1, d.lambda2, d.epsilon) == (exact("1/2"), exact(0), 0)
    assert d.T11.equal_to(const(1, N), N) and d.T12.equal_to(const(1, N), N)
    assert monodromy_type(d) == MonodromyType.DIAGONALIZABLE


@pytest.mark.parametrize("name,k", [("b1b", 0), ("b1c", 1), ("b1d", 1)])
def test_frobenius_log_cases(name, k):
    d = frobenius(fixture(name), N)
    assert d.epsilon == 1 and d.k == k
    assert monodromy_type(d) == MonodromyType.NON_DIAGONALIZABLE


@pytest.mark.parametrize("name", ["b1a", "b1b", "b1c", "b1d", "b1a_resonant"])
def test_frobenius_residuals_vanish(name):
    e = fixture(name)
    r1, r2 = frobenius_residuals(e, frobenius(e, N), N - 1)
    assert r1.is_zero() and r2.is_zero()


def test_frobenius_apparent_resonance():
    # exponents 2 and 0 with no log term
    d = frobenius(fixture("b1a_resonant"), N)
    assert d.k == 2 and d.epsilon == 0


def test_frobenius_needs_regular_point():
    with pytest.raises(DegenerateInput):
        frobenius(fixture("irregnormalform_nu1"), N)


@pytest.mark.parametrize("name,form", [("b1a", "B1a"), ("b1b", "B1b"), ("b1c", "B1c"), ("b1d", "B1c")])
def test_reduce_round_trip(name, form):
    e = fixture(name)
    r = reduce_to_normal_form(e, 6)
    assert r.form == form
    assert apply_transformation(r.normal_form, r.T).equal_to(e, 6)


def test_reduce_normal_form_is_fixed():
    _, nf = normal_form_b1(exact("1/2"), exact(0), None, 0, N)
    r = reduce_to_normal_form(nf, 6)
    assert r.T.phi.equal_to(Jet.x(7), 6) and r.T.t.equal_to(const(1, 6), 6)


def test_reduce_b1b_exp_map():
    # y1 = x^l, y2 = x^l (g + log x) with g = x: the map is phi = x e^x
    lam = exact("1/3")
    e = Lde.from_factored(0, const(lam, N), const(lam, N) - Jet.x(N) / (const(1, N) + Jet.x(N)))
    r = reduce_to_normal_form(e, 6)
    assert r.form == "B1b"
    assert apply_transformation(r.normal_form, r.T).equal_to(e, 6)


def test_regular_equivalence():
    assert regular_equivalent(fixture("b1c"), fixture("b1d"))
    assert not regular_equivalent(fixture("b1a"), fixture("b1c"))
    a = Lde.from_factored(0, const("1/2", N), Jet.zero(N))
    b = Lde.from_factored(0, const("1/3", N), Jet.zero(N))
    assert not regular_equivalent(a, b)


def test_regular_transformation_witness():
    c, d = fixture("b1c"), fixture("b1d")
    T = regular_transformation(d, c, 6)
    assert apply_transformation(c, T).equal_to(d, 6)
    assert regular_transformation(fixture("b1a"), c, 6) is None


def test_regular_transformation_meromorphic():
    a, s = fixture("b1a"), fixture("b1a_shift3")
    assert regular_transformation(s, a, 6) is None
    T = regular_transformation(s, a, 6, meromorphic=True)
    assert T is not None and T.m == 3
    assert apply_transformation(a, T).equal_to(s, 6)


def test_float_mode_frobenius():
    e = fixture("b1c").to_float()
    d = frobenius(e, N)
    assert d.epsilon == 1 and iszero(d.lambda1 - 1, 1e-12)
