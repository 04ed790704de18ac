import pytest

from helpers import const, fixture
from lode.errors import DegenerateInput, UndecidableWithoutStokes
from lode.jets import Jet, exact
from lode.lde import PointTransformation, apply_transformation
from lode.stokes import StokesCollection
from lode.symmetry import (
    SymmetryGenerator,
    bracket,
    in_span,
    is_formal_normal_form,
    pullback_generator,
    scaling,
    symmetry_algebra,
    verify_symmetry,
    vector_field,
)


def test_scaling_is_always_a_symmetry():
    for name in ["b1a", "b1c", "irregnormalform_nu1", "lt_nf_nu2", "example_lt1"]:
        assert verify_symmetry(fixture(name), scaling())


def test_euler_field_on_b1a_only():
    # x d/dx preserves the Euler equation but not B1c
    Y = SymmetryGenerator(const(1, 10))
    assert verify_symmetry(fixture("b1a"), Y)
    assert not verify_symmetry(fixture("b1c"), Y)


def test_explicit_f_must_match():
    e = fixture("b1a")
    assert verify_symmetry(e, vector_field(Jet.zero(10), 1))
    assert verify_symmetry(e, vector_field(const(1, 10), 0))
    assert not verify_symmetry(e, vector_field(const(1, 10), Jet.x(10)))


@pytest.mark.parametrize(
    "name,case,dim",
    [
        ("b1a", "1a", 2),
        ("b1b", "1a", 2),
        ("b1c", "1c", 2),
        ("b1a_resonant", "1b", 3),
        ("irregnormalform_nu1", "2a", 2),
        ("irregnormalform_nu2", "2a", 2),
        ("lt_nf_nu1", "3", 1),
    ],
)
def test_algebra_cases(name, case, dim):
    e = fixture(name)
    A = symmetry_algebra(e)
    assert (A.case, A.dimension) == (case, dim)
    for Y in A.generators:
        assert verify_symmetry(e, Y, N=6)


def test_algebra_closed_under_bracket():
    e = fixture("b1a_resonant")
    A = symmetry_algebra(e)
    basis = [Y.h for Y in A.generators[1:]]
    for Y1 in A.generators:
        for Y2 in A.generators:
            B = bracket(Y1, Y2, e)
            assert verify_symmetry(e, B, N=5)
            assert in_span(B.h.truncate(5), basis)


def test_undecidable_without_stokes():
    with pytest.raises(UndecidableWithoutStokes):
        symmetry_algebra(fixture("reduciblenf1"))


def test_degenerate_rejected():
    with pytest.raises(DegenerateInput):
        symmetry_algebra(fixture("example_lt1"))


def test_stokes_decides_case():
    e = fixture("reduciblenf1")
    A = symmetry_algebra(e, stokes=StokesCollection(1, (0, 0)))
    assert (A.case, A.dimension) == ("2a", 2)
    B = symmetry_algebra(e, stokes=[0, 1])
    assert (B.case, B.dimension) == ("2b", 1)


def test_formal_normal_form_detection():
    assert is_formal_normal_form(fixture("irregnormalform_nu1"))
    assert not is_formal_normal_form(fixture("reduciblenf1"))


def test_pullback_generator():
    e = fixture("b1a_resonant")
    T = PointTransformation(Jet.x(12) + Jet.monomial(exact("1/2"), 2, 12), const(1, 11))
    e1 = apply_transformation(e, T)
    for Y in symmetry_algebra(e).generators[1:]:
        assert verify_symmetry(e1, pullback_generator(Y, T, 0), N=5)


def test_generator_json():
    js = scaling().to_json()
    assert js["label"] == "y d/dy" and js["h"] == [] and js["c"] == ["2", "0"]
