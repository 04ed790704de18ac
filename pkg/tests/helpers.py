"""Shared builders and random generators for the test suite."""
from __future__ import annotations

import json
import pathlib
import random
from fractions import Fraction

from lode.cli import parse_equation
from lode.jets import INF, Jet, exact, iszero
from lode.lde import Lde, PointTransformation

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "src" / "lode" / "fixtures"


def fixture_path(name: str) -> pathlib.Path:
    return FIXTURES / f"{name}.json"


def load(name: str):
    return parse_equation(fixture_path(name).read_text(), None, None, name)


def fixture(name: str) -> Lde:
    return load(name).equation


def const(v, N: int = INF) -> Jet:
    return Jet.const(exact(v), N)


def rand_rat(rng: random.Random, size: int = 3) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.choice((1, 2, 3)))


def rand_scalar(rng: random.Random, complex_: bool = False):
    return exact(rand_rat(rng), rand_rat(rng) if complex_ else 0)


def rand_jet(rng: random.Random, N: int, val: int = 0, lead_nonzero: bool = False, complex_: bool = False) -> Jet:
    cs = [rand_scalar(rng, complex_) for _ in range(val, N + 1)]
    if lead_nonzero and iszero(cs[0]):
        cs[0] = exact(rng.choice((1, -1, 2, Fraction(1, 2))))
    return Jet(val, cs, N, True)


def rand_transformation(rng: random.Random, N: int, m: int = 0) -> PointTransformation:
    phi = rand_jet(rng, N + 1, 1, lead_nonzero=True)
    t = rand_jet(rng, N, 0, lead_nonzero=True)
    return PointTransformation(phi, t, m)


def rand_lde(rng: random.Random, nu: int, N: int) -> Lde:
    """Random equation of minimal rank nu."""
    while True:
        p, q = rand_jet(rng, N), rand_jet(rng, N)
        if nu == 0 or not (iszero(p[0]) and iszero(q[0]) and iszero(q[1])):
            return Lde(nu, p, q)


def rand_irregular_nonres(rng: random.Random, nu: int, N: int) -> Lde:
    """Random non-resonant irregular equation of rank nu with Delta(0) a rational 2nu-th power."""
    p, q = rand_jet(rng, N), rand_jet(rng, N)
    p0 = p[0]
    s = exact(rng.choice((1, 2, Fraction(1, 2), Fraction(3, 2))) ** max(nu, 1))
    q0 = (s * s - p0 * p0) / 4
    q = q + Jet.const(q0 - q[0], N)
    return Lde(nu, p, q)


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)
