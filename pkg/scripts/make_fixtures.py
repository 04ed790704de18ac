"""Regenerate the JSON fixtures shipped in src/lode/fixtures."""
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from lode.jets import INF, Jet, exact, scalar_to_json  # noqa: E402
from lode.lde import Lde, PointTransformation, apply_transformation  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "lode" / "fixtures"
N = 10


def coeffs(j: Jet, n: int = N) -> list:
    return [scalar_to_json(j[k]) for k in range(0, n + 1)]


def delta_doc(e: Lde, note: str, **extra) -> dict:
    return {"form": "delta", "nu": e.nu, "p": coeffs(e.p), "q": coeffs(e.q), "order": N, "mode": "EXACT", "note": note, **extra}


def factored_doc(nu, a1: Jet, a2: Jet, note: str, **extra) -> dict:
    return {
        "form": "factored",
        "nu": nu,
        "alpha1": coeffs(a1),
        "alpha2": coeffs(a2),
        "order": N,
        "mode": "EXACT",
        "note": note,
        **extra,
    }


def const(v):
    return Jet.const(exact(v), N)


def main() -> None:
    x = Jet.x(N)
    one = const(1)
    docs = {}
    docs["b1a"] = factored_doc(0, const("1/2"), const(0), "B1a, lambda1 = 1/2, lambda2 = 0")
    docs["b1a_resonant"] = factored_doc(0, const(2), const(0), "B1a, lambda1 = 2, lambda2 = 0, trivial monodromy")
    docs["b1b"] = factored_doc(0, const("1/3"), const("1/3"), "B1b, lambda = 1/3")
    docs["b1c"] = factored_doc(0, const(1), -x / (one - x), "B1c, lambda1 = 1, lambda2 = 0, k = 1")
    docs["b1d"] = factored_doc(0, const(1), -x, "B1d, lambda1 = 1, lambda2 = 0, k = 1")
    b1a = Lde.from_factored(0, const("1/2"), const(0))
    shifted = apply_transformation(b1a, PointTransformation(Jet.x(INF), Jet.const(exact(1), INF), 3))
    docs["b1a_shift3"] = delta_doc(shifted, "B1a transformed by y -> x^3 y")

    def irreg(nu, l1, l2):
        r = l2 - l1
        dlog = r.delta(nu) / r
        s = l1 + l2
        return Lde(nu, (s + dlog).truncate(N), (-(l1 * l2) + s.delta(nu) / 2 - s * dlog / 2).truncate(N))

    docs["irregnormalform_nu1"] = delta_doc(irreg(1, const(0), one + x / 2), "normal form, lambda1 = 0, lambda2 = 1 + x/2")
    docs["irregnormalform_nu2"] = delta_doc(
        irreg(2, x, one + x + x * x / 3), "normal form, lambda1 = x, lambda2 = 1 + x + x^2/3"
    )
    mu = exact("1/4")
    docs["reduciblenf1"] = factored_doc(1, -(one + x * mu) / 2, (one + x * mu) / 2, "reducible, lambda2 - lambda1 = 1 + x/4")
    docs["reduciblenf2"] = factored_doc(1, const(0), one - x - x * x, "reducible, mu = -1, non-diagonalizable monodromy")
    docs["lt_nf_nu1"] = delta_doc(Lde(1, Jet.zero(N), x / 4 - x * x * exact("3/16")), "resonant normal form, nu = 1, P = 0")
    x4 = Jet.monomial(exact(1), 4, N)
    docs["lt_nf_nu2"] = delta_doc(Lde(2, Jet.zero(N), x / 4 - x4 * exact("7/16")), "resonant normal form, nu = 2, P = 0")
    c = exact(1)
    a2 = one + x + x * x + (x**3 * c) / (one + x * c)
    docs["example_lt1"] = factored_doc(2, one, a2, "degenerate rank two example, c = 1")
    nf1 = irreg(1, const(0), one + x / 2)
    docs["irreg_nu1_stokes"] = delta_doc(
        nf1, "normal form with trivial Stokes data", stokes={"multipliers": [[0, 0], [0, 0]], "mu": ["1/2", 0]}
    )
    OUT.mkdir(parents=True, exist_ok=True)
    for name, doc in docs.items():
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
