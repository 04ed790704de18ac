"""The ``lode`` command line front end."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .classify import (
    Kind,
    classify,
    formal_equivalence,
    formal_invariants,
    formal_normal_form,
    invariant_to_json,
    working_order,
)
from .errors import (
    DegenerateInput,
    DivergentTerm,
    LodeError,
    PoleOnPath,
    ResidualTooLarge,
    ToleranceNotMet,
    UndecidableWithoutStokes,
)
from .jets import DEFAULT_TOL, INF, Jet, coerce, exact, scalar_to_json
from .lde import Lde, PointTransformation

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DEGENERATE = 2
EXIT_UNDECIDABLE = 3
EXIT_NUMERIC = 4


class InputError(Exception):
    """Malformed equation document; carries a line and column when known."""

    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(msg + where)


@dataclass
class EquationSpec:
    equation: Lde
    order: int
    exact: bool
    stokes: object = None
    name: str = ""


# -------------------------------------------------------------- parsing


def _scalar(v, ex: bool, where: str):
    try:
        if isinstance(v, list):
            if len(v) != 2:
                raise InputError(f"{where}: complex numbers are [re, im] pairs")
            re, im = v
        else:
            re, im = v, 0
        if ex:
            if isinstance(re, float) or isinstance(im, float):
                raise InputError(f"{where}: float literal in EXACT mode; use a rational string")
            return exact(re, im)
        return complex(float(_num(re)), float(_num(im)))
    except InputError:
        raise
    except LodeError as exc:
        raise InputError(f"{where}: {exc}") from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: bad number {v!r} ({exc})") from None


def _num(v):
    if isinstance(v, str) and "/" in v:
        a, b = v.split("/", 1)
        return float(a) / float(b)
    return v


def _jet(doc: dict, key: str, N: int, ex: bool, laurent: bool = False) -> Jet:
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    coeffs = doc[key]
    if not isinstance(coeffs, list):
        raise InputError(f"{key}: expected a list of coefficients")
    val = doc.get(f"{key}_val", 0)
    if not isinstance(val, int) or (val < 0 and not laurent):
        raise InputError(f"{key}_val: expected a non-negative integer")
    cs = [_scalar(c, ex, f"{key}[{i}]") for i, c in enumerate(coeffs)]
    hi = val + len(cs) - 1
    if hi > N:
        cs = cs[: N - val + 1]
    return Jet(val, cs, N, ex) if cs else Jet.zero(N, ex)


def _locate(text: str, needle: str) -> tuple[int | None, int | None]:
    i = text.find(f'"{needle}"')
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


def parse_equation(text: str, order: int | None = None, mode: str | None = None, name: str = "") -> EquationSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise InputError("the document must be a JSON object", 1, 1)
    try:
        return _build(doc, order, mode, name)
    except InputError as exc:
        if exc.line is None:
            field = str(exc).split(":", 1)[0].split("[", 1)[0].strip("'\" ")
            line, col = _locate(text, field.replace("missing field ", "").strip("'"))
            raise InputError(str(exc), line, col) from None
        raise


def _build(doc: dict, order, mode, name) -> EquationSpec:
    form = doc.get("form")
    if form not in ("raw", "delta", "factored"):
        raise InputError("form: expected one of raw, delta, factored")
    mode = (mode or doc.get("mode") or "EXACT").upper()
    if mode not in ("EXACT", "FLOAT"):
        raise InputError("mode: expected EXACT or FLOAT")
    ex = mode == "EXACT"
    nu = doc.get("nu", 0)
    if not isinstance(nu, int) or nu < 0:
        raise InputError("nu: expected a non-negative integer")
    N = order if order is not None else doc.get("order", working_order(nu))
    if not isinstance(N, int) or N < 1:
        raise InputError("order: expected a positive integer")
    try:
        if form == "delta":
            e = Lde(nu, _jet(doc, "p", N, ex), _jet(doc, "q", N, ex))
        elif form == "factored":
            e = Lde.from_factored(nu, _jet(doc, "alpha1", N, ex), _jet(doc, "alpha2", N, ex))
        else:
            a1 = _jet(doc, "a1", N, ex, laurent=True)
            a0 = _jet(doc, "a0", N, ex, laurent=True)
            e = Lde.from_raw(a1, a0)
    except ValueError as exc:
        raise DegenerateInput(str(exc)) from None
    stokes = None
    if "stokes" in doc:
        from .stokes import StokesCollection

        s = doc["stokes"]
        if not isinstance(s, dict) or "multipliers" not in s:
            raise InputError("stokes: expected an object with multipliers")
        mult = [complex(to_c) for to_c in (_scalar(v, False, f"stokes.multipliers[{i}]") for i, v in enumerate(s["multipliers"]))]
        try:
            stokes = StokesCollection(
                e.nu,
                tuple(mult),
                s.get("variant", "NONRES"),
                _scalar(s.get("mu", 0), False, "stokes.mu"),
            )
        except ValueError as exc:
            raise InputError(f"stokes: {exc}") from None
    return EquationSpec(e, N, ex, stokes, name)


# -------------------------------------------------------------- reports


def jet_json(j: Jet | None, lo: int | None = None, hi: int | None = None):
    if j is None:
        return None
    lo = (j.val if j.coeffs else 0) if lo is None else lo
    hi = j.order if hi is None else hi
    return {"val": lo, "order": hi, "coeffs": [scalar_to_json(j[k]) for k in range(lo, hi + 1)]}


def transformation_json(T: PointTransformation | None, N: int):
    if T is None:
        return None
    return {"phi": jet_json(T.phi, 1, min(N + 1, T.phi.order)), "t": jet_json(T.t, 0, min(N, T.t.order)), "m": T.m}


def equation_json(e: Lde, N: int) -> dict:
    hi = min(N, e.order)
    return {"nu": e.nu, "p": jet_json(e.p, 0, hi), "q": jet_json(e.q, 0, hi)}


def _provenance(spec: EquationSpec, **kw) -> dict:
    out = {"mode": "EXACT" if spec.exact else "FLOAT", "order": spec.order, "jet_tol": None if spec.exact else DEFAULT_TOL}
    out.update(kw)
    return out


def normal_form_report(e: Lde, N: int) -> dict:
    cls = classify(e, None if e.exact else DEFAULT_TOL)
    if cls.kind in (Kind.DEGENERATE, Kind.NON_SINGULAR):
        raise DegenerateInput(f"no normal form for {cls}")
    if cls.regular:
        from .regular import reduce_to_normal_form

        r = reduce_to_normal_form(e, N, None if e.exact else DEFAULT_TOL)
        return {
            "scope": "ANALYTIC",
            "form": r.form,
            "target": equation_json(r.normal_form, N),
            "transformation": transformation_json(r.T, N),
        }
    inv = formal_invariants(e)
    nf = formal_normal_form(inv, N=N + e.nu + 2)
    T = formal_equivalence(e, nf, max(N - e.nu, 1))
    return {
        "scope": "FORMAL",
        "form": "LT-nf" if inv.variant == "RES_NONDEG" else "irregular-normal-form",
        "target": equation_json(nf, N),
        "transformation": transformation_json(T, N),
    }


def classify_report(spec: EquationSpec) -> dict:
    e, N = spec.equation, spec.order
    cls = classify(e, None if e.exact else DEFAULT_TOL)
    rep: dict = {"class": cls.kind.value, "nu": e.nu, "k": cls.k, "notes": []}
    if cls.kind in (Kind.DEGENERATE, Kind.NON_SINGULAR):
        rep["provenance"] = _provenance(spec)
        return rep
    inv = formal_invariants(e)
    rep["formal_invariants"] = invariant_to_json(inv)
    try:
        rep["normal_form"] = normal_form_report(e, N)
    except LodeError as exc:
        rep["normal_form"] = None
        rep["notes"].append(f"normal form: {type(exc).__name__}: {exc}")
    if cls.kind == Kind.IRREGULAR_NONRES:
        from .reduce import reducibility_report

        rep["reducibility"] = reducibility_report(e, spec.stokes).to_json()
    from .symmetry import symmetry_algebra

    try:
        rep["symmetries"] = symmetry_algebra(e, stokes=spec.stokes).to_json()
    except UndecidableWithoutStokes as exc:
        rep["symmetries"] = None
        rep["notes"].append(f"symmetries: {exc}")
    if e.nu == 1 and not cls.regular:
        from .stokes import nu1_invariants

        try:
            rep["analytic_invariants"] = nu1_invariants(e).to_json()
        except LodeError as exc:
            rep["notes"].append(f"analytic invariants: {type(exc).__name__}: {exc}")
    rep["provenance"] = _provenance(spec)
    return rep


def equivalent_report(a: EquationSpec, b: EquationSpec, meromorphic: bool = False) -> dict:
    # witness T with B = apply_transformation(A, T)
    e1, e2 = b.equation, a.equation
    N = min(a.order, b.order)
    T = formal_equivalence(e1, e2, N - e1.nu if e1.nu else N, meromorphic=meromorphic)
    regular = e1.nu == 0
    rep = {
        "verdict": "YES" if T is not None else "NO",
        "scope": "ANALYTIC" if regular else "FORMAL",
        "meromorphic": meromorphic,
        "witness": transformation_json(T, N),
        "provenance": _provenance(a),
    }
    if T is not None and not regular and a.stokes is not None and b.stokes is not None:
        from .stokes import stokes_equivalent

        inv = formal_invariants(e1)
        w = stokes_equivalent(a.stokes, b.stokes, inv.G)
        rep["scope"] = "ANALYTIC"
        rep["verdict"] = "YES" if w is not None else "NO"
        rep["stokes_witness"] = None if w is None else {"c": [w[0].real, w[0].imag], "g": w[1]}
    return rep


def stokes_report(spec: EquationSpec, radius: float, tol: float) -> dict:
    e = spec.equation
    if e.nu == 1:
        from .stokes import nu1_invariants

        rep = {"nu1": nu1_invariants(e, radius, tol).to_json()}
    elif spec.stokes is not None:
        rep = {}
    else:
        raise UndecidableWithoutStokes("analytic invariants are computed only for nu = 1; supply Stokes data")
    if spec.stokes is not None:
        from .reduce import stokes_reducibility

        red, nfe = stokes_reducibility(list(spec.stokes.multipliers))
        rep["collection"] = spec.stokes.to_json()
        rep["reducible"] = red
        rep["normal_form_equivalent"] = nfe
    rep["provenance"] = _provenance(spec, radius=radius, monodromy_tol=tol)
    return rep


def monodromy_report(spec: EquationSpec, radius: float, tol: float) -> dict:
    import numpy as np

    from .stokes import numeric_monodromy

    M = numeric_monodromy(spec.equation, radius, tol=tol)
    return {
        "matrix": [[[z.real, z.imag] for z in row] for row in M.tolist()],
        "trace": [complex(np.trace(M)).real, complex(np.trace(M)).imag],
        "det": [complex(np.linalg.det(M)).real, complex(np.linalg.det(M)).imag],
        "eigenvalues": [[z.real, z.imag] for z in np.linalg.eigvals(M).tolist()],
        "provenance": _provenance(spec, radius=radius, monodromy_tol=tol),
    }


# ---------------------------------------------------------------- prose


def _prose(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        if set(obj) >= {"coeffs", "val"}:
            return [pad + _series_text(obj)]
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_number(v) and not _is_vector(v):
                sub = _prose(v, indent + 1)
                if len(sub) == 1 and isinstance(v, dict) and set(v) >= {"coeffs", "val"}:
                    lines.append(f"{pad}{k}: {sub[0].strip()}")
                else:
                    lines.append(f"{pad}{k}:")
                    lines.extend(sub)
            else:
                lines.append(f"{pad}{k}: {_fmt(v)}")
    elif _is_vector(obj):
        lines.append(pad + _fmt(obj))
    elif isinstance(obj, list):
        for v in obj:
            sub = _prose(v, indent + 1)
            lines.append(f"{pad}-")
            lines.extend(sub)
    else:
        lines.append(pad + _fmt(obj))
    return lines


def _numeric(a) -> bool:
    if isinstance(a, (int, float)):
        return True
    try:
        Fraction(a)
        return True
    except (TypeError, ValueError, ZeroDivisionError):
        return False


def _is_number(v) -> bool:
    return isinstance(v, list) and len(v) == 2 and all(_numeric(a) for a in v)


def _is_vector(v) -> bool:
    if not (isinstance(v, list) and v):
        return False
    return all(_is_number(a) for a in v) or all(isinstance(a, int) and not isinstance(a, bool) for a in v)


def _fmt(v) -> str:
    if _is_number(v):
        re, im = v
        if im in ("0", 0, 0.0):
            return f"{re}"
        im = str(im)
        return f"{re} - {im[1:]}i" if im.startswith("-") else f"{re} + {im}i"
    if isinstance(v, list) and all(_is_number(a) for a in v):
        return "[" + ", ".join(_fmt(a) for a in v) + "]"
    if isinstance(v, list):
        return "[" + ", ".join(str(a) for a in v) + "]"
    return str(v)


def _series_text(j: dict) -> str:
    terms = []
    for k, c in enumerate(j["coeffs"], start=j["val"]):
        s = _fmt(c)
        if s in ("0", "0.0"):
            continue
        terms.append(f"({s}) x^{k}" if k else f"({s})")
    body = " + ".join(terms) if terms else "0"
    return f"{body} + O(x^{j['order'] + 1})"


# ----------------------------------------------------------------- main


def _read(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "<stdin>"
    with open(path, encoding="utf-8") as fh:
        return fh.read(), path


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, UndecidableWithoutStokes):
        return EXIT_UNDECIDABLE
    if isinstance(exc, (ToleranceNotMet, ResidualTooLarge, PoleOnPath, DivergentTerm)):
        return EXIT_NUMERIC
    return EXIT_DEGENERATE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lode", description="Classify singular points of second-order linear ODEs.")
    ap.add_argument("--version", action="version", version=f"lode {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--order", type=int, default=None, help="truncation order N")
        p.add_argument("--mode", choices=["exact", "float"], default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--radius", type=float, default=1.0)

    for name in ("classify", "normal-form", "stokes", "symmetries", "monodromy"):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("files", nargs="+", metavar="FILE")
    p = sub.add_parser("equivalent")
    common(p)
    p.add_argument("--meromorphic", action="store_true")
    p.add_argument("files", nargs=2, metavar="FILE")
    return ap


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    tol = args.tol if args.tol is not None else 1e-8
    try:
        specs = []
        for path in args.files:
            text, name = _read(path)
            try:
                specs.append(parse_equation(text, args.order, args.mode, name))
            except InputError as exc:
                print(f"{name}: {exc}", file=err)
                return EXIT_PARSE
        reports = []
        if args.command == "equivalent":
            reports.append(equivalent_report(specs[0], specs[1], args.meromorphic))
        else:
            for spec in specs:
                if args.command == "classify":
                    rep = classify_report(spec)
                elif args.command == "normal-form":
                    rep = normal_form_report(spec.equation, spec.order)
                    rep["provenance"] = _provenance(spec)
                elif args.command == "stokes":
                    rep = stokes_report(spec, args.radius, tol)
                elif args.command == "symmetries":
                    from .symmetry import symmetry_algebra

                    rep = symmetry_algebra(spec.equation, stokes=spec.stokes).to_json()
                    rep["scope"] = "ANALYTIC"
                    rep["provenance"] = _provenance(spec)
                else:
                    rep = monodromy_report(spec, args.radius, tol)
                rep = {"file": spec.name, **rep}
                reports.append(rep)
    except OSError as exc:
        print(f"lode: {exc}", file=err)
        return EXIT_PARSE
    except (LodeError, ValueError, ZeroDivisionError) as exc:
        print(f"lode: {type(exc).__name__}: {exc}", file=err)
        return _exit_code(exc)
    doc = reports[0] if len(reports) == 1 else reports
    if args.json:
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(_prose(doc)) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
