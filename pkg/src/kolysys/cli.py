"""Command line scenario runner.

Exit codes: 0 when every check passes, 1 when some identity fails, 2 for
malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from . import linalg
from .clifford import CliffordContext, pin_lift_semisimple, reflection_matrix
from .flagcoh import compute_kappa
from .kolyvagin import (
    EquivariantModule,
    KolyvaginPolarization,
    check_frobenius,
    check_iteration,
    fixed_space_dim,
    order,
    pairing_transfer,
    sequence_from_module,
    sequence_from_polarization,
    spinor_norm_via_module,
    verify_kolylfun,
)
from .lfun import central_derivative, central_derivative_symbolic, orthogonal_from_lagrangian
from .scalar import format_scalar, parse_scalar

_SCALAR = {"anyOf": [{"type": "string"}, {"type": "integer"}]}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["kolylfun", "kappa", "pin-lift", "selmer-order", "conventions-fuzz"]},
        "name": {"type": "string"},
        "n": {"type": "integer", "minimum": 1, "maximum": 8},
        "r_max": {"type": "integer", "minimum": 0, "maximum": 12},
        "route": {"enum": ["module", "pin"]},
        "F_L": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
        "eigenvalues": {"type": "array", "items": _SCALAR},
        "det": {"enum": [1, -1]},
        "random": {
            "type": "object",
            "required": ["seed"],
            "additionalProperties": False,
            "properties": {"seed": {"type": "integer"}, "bound": {"type": "integer", "minimum": 1}},
        },
        "d": {"type": "integer", "minimum": 2},
        "lambda_override": _SCALAR,
        "q_list": {"type": "array", "items": _SCALAR},
        "fixed_dim": {"type": "integer", "minimum": 0},
        "full_basis": {"type": "boolean"},
        "seed": {"type": "integer"},
        "iters": {"type": "integer", "minimum": 0},
    },
}


class ScenarioError(ValueError):
    """Input that passed the schema but cannot be run."""


# -- helpers ------------------------------------------------------------------


def random_invertible(rng: random.Random, n: int, bound: int) -> np.ndarray:
    while True:
        m = linalg.matrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if linalg.det(m) != 0:
            return m


def _fmt_matrix(m) -> list:
    return [[format_scalar(x) for x in row] for row in np.asarray(m)]


def _row(key, label, lhs, rhs, equal=None) -> dict:
    eq = (lhs == rhs) if equal is None else equal
    return {key: label, "lhs": lhs if isinstance(lhs, str) else format_scalar(lhs),
            "rhs": rhs if isinstance(rhs, str) else format_scalar(rhs), "equal": bool(eq)}


def _parse(x):
    try:
        return parse_scalar(str(x))
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def _lagrangian_matrix(sc: dict, params: dict, n: int) -> np.ndarray:
    if "F_L" in sc and "random" in sc:
        raise ScenarioError("give either F_L or random, not both")
    if "F_L" in sc:
        fl = linalg.matrix([[_parse(x) for x in row] for row in sc["F_L"]])
        if fl.shape != (n, n):
            raise ScenarioError(f"F_L must be {n}x{n}")
        if linalg.det(fl) == 0:
            raise ScenarioError("F_L is singular")
    elif "random" in sc:
        seed = sc["random"]["seed"]
        bound = sc["random"].get("bound", 5)
        fl = random_invertible(random.Random(seed), n, bound)
        params["random"] = {"seed": seed, "bound": bound}
    else:
        raise ScenarioError("need F_L or random")
    params["F_L"] = _fmt_matrix(fl)
    return fl


def _pin_map(sc: dict, params: dict, n: int) -> np.ndarray:
    """Orthogonal F for the Pin route: diagonal on the pairs, optionally one reflection pair."""
    det = sc.get("det", 1)
    if "eigenvalues" in sc:
        eig = [_parse(x) for x in sc["eigenvalues"]]
        need = n - (1 if det == -1 else 0)
        if len(eig) != need:
            raise ScenarioError(f"need {need} eigenvalues")
        if any(a == 0 for a in eig):
            raise ScenarioError("eigenvalues must be nonzero")
        params["eigenvalues"] = [format_scalar(a) for a in eig]
        f = linalg.zeros(2 * n, 2 * n)
        start = 0
        if det == -1:
            f[0, n] = f[n, 0] = Fraction(-1)
            start = 1
        for k, a in enumerate(eig):
            i = start + k
            f[i, i] = a
            f[n + i, n + i] = 1 / a
        params["det"] = det
        return f
    if det == -1:
        raise ScenarioError("det -1 needs eigenvalues")
    return orthogonal_from_lagrangian(_lagrangian_matrix(sc, params, n))


# -- scenario kinds -----------------------------------------------------------


def run_kolylfun(sc: dict) -> dict:
    n = sc.get("n")
    if n is None:
        raise ScenarioError("kolylfun needs n")
    r_max = sc.get("r_max", 2 * n)
    route = sc.get("route", "module")
    params = {"n": n, "r_max": r_max, "route": route}
    ctx = CliffordContext(n)
    lam = None
    details: dict = {}
    if "lambda_override" in sc:
        lam = _parse(sc["lambda_override"])
        params["lambda_override"] = format_scalar(lam)
        details["externally_supplied"] = ["lambda"]
    if route == "module":
        if "det" in sc or "eigenvalues" in sc:
            raise ScenarioError("module route takes F_L, not eigenvalues or det")
        fl = _lagrangian_matrix(sc, params, n)
        src = EquivariantModule.spinor(ctx, fl)
        f = src.F
    else:
        f = _pin_map(sc, params, n)
        if "d" in sc:
            params["d"] = sc["d"]
        try:
            lift = pin_lift_semisimple(ctx, f, sqrt_d=sc.get("d"))
        except ValueError as exc:
            raise ScenarioError(f"no Pin lift: {exc}") from exc
        src = KolyvaginPolarization(ctx, f, lift)
        details["lift"] = lift.serialize()
    rows = [row.as_dict() for row in verify_kolylfun(src, r_max, lam=lam)]
    if "q_list" in sc:
        oracle = []
        for qs in sc["q_list"]:
            q = _parse(qs)
            if q <= 1:
                raise ScenarioError("q must exceed 1")
            for r in range(r_max + 1):
                a, b = central_derivative(f, r), central_derivative_symbolic(f, r, q)
                oracle.append({"q": format_scalar(q), "r": r, "closed_form": format_scalar(a),
                               "symbolic": format_scalar(b), "equal": a == b})
        details["derivative_oracle"] = oracle
    return {"params": params, "rows": rows, "details": details, "row_key": "r"}


def run_kappa(sc: dict) -> dict:
    n = sc.get("n")
    if n is None or n < 2:
        raise ScenarioError("kappa needs n >= 2")
    rep = compute_kappa(n, full_basis=sc.get("full_basis", False))
    from .flagcoh import FlagModel

    m = FlagModel(n)
    sign = (-1) ** n
    e1, h = m.e[1], m.hbar
    rows = [
        _row("check", "gln1", rep.gln1, m.fmt(sign * (e1 + (n - 1) * h))),
        _row("check", "gln2", rep.gln2, m.fmt(sign * (e1 + (n - 2) * h))),
        _row("check", "gln3", rep.gln3, "-1"),
        _row("check", "kappa", rep.kappa, Fraction((-1) ** (n - 1))),
    ]
    details = rep.as_dict()
    return {"params": {"n": n}, "rows": rows, "details": details, "row_key": "check"}


def _engineered_map(n: int, k: int) -> np.ndarray:
    """Orthogonal F on M with ``dim M^{F=1} = k``, built from reflection, identity and generic pairs."""
    if k > 2 * n:
        raise ScenarioError("fixed dimension exceeds dim M")
    refl = k % 2
    ident = k // 2
    if refl + ident > n:
        raise ScenarioError(f"cannot engineer fixed dimension {k} with n = {n}")
    f = linalg.zeros(2 * n, 2 * n)
    for i in range(n):
        if i < refl:
            f[i, n + i] = f[n + i, i] = Fraction(-1)
        elif i < refl + ident:
            f[i, i] = f[n + i, n + i] = Fraction(1)
        else:
            a = Fraction((i + 2) ** 2)
            f[i, i], f[n + i, n + i] = a, 1 / a
    return f


def run_selmer(sc: dict) -> dict:
    n = sc.get("n")
    if n is None:
        raise ScenarioError("selmer-order needs n")
    dims = [sc["fixed_dim"]] if "fixed_dim" in sc else sorted({k for k in (0, 1, 2, 3, 2 * n) if (k % 2) + k // 2 <= n})
    ctx = CliffordContext(n)
    rows = []
    for k in dims:
        f = _engineered_map(n, k)
        lift = pin_lift_semisimple(ctx, f)
        seq = sequence_from_polarization(KolyvaginPolarization(ctx, f, lift), 2 * n)
        rows.append(_row("check", f"fixed_dim={k}", Fraction(order(seq)), Fraction(fixed_space_dim(f))))
    return {"params": {"n": n, "fixed_dims": dims}, "rows": rows, "details": {}, "row_key": "check"}


def run_pin_lift(sc: dict) -> dict:
    n = sc.get("n")
    if n is None:
        raise ScenarioError("pin-lift needs n")
    params: dict = {"n": n}
    f = _pin_map(sc, params, n)
    ctx = CliffordContext(n)
    try:
        lift = pin_lift_semisimple(ctx, f, sqrt_d=sc.get("d"))
    except ValueError as exc:
        raise ScenarioError(f"no Pin lift: {exc}") from exc
    covers = linalg.equal(reflection_matrix(lift), f)
    rows = [
        _row("check", "reflection", "covers F" if covers else "differs", "covers F"),
        _row("check", "spinor_norm", spinor_norm_via_module(lift), Fraction(1)),
    ]
    return {"params": params, "rows": rows, "details": {"lift": lift.serialize()}, "row_key": "check"}


def run_fuzz(sc: dict) -> dict:
    seed = sc.get("seed", 0)
    iters = sc.get("iters", 10)
    rng = random.Random(seed)
    rows = []
    for it in range(iters):
        n = rng.randint(1, 3)
        fl = random_invertible(rng, n, 5)
        c = Fraction(rng.randint(1, 5), rng.randint(1, 5)) * rng.choice([1, -1])
        ctx = CliffordContext(n)
        t = EquivariantModule.spinor(ctx, fl)
        r_max = 2 * n
        seq = sequence_from_module(t, r_max)
        ok_char = check_iteration(seq)[0] and check_frobenius(seq, t.F)[0]
        rows.append(_row("check", f"{it}:characterization", "pass" if ok_char else "fail", "pass"))
        # parity flip on the polarization side: z_r -> -z_r, pairing unchanged
        lift = ctx.module.element_from_operator(t.FT)
        pol = KolyvaginPolarization(ctx, t.F, lift, check=False)
        flip = KolyvaginPolarization(ctx.with_parity(-1), t.F, lift, check=False)
        s1, s2 = sequence_from_polarization(pol, r_max), sequence_from_polarization(flip, r_max)
        neg = all(linalg.equal(-np.asarray(a), np.asarray(b)) for a, b in zip(s1.z, s2.z))
        rows.append(_row("check", f"{it}:parity_flip", "negated" if neg else "not negated", "negated"))
        for r in range(r_max + 1):
            a = pairing_transfer(ctx, t.FT, ctx.module.signs, r)
            b = pairing_transfer(ctx, c * t.FT, ctx.module.signs, r)
            rows.append(_row("check", f"{it}:scaling r={r}", b, c * c * a))
        scaled = EquivariantModule.spinor(ctx, fl, scale=c)
        ok = all(row.equal for row in verify_kolylfun(scaled, r_max))
        rows.append(_row("check", f"{it}:scaled identity", "pass" if ok else "fail", "pass"))
    return {"params": {"seed": seed, "iters": iters}, "rows": rows, "details": {}, "row_key": "check"}


RUNNERS = {
    "kolylfun": run_kolylfun,
    "kappa": run_kappa,
    "pin-lift": run_pin_lift,
    "selmer-order": run_selmer,
    "conventions-fuzz": run_fuzz,
}


# -- reports ------------------------------------------------------------------


def build_report(scenario: dict) -> dict:
    jsonschema.validate(scenario, SCENARIO_SCHEMA)
    result = RUNNERS[scenario["kind"]](scenario)
    rows = result["rows"]
    failures = [r for r in rows if not r["equal"]]
    oracle = result["details"].get("derivative_oracle", [])
    failures_total = len(failures) + sum(1 for o in oracle if not o["equal"])
    return {
        "scenario": scenario.get("name", scenario["kind"]),
        "params": result["params"],
        "rows": rows,
        "summary": {"pass": failures_total == 0, "failures": failures_total},
        "details": result["details"],
    }


def emit_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "csv":
        rows = report["rows"]
        key = "r" if rows and "r" in rows[0] else "check"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([key, "lhs", "rhs", "equal"])
        for row in rows:
            writer.writerow([row[key], row["lhs"], row["rhs"], "true" if row["equal"] else "false"])
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}")


def _run(scenario: dict, fmt: str, out: str | None) -> int:
    try:
        report = build_report(scenario)
    except (jsonschema.ValidationError, ScenarioError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2
    data = emit_report(report, fmt)
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return 0 if report["summary"]["pass"] else 1


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read scenario: {exc}", file=sys.stderr)
        return None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="kolysys", description="Exact verification of Kolyvagin/L-factor identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", help="run a scenario file")
    p.add_argument("scenario")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p = sub.add_parser("kappa", help="compute the commutator constant for GL_n x GL_(n-1)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--full-basis", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p = sub.add_parser("selmer", help="compare order of vanishing with fixed-space dimension")
    p.add_argument("--spec", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p = sub.add_parser("fuzz", help="randomized convention checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0

    if args.command == "verify":
        sc = _load(args.scenario)
        if sc is None:
            return 2
    elif args.command == "kappa":
        sc = {"kind": "kappa", "n": args.n, "full_basis": args.full_basis}
    elif args.command == "selmer":
        sc = _load(args.spec)
        if sc is None:
            return 2
        if isinstance(sc, dict):
            sc.setdefault("kind", "selmer-order")
            if sc["kind"] != "selmer-order":
                print("error: selmer expects a selmer-order scenario", file=sys.stderr)
                return 2
    else:
        sc = {"kind": "conventions-fuzz", "seed": args.seed, "iters": args.iters}
    return _run(sc, args.format, args.out)


if __name__ == "__main__":
    sys.exit(main())
