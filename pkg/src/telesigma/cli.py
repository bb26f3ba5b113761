"""Command-line interface: ``telesigma {analyze,equations,expand,schur,verify}``.

Reports go to stdout (text or canonical JSON), logging to stderr.
Exit status: 0 success, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .curve import CurveError, build_curve, kappa_support
from .degenerate import (
    Verification,
    degenerate_sigma,
    prime_at_infinity,
    prime_degenerate,
    verify_addition,
    verify_restriction,
    verify_th51,
    verify_th52,
    verify_th61,
    z_ring_for,
)
from .expansion import homogeneity_audit, solve_x_series
from .schur import lambda_constants, schur_t
from .semigroup import FIXTURES, SemigroupError, parse_sequence, semigroup
from .serialize import dumps, fraction_str, parse_fraction, poly_to_json, series_to_json

log = logging.getLogger("telesigma")

# check names accepted by ``verify --theorem``; the numeric keys are aliases
CHECKS = {
    "5.1": "leading-schur",
    "5.2": "difference",
    "5.3": "prime",
    "5.4": "addition",
    "6.1": "product",
}
CHECK_NAMES = sorted(set(CHECKS.values()))


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    curve: tuple[int, ...] = ()
    order: int = 25
    kappa: str = "zero"
    output: str = "text"
    jobs: int = 1
    check: str | None = None
    n: int | None = None
    k: int | None = None
    partition: tuple[int, ...] = ()
    all_fixtures: bool = False


def _kappa_arg(value: str):
    if value in ("zero", "symbolic"):
        return value
    path = Path(value)
    if not path.exists():
        raise InputError(f"kappa must be 'zero', 'symbolic' or a JSON file, got {value!r}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{value}: not valid JSON ({e})") from None
    if not isinstance(data, dict):
        raise InputError(f"{value}: expected a JSON object of kappa names to rationals")
    try:
        return {k: parse_fraction(v) for k, v in data.items()}
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"{value}: {e}") from None


# -- commands ----------------------------------------------------------------


def cmd_analyze(cfg: RunConfig):
    sg = semigroup(cfg.curve)
    rep = sg.report()
    rep["l_rows"] = {str(i): list(r) for i, r in sg.l_rows.items()}
    rep["nongaps"] = list(sg.nongaps(sg.genus + 1))
    text = [
        f"a = {sg.a}  d = {sg.d}",
        f"genus {sg.genus}, gaps {sg.gaps}",
        f"partition {sg.partition}",
        f"Frobenius {rep['frobenius']} (bound {rep['brauer_bound']})",
    ]
    return rep, "\n".join(text), True


def cmd_equations(cfg: RunConfig):
    sg = semigroup(cfg.curve)
    curve = build_curve(sg, _kappa_arg(cfg.kappa))
    names = [f"x{k}" for k in range(1, sg.m + 1)]
    eqs = {}
    for i in range(2, sg.m + 1):
        terms = []
        for e, c in curve.F(i).sorted_terms(sg.a):
            terms.append({"exponent": list(e), "monomial": {names[k]: n for k, n in enumerate(e) if n}, "coeff": poly_to_json(c)})
        eqs[f"F{i}"] = {
            "text": curve.equation_text(i),
            "terms": terms,
            "kappa_support": [list(j) for j in kappa_support(sg, i)],
        }
    rep = {"curve": list(sg.a), "kappa": curve.kappa_mode, "equations": eqs, "phi": curve.phi(sg.genus + 1).names()}
    return rep, "\n".join(curve.equation_text(i) for i in range(2, sg.m + 1)), True


def cmd_expand(cfg: RunConfig):
    sg = semigroup(cfg.curve)
    curve = build_curve(sg, _kappa_arg(cfg.kappa))
    t = time.perf_counter()
    exp = solve_x_series(curve, cfg.order)
    summary = exp.summary()
    rep = {
        "curve": list(sg.a),
        "order": cfg.order,
        "kappa": curve.kappa_mode,
        "x_series": [series_to_json(s) for s in exp.x_series],
        "du_series": [series_to_json(s) for s in exp.du_series],
        "b_matrix": [[poly_to_json(b) for b in row] for row in exp.b_matrix()],
        "c_series": [poly_to_json(c) for c in exp.c_series()],
        "residual_check": summary,
    }
    ok = summary["residuals_vanish"]
    if curve.kappa_mode == "symbolic":
        audit = homogeneity_audit(exp)
        rep["homogeneity"] = {"checked": audit.checked, "failures": audit.failures}
        ok = ok and audit.ok
    rep["seconds"] = round(time.perf_counter() - t, 3)
    lines = [f"x{k} = {s}" for k, s in enumerate(exp.x_series, start=1)]
    lines += [f"du_{w}/dz = {s}" for w, s in zip(sg.gaps, exp.du_series)]
    lines.append("residuals vanish" if summary["residuals_vanish"] else "RESIDUALS DO NOT VANISH")
    return rep, "\n".join(lines), ok


def cmd_schur(cfg: RunConfig):
    if cfg.partition:
        lam = cfg.partition
    elif cfg.curve:
        lam = semigroup(cfg.curve).partition.parts
    else:
        raise InputError("schur needs --partition or --curve")
    try:
        C = lambda_constants(lam)
    except ValueError as e:
        raise InputError(str(e)) from None
    s = schur_t(lam)
    rep = {"partition": list(lam), "schur_t": poly_to_json(s), "schur_t_text": str(s), "constants": C.as_dict()}
    table = [
        f"s_{C.partition}(t) = {s}",
        f"w = {C.w}",
        "N = " + ", ".join(map(str, C.N)),
        f"N'_1 = {C.N_prime}",
        "c' = " + ", ".join(fraction_str(c) for c in C.c_prime),
        f"c~ = {fraction_str(C.c_tilde)}",
    ]
    return rep, "\n".join(table), True


# -- verification ------------------------------------------------------------


def _prime_check(sigma):
    """Antisymmetry of the prime function and its value at infinity."""
    ring = z_ring_for(["z1", "z2"])
    e12 = prime_degenerate(sigma, "z1", "z2", ring)
    e21 = prime_degenerate(sigma, "z2", "z1", ring)
    z1, z2 = ring.gens()
    g = sigma.genus
    return Verification(
        "prime",
        sigma.semigroup.a,
        {},
        {
            "antisymmetry": e12 + e21,
            "closed_form": e12 - (z1 * z2) ** (g - 1) * (z1 - z2),
            "at_infinity": prime_at_infinity(sigma, "z1", ring) - z1 ** g,
        },
    )


def run_check(curve: tuple[int, ...], check: str, param: int | None) -> dict:
    """One verification task; pure, so it can run in a worker process."""
    t = time.perf_counter()
    sigma = degenerate_sigma(curve)
    if check == "leading-schur":
        ks = [param] if param else range(1, sigma.genus + 1)
        results = [verify_th51(sigma, k) for k in ks] + [verify_restriction(sigma, k) for k in ks]
    elif check == "difference":
        results = [verify_th52(sigma)]
    elif check == "prime":
        results = [_prime_check(sigma)]
    elif check == "addition":
        results = [verify_addition(sigma, param)]
    elif check == "product":
        results = [verify_th61(sigma, param)]
    else:
        raise InputError(f"unknown check {check!r}")
    return {
        "key": [list(curve), check, param],
        "status": "verified" if all(r.ok for r in results) else "failed",
        "results": [r.as_dict() for r in results],
        "timing": round(time.perf_counter() - t, 3),
    }


def fixture_tasks(max_points: int = 7):
    """The default matrix: every check on every fixture, n = 1..min(g + 2, max_points)."""
    tasks = []
    for a in FIXTURES:
        g = semigroup(a).genus
        tasks += [(a, "leading-schur", None), (a, "difference", None), (a, "prime", None)]
        for n in range(1, min(g + 2, max_points) + 1):
            tasks += [(a, "addition", n), (a, "product", n)]
    return tasks


def cmd_verify(cfg: RunConfig):
    if cfg.all_fixtures:
        tasks = fixture_tasks()
    else:
        if not cfg.curve:
            raise InputError("verify needs --curve or --all-fixtures")
        semigroup(cfg.curve)
        check = cfg.check or "addition"
        param = cfg.k if check == "leading-schur" else cfg.n
        if check in ("addition", "product") and param is None:
            raise InputError(f"check {check!r} needs --n")
        if param is not None and param < 1:
            raise InputError("--n/--k must be positive")
        g = semigroup(cfg.curve).genus
        if check == "leading-schur" and param is not None and param > g:
            raise InputError(f"--k must lie in 1..{g}")
        tasks = [(tuple(cfg.curve), check, param)]
    t = time.perf_counter()
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(run_check, *zip(*tasks)))
    else:
        results = [run_check(*task) for task in tasks]
    results.sort(key=lambda r: json.dumps(r["key"]))
    ok = all(r["status"] == "verified" for r in results)
    rep = {
        "status": "verified" if ok else "failed",
        "tasks": results,
        "timing": round(time.perf_counter() - t, 3),
    }
    lines = []
    for r in results:
        a, check, param = r["key"]
        label = f"{','.join(map(str, a))} {check}" + (f" n={param}" if param else "")
        lines.append(f"{r['status']:8s} {label} ({r['timing']}s)")
    return rep, "\n".join(lines), ok


COMMANDS = {
    "analyze": cmd_analyze,
    "equations": cmd_equations,
    "expand": cmd_expand,
    "schur": cmd_schur,
    "verify": cmd_verify,
}


def _sequence(text: str) -> tuple[int, ...]:
    try:
        seq = parse_sequence(text)
    except SemigroupError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    if not seq:
        raise argparse.ArgumentTypeError("empty sequence")
    return seq


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="telesigma", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, curve_positional=False):
        if curve_positional:
            p.add_argument("curve_pos", nargs="?", type=_sequence, metavar="CURVE")
        p.add_argument("--curve", type=_sequence, help="generator sequence, e.g. 4,6,5")
        p.add_argument("--output", choices=("text", "json"), default="text")
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("analyze", help="semigroup data")
    common(p, curve_positional=True)
    for name, helptext in (("equations", "defining equations"), ("expand", "local expansions at infinity")):
        p = sub.add_parser(name, help=helptext)
        common(p, curve_positional=True)
        p.add_argument("--kappa", default="zero", help="zero, symbolic, or a JSON file of kappa values")
        p.add_argument("--order", type=int, default=25)
    p = sub.add_parser("schur", help="Schur function and partition constants")
    common(p)
    p.add_argument("--partition", type=_sequence)
    p = sub.add_parser("verify", help="exact identities at kappa = 0")
    common(p)
    p.add_argument("--theorem", "--check", dest="check", choices=sorted(CHECKS) + CHECK_NAMES)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--all-fixtures", action="store_true")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    curve = getattr(ns, "curve", None) or getattr(ns, "curve_pos", None) or ()
    check = getattr(ns, "check", None)
    return RunConfig(
        command=ns.command,
        curve=tuple(curve),
        order=getattr(ns, "order", 25),
        kappa=getattr(ns, "kappa", "zero"),
        output=ns.output,
        jobs=max(1, ns.jobs),
        check=CHECKS.get(check, check),
        n=getattr(ns, "n", None),
        k=getattr(ns, "k", None),
        partition=tuple(getattr(ns, "partition", None) or ()),
        all_fixtures=getattr(ns, "all_fixtures", False),
    )


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.command != "verify" and cfg.command != "schur" and not cfg.curve:
        log.error("a curve is required")
        return 2
    if cfg.order < 1:
        log.error("--order must be positive")
        return 2
    try:
        rep, text, ok = COMMANDS[cfg.command](cfg)
    except (SemigroupError, CurveError, InputError) as e:
        log.error("%s", e)
        return 2
    out.write((dumps(rep) if cfg.output == "json" else text) + "\n")
    return 0 if ok else 1


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, stream=sys.stderr, format="%(levelname)s: %(message)s")
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
