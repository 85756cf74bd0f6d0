"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or input
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import io as isoio
from .errors import IsoheatError, NumericalFailure
from .fractal import (
    DEFAULT_WINDOWS,
    SelfSimilarBand,
    band_heat_content,
    band_heat_trace,
    log_coefficients,
    log_grid,
    renewal_remainder,
)
from .geometry import polygon_invariants
from .heatfun import content_coefficients, default_fit_grid, fit_small_time, heat_content, heat_trace
from .reports import CLAIMS, ReportSpec, UnknownClaim, run_report
from .spectra import enumerate_modes, first_eigenvalues
from .sturm.flows import dQ_xi_first_order, dQ_xi_series, xi_flow
from .sturm.potential import Potential
from .sturm.solver import dirichlet_eigen, heat_content_q

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- shared plumbing -------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, times: bool = True) -> None:
    p.add_argument("--input", help="JSON file (or inline JSON) describing the domain, band or potential")
    p.add_argument("--tol", type=float, default=None, help="absolute error budget")
    p.add_argument("--max-modes", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write output here instead of stdout")
    if times:
        p.add_argument("--t", type=float, action="append", help="time (repeatable)")
        p.add_argument("--t-min", type=float)
        p.add_argument("--t-max", type=float)
        p.add_argument("--t-steps", type=int)


def _load(args) -> Any:
    if not args.input:
        raise UsageError("--input is required")
    text = args.input if args.input.lstrip().startswith("{") else Path(args.input).read_text(encoding="utf-8")
    try:
        return isoio.load_input(json.loads(text))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"malformed input: {exc}") from exc


def _times(args, default: Sequence[float] | None = None) -> np.ndarray:
    if args.t:
        return np.asarray(args.t, dtype=float)
    if args.t_min is not None or args.t_max is not None or args.t_steps is not None:
        if None in (args.t_min, args.t_max, args.t_steps):
            raise UsageError("--t-min, --t-max and --t-steps go together")
        if args.t_steps < 1 or not 0 < args.t_min <= args.t_max:
            raise UsageError("need 0 < t-min <= t-max and t-steps >= 1")
        return np.geomspace(args.t_min, args.t_max, args.t_steps)
    if default is None:
        raise UsageError("give --t or --t-min/--t-max/--t-steps")
    return np.asarray(default, dtype=float)


def _emit(args, payload: Any, header: Sequence[str] | None = None, rows=None) -> None:
    if args.format == "csv":
        if header is None:
            raise UsageError("this command has no CSV form; use --format json")
        text = isoio.csv_text(header, rows)
    else:
        text = isoio.dumps(payload)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _heat_rows(values) -> tuple[list[dict], list[str], list[tuple]]:
    header = ["t", "value", "tail_bound", "modes_used"]
    dicts = [v.to_dict() for v in values]
    return dicts, header, [(d["t"], d["value"], d["tail_bound"], d["modes_used"]) for d in dicts]


# -- subcommands -------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    obj = _load(args)
    count = args.max_modes or 20
    if isinstance(obj, Potential):
        pairs = dirichlet_eigen(obj, count, functions=False)
        rows = [(p.index, p.lam, p.integral) for p in pairs]
        payload = [{"j": j, "lambda": lam, "integral": h} for j, lam, h in rows]
        _emit(args, payload, ["j", "lambda", "integral"], rows)
        return EXIT_OK
    if isinstance(obj, SelfSimilarBand):
        raise UsageError("spectrum takes a domain or a potential, not a band")
    lam = first_eigenvalues(obj, count)
    stream = enumerate_modes(obj, float(lam[-1]) * (1 + 1e-12))
    modes = list(stream)[:count]
    rows = [(m.lam, m.coeff_sq, m.component, m.idx1, m.idx2, m.parity) for m in modes]
    header = ["lambda", "coeff_sq", "component", "idx1", "idx2", "parity"]
    _emit(args, [dict(zip(header, r)) for r in rows], header, rows)
    return EXIT_OK


def cmd_heat_trace(args) -> int:
    obj = _load(args)
    eps = args.tol or 1e-12
    ts = _times(args)
    if isinstance(obj, SelfSimilarBand):
        values = [band_heat_trace(obj, t, eps) for t in ts]
    elif isinstance(obj, Potential):
        raise UsageError("heat-trace is defined for domains and bands")
    else:
        values = [heat_trace(obj, t, eps) for t in ts]
    _emit(args, *_heat_rows(values))
    return EXIT_OK


def cmd_heat_content(args) -> int:
    obj = _load(args)
    eps = args.tol or 1e-12
    ts = _times(args)
    if isinstance(obj, SelfSimilarBand):
        values = [band_heat_content(obj, t, eps) for t in ts]
    elif isinstance(obj, Potential):
        values = [heat_content_q(obj, t, eps) for t in ts]
    else:
        values = [heat_content(obj, t, eps) for t in ts]
    _emit(args, *_heat_rows(values))
    return EXIT_OK


def cmd_fit(args) -> int:
    obj = _load(args)
    if isinstance(obj, (SelfSimilarBand, Potential)):
        raise UsageError("fit takes a domain")
    ts = _times(args, default_fit_grid())
    fit = fit_small_time(obj, ts, eps=args.tol or 1e-13)
    formula = content_coefficients(polygon_invariants(obj))
    payload = {"fit": fit.to_dict(), "formula": formula.to_dict(), "t_grid": ts}
    rows = [("fit", fit.b0, fit.b1, fit.b2), ("formula", formula.b0, formula.b1, formula.b2)]
    _emit(args, payload, ["source", "b0", "b1", "b2"], rows)
    return EXIT_OK


def cmd_band(args) -> int:
    obj = _load(args)
    if not isinstance(obj, SelfSimilarBand):
        raise UsageError("band takes a band description")
    eps = args.tol or 1e-9
    lo, hi = DEFAULT_WINDOWS[args.kind]
    ts = _times(args, log_grid(obj, lo, hi))
    rr = renewal_remainder(obj, args.kind, ts, eps=eps)
    if args.format == "csv":
        text = rr.to_csv()
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    payload = {
        "kind": args.kind,
        "alpha": obj.alpha,
        "area": obj.area,
        "boundary_length": obj.boundary_length,
        "log_coefficients": log_coefficients(obj),
        "max_residual": float(np.abs(rr.residual).max()),
        "max_forcing": float(np.abs(rr.forcing).max()),
        "fourier": rr.fourier_summary(),
        "samples": [{"t": t, "value": v, "residual": r} for t, v, r in zip(rr.t, rr.value, rr.residual)],
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_sturm(args) -> int:
    if args.task == "xi-flow":
        if args.n is None or args.s is None:
            raise UsageError("xi-flow needs --n and --s")
        st = xi_flow(args.n, args.s)
        J = args.max_modes or max(args.n + 1, 5)
        pairs = dirichlet_eigen(st.q, J, functions=False)
        target = st.contract(J)
        rows = [(p.index, p.lam, float(target[p.index - 1]), p.integral) for p in pairs]
        payload = {
            "n": st.n,
            "s": st.s,
            "steps": [{"s": r.s, "h": r.h, "drift": r.drift, "accepted": r.accepted} for r in st.log],
            "eigen": [{"j": j, "lambda": lam, "target": tg, "integral": h} for j, lam, tg, h in rows],
            "potential": st.q.to_dict(),
        }
        _emit(args, payload, ["j", "lambda", "target", "integral"], rows)
        return EXIT_OK
    if args.task == "dq-xi":
        if args.n is None:
            raise UsageError("dq-xi needs --n")
        rows = []
        for t in _times(args):
            series = dQ_xi_series(args.n, t)
            rows.append((float(t), series.value, dQ_xi_first_order(args.n, t), series.approximate))
        header = ["t", "series", "first_order", "approximate"]
        _emit(args, [dict(zip(header, r)) for r in rows], header, rows)
        return EXIT_OK
    # eigen
    obj = _load(args)
    if not isinstance(obj, Potential):
        raise UsageError("sturm eigen takes a potential")
    pairs = dirichlet_eigen(obj, args.max_modes or 10, tol=args.tol, functions=False)
    rows = [(p.index, p.lam, p.integral) for p in pairs]
    _emit(args, [{"j": j, "lambda": lam, "integral": h} for j, lam, h in rows], ["j", "lambda", "integral"], rows)
    return EXIT_OK


def _parse_overrides(items: Sequence[str] | None) -> dict[str, float]:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects name=value, got {item!r}")
        out[name.strip()] = float(value)
    return out


def cmd_report(args) -> int:
    claims = CLAIMS if args.claim == "all" else (args.claim,)
    overrides = _parse_overrides(args.set)
    results = []
    for claim in claims:
        try:
            results.append(run_report(ReportSpec(claim, overrides, args.timing)))
        except UnknownClaim as exc:
            raise UsageError(str(exc)) from exc
    if args.format == "csv":
        rows = [(r.claim, c.name, c.value, c.expected, c.tol, c.passed) for r in results for c in r.checks]
        _emit(args, None, ["claim", "name", "value", "expected", "tol", "pass"], rows)
    else:
        payload = results[0].to_dict() if len(results) == 1 else [r.to_dict() for r in results]
        _emit(args, payload)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isoheat", description="Heat traces, heat contents and isospectral checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="lowest eigenvalues with heat-content weights")
    _add_common(p, times=False)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("heat-trace", help="Z(t) with certified truncation")
    _add_common(p)
    p.set_defaults(func=cmd_heat_trace)

    p = sub.add_parser("heat-content", help="Q(t) with certified truncation")
    _add_common(p)
    p.set_defaults(func=cmd_heat_content)

    p = sub.add_parser("fit", help="small-time fit of Q against 1, t^1/2, t")
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("band", help="renewal remainders of a self-similar band")
    _add_common(p)
    p.add_argument("--kind", choices=("trace", "content"), default="trace")
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("sturm", help="1-D Schroedinger operators")
    _add_common(p)
    p.add_argument("task", choices=("eigen", "xi-flow", "dq-xi"))
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=float)
    p.set_defaults(func=cmd_sturm)

    p = sub.add_parser("report", help="reproduce a claim and check it")
    p.add_argument("claim", help=f"one of: all, {', '.join(CLAIMS)}")
    p.add_argument("--set", action="append", metavar="NAME=TOL", help="override a check tolerance")
    p.add_argument("--timing", action="store_true", help="include runtime_ms (breaks byte-identical output)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"isoheat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalFailure, RuntimeError, FloatingPointError) as exc:
        print(f"isoheat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (IsoheatError, ValueError, OSError) as exc:
        print(f"isoheat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
