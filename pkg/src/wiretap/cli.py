"""Command-line interface: ``solve``, ``bounds``, ``verify``, ``profile`` and ``sweep``.

Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .analytic import circle_profile
from .channel import ChannelParams, DiscreteDistribution
from .errors import NumericalError, WiretapError
from .functionals import g_function, g_prime, h_function, xi_function
from .quadrature import DEFAULT_ORDER, gauss_hermite
from .report import SWEEP_COLUMNS, bounds_report, sweep
from .solver import SolverConfig, solve

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 1, 2
ORDER_ENV = "WIRETAP_QUAD_ORDER"
PROFILE_FUNCTIONS = {"g": g_function, "xi": xi_function, "gprime": g_prime, "h": h_function}


class UsageError(Exception):
    """Bad command-line input."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for non-convergence here
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    channel: ChannelParams
    solver: SolverConfig = field(default_factory=SolverConfig)
    quadrature_order: int = DEFAULT_ORDER
    output_path: str | None = None
    format: str = "json"


def _parse_range(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"range must look like lo:hi:n, got {text!r}") from None
    if n < 1 or (n > 1 and not lo < hi):
        raise UsageError(f"range needs lo < hi and n >= 1, got {text!r}")
    return lo, hi, n


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_dist(path: str) -> DiscreteDistribution:
    data = _read_json(path)
    # accept a bare distribution or a saved solve result
    return DiscreteDistribution.from_dict(data.get("distribution", data))


def _run_config(args, need_amp: bool = True) -> RunConfig:
    base = _read_json(args.config) if getattr(args, "config", None) else {}
    unknown = set(base) - {"channel", "solver", "quadrature_order", "output_path", "format"}
    if unknown:
        raise UsageError(f"unknown config key(s): {sorted(unknown)}")
    chan = dict(base.get("channel", {}))
    for key in ("sigma1", "sigma2", "amp"):
        value = getattr(args, key, None)
        if value is not None:
            chan[key] = value
    if not need_amp:
        chan.setdefault("amp", 1.0)
    missing = [k for k in ("sigma1", "sigma2", "amp") if k not in chan]
    if missing:
        raise UsageError(f"missing channel parameter(s): {', '.join('--' + k for k in missing)}")
    solver_opts = dict(base.get("solver", {}))
    if getattr(args, "eps_kkt", None) is not None:
        solver_opts["eps_kkt"] = args.eps_kkt
    if getattr(args, "max_outer_iters", None) is not None:
        solver_opts["max_outer_iters"] = args.max_outer_iters
    if getattr(args, "no_symmetry", False):
        solver_opts["enforce_symmetry"] = False
    order = base.get("quadrature_order", DEFAULT_ORDER)
    if os.environ.get(ORDER_ENV):
        try:
            order = int(os.environ[ORDER_ENV])
        except ValueError:
            raise UsageError(f"{ORDER_ENV} must be an integer, got {os.environ[ORDER_ENV]!r}") from None
    if args.quad_order is not None:
        order = args.quad_order
    return RunConfig(
        channel=ChannelParams.from_dict(chan),
        solver=SolverConfig.from_dict(solver_opts),
        quadrature_order=int(order),
        output_path=getattr(args, "out", None) or base.get("output_path"),
        format=getattr(args, "format", None) or base.get("format", "json"),
    )


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    return repr(value) if isinstance(value, float) else str(value)


def run_solve(args) -> int:
    cfg = _run_config(args)
    result = solve(cfg.channel, cfg.solver, gauss_hermite(cfg.quadrature_order))
    payload = result.to_dict()
    payload["channel"] = cfg.channel.to_dict()
    _emit(_json(payload), cfg.output_path)
    if not result.converged:
        print(f"solver did not converge in {result.outer_iters} iterations (gap {result.kkt.gap:.3g})", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def run_bounds(args, require_dist: bool = False) -> int:
    cfg = _run_config(args)
    if require_dist and not args.dist:
        raise UsageError("verify needs --dist")
    dist = _load_dist(args.dist) if args.dist else None
    if dist is not None:
        dist.check(cfg.channel)
    report = bounds_report(cfg.channel, args.cs, dist, gauss_hermite(cfg.quadrature_order), not args.no_empirical)
    _emit(_json(report.to_dict()), cfg.output_path)
    if require_dist and not report.kkt.is_optimal(cfg.solver.eps_kkt):
        print(f"distribution is not KKT-optimal (gap {report.kkt.gap:.3g})", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def run_profile(args) -> int:
    cfg = _run_config(args)
    dist = _load_dist(args.dist)
    rule = gauss_hermite(cfg.quadrature_order)
    if args.what == "hmod":
        if args.radius is None:
            raise UsageError("--what hmod needs --radius")
        theta, log_mod = circle_profile(dist, cfg.channel, args.radius, samples=args.samples)
        if args.log:
            rows = [(repr(float(t)), repr(float(v))) for t, v in zip(theta, log_mod)]
            _emit(_csv(("theta", "log_modulus"), rows), cfg.output_path)
        else:
            rows = [(repr(float(t)), repr(math.exp(v) if v < 709.0 else math.inf)) for t, v in zip(theta, log_mod)]
            _emit(_csv(("theta", "modulus"), rows), cfg.output_path)
        return EXIT_OK
    if args.range is None:
        raise UsageError(f"--what {args.what} needs --range lo:hi:n")
    lo, hi, n = _parse_range(args.range)
    x = np.linspace(lo, hi, n)
    values = np.atleast_1d(PROFILE_FUNCTIONS[args.what](dist, cfg.channel, x, rule))
    _emit(_csv(("x", "value"), [(repr(float(a)), repr(float(v))) for a, v in zip(x, values)]), cfg.output_path)
    return EXIT_OK


def run_sweep(args) -> int:
    cfg = _run_config(args, need_amp=False)
    lo, hi, n = _parse_range(args.amp_range)
    amps = np.linspace(lo, hi, n).tolist()
    rows = sweep(cfg.channel.sigma1, cfg.channel.sigma2, amps, cfg.solver, cfg.quadrature_order, args.jobs)
    if cfg.format == "json":
        _emit(_json({"units": "nats", "rows": rows}), cfg.output_path)
    else:
        _emit(_csv(SWEEP_COLUMNS, [[_cell(r[c]) for c in SWEEP_COLUMNS] for r in rows]), cfg.output_path)
    bad = [r["A"] for r in rows if not r["converged"]]
    if bad:
        print(f"non-converged instances at A = {bad}", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def _channel_flags(p, amp=True):
    p.add_argument("--sigma1", type=float, help="legitimate receiver noise standard deviation")
    p.add_argument("--sigma2", type=float, help="eavesdropper noise standard deviation")
    if amp:
        p.add_argument("--amp", type=float, help="amplitude constraint A")
    p.add_argument("--config", help="JSON run configuration; flags override it")
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wiretap", description=__doc__.splitlines()[0])
    parser.add_argument("--quad-order", type=int, help=f"Gauss-Hermite order (default {DEFAULT_ORDER}, env {ORDER_ENV})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="compute the optimal input distribution")
    _channel_flags(p)
    p.add_argument("--eps-kkt", type=float)
    p.add_argument("--max-outer-iters", type=int)
    p.add_argument("--no-symmetry", action="store_true", help="do not symmetrize iterates")

    for name, text in (("bounds", "closed-form bounds report"), ("verify", "bounds plus KKT check of --dist")):
        p = sub.add_parser(name, help=text)
        _channel_flags(p)
        p.add_argument("--cs", type=float, help="secrecy capacity plug-in (nats)")
        p.add_argument("--dist", help="distribution or solve-result JSON")
        p.add_argument("--no-empirical", action="store_true", help="skip the modulus-based zero-count bound")

    p = sub.add_parser("profile", help="tabulate a functional as CSV")
    _channel_flags(p)
    p.add_argument("--what", required=True, choices=sorted([*PROFILE_FUNCTIONS, "hmod"]))
    p.add_argument("--dist", required=True)
    p.add_argument("--range", help="lo:hi:n grid for real-line functionals")
    p.add_argument("--radius", type=float, help="circle radius for hmod")
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--log", action="store_true", help="hmod: emit log-modulus")

    p = sub.add_parser("sweep", help="solve and bound a range of amplitudes")
    _channel_flags(p, amp=False)
    p.add_argument("--amp", dest="amp_range", required=True, help="lo:hi:n amplitude grid")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


COMMANDS = {
    "solve": run_solve,
    "bounds": run_bounds,
    "verify": lambda a: run_bounds(a, require_dist=True),
    "profile": run_profile,
    "sweep": run_sweep,
}


def _attach_ranges(argv: list[str]) -> list[str]:
    # "--range -1:1:201" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for token in it:
        if token in ("--range", "--amp"):
            value = next(it, None)
            if value is not None and value.startswith("-") and ":" in value:
                out.append(f"{token}={value}")
                continue
            out.append(token)
            if value is not None:
                out.append(value)
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_attach_ranges(argv))
        return COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (UsageError, WiretapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
