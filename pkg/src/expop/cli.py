"""Command-line front end: ``expop <subcommand> [flags]``.

Exit codes: 0 success, 1 numeric failure (the error class and the
offending ``(lambda, a, x)`` cell go to stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analysis import (
    PW,
    ExperimentSpec,
    run_convergence_experiment,
    simultaneous_check,
    tail_mass,
    voronovskaja_residual,
)
from .errors import ExpopError
from .functions import BUILTIN_NAMES, builtin
from .kernel import OperatorParams, log_kernel
from .moments import MAX_MOMENT_ORDER, central_moments_jet, raw_moments_jet
from .operators import apply_post_widder_detail, apply_T_derivative_detail
from .quadrature import QuadConfig

log = logging.getLogger("expop")


class UsageError(Exception):
    """Bad flag value detected after parsing; carries the flag name."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


# -- argument types ----------------------------------------------------------

def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return v


def _positive(text: str) -> float:
    v = _finite(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return v


def _non_negative(text: str) -> float:
    v = _finite(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return v


def _a_value(text: str):
    if text == PW:
        return PW
    return _positive(text)


def _rel_tol(text: str) -> float:
    v = _positive(text)
    if v >= 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {text!r}")
    return v


# -- output ------------------------------------------------------------------

def _g17(v) -> str:
    return v if isinstance(v, str) else format(float(v), ".17g")


def _csv(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_g17(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or Path("."))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, text: str) -> None:
    if args.out is not None:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _digits(rel_tol: float) -> int:
    # plain-text answers show only the digits the tolerance vouches for
    return max(1, min(17, int(math.floor(-math.log10(rel_tol)))))


def _record(args, **values) -> str:
    """One result formatted according to ``--format``."""
    if args.format == "json":
        return json.dumps(values, indent=1) + "\n"
    if args.format == "csv":
        return _csv(list(values), [list(values.values())])
    d = _digits(args.rel_tol)
    parts = [v if isinstance(v, str) else format(float(v), f".{d}g") for v in values.values()]
    return " ".join(parts) + "\n"


# -- subcommands -------------------------------------------------------------

def _params(args) -> OperatorParams:
    if args.a == PW:
        raise UsageError("--a", f"'PW' is not accepted by '{args.command}'")
    return OperatorParams(args.lam, args.a)


def _function(args):
    if args.fn == "exp" and args.theta is None:
        raise UsageError("--theta", "required with --fn exp")
    return builtin(args.fn, args.theta)


def cmd_apply(args) -> str:
    f = _function(args)
    cfg = QuadConfig(rel_tol=args.rel_tol)
    if args.a == PW:
        if args.p:
            raise UsageError("--p", "derivatives are not available for '--a PW'")
        res = apply_post_widder_detail(args.lam, f, args.x, cfg)
    else:
        res = apply_T_derivative_detail(_params(args), f, args.x, args.p, cfg)
    if args.format == "text":
        return _record(args, value=res.value)
    return _record(args, value=res.value, est_error=res.est_error)


def cmd_moments(args) -> str:
    params = _params(args)
    raw = raw_moments_jet(params, args.x, args.max_p)
    central = central_moments_jet(params, args.x, args.max_p)
    rows = [[p, raw[p], central[p]] for p in range(args.max_p + 1)]
    header = ["p", "raw_moment", "central_moment"]
    if args.format == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    return _csv(header, rows)


def cmd_kernel(args) -> str:
    lk = log_kernel(_params(args), args.x, args.nu)
    return _record(args, log_kernel=lk, kernel=math.exp(lk))


def cmd_voronovskaja(args) -> str:
    f = _function(args)
    r = voronovskaja_residual(_params(args), f, args.x, QuadConfig(rel_tol=args.rel_tol))
    return _record(args, residual=r)


def cmd_simultaneous(args) -> str:
    if args.p not in (1, 2):
        raise UsageError("--p", f"must be 1 or 2, got {args.p}")
    f = _function(args)
    chk = simultaneous_check(_params(args), f, args.x, args.p, QuadConfig(rel_tol=args.rel_tol))
    return _record(args, lhs=chk.lhs, rhs=chk.rhs)


def cmd_tails(args) -> str:
    m = tail_mass(_params(args), args.x, args.delta, args.growth, QuadConfig(rel_tol=args.rel_tol))
    return _record(args, tail_mass=m)


def cmd_converge(args) -> str:
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("--config", str(exc)) from None
    if not isinstance(raw, dict):
        raise UsageError("--config", "expected a JSON object")
    try:
        spec = ExperimentSpec.from_dict(raw)
    except ExpopError as exc:
        raise UsageError("--config", str(exc)) from None
    report = run_convergence_experiment(spec)
    return report.to_json() + "\n" if args.format == "json" else report.to_csv()


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expop",
        description="Exponential-type operators T_{lambda,a} with kernel on a**2 + x**2: "
                    "evaluation, moments, asymptotic checks and convergence experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, *, fn=True, a_help="kernel parameter a > 0", fmt=("text", "csv", "json")):
        p.add_argument("--lambda", dest="lam", type=_positive, required=True, help="lambda > 0")
        p.add_argument("--a", type=_a_value, required=True, help=a_help)
        p.add_argument("--x", type=_finite, required=True, help="evaluation point")
        p.add_argument("--rel-tol", type=_rel_tol, default=1e-10, help="quadrature relative tolerance")
        p.add_argument("--format", choices=fmt, default=fmt[0], help="output format")
        p.add_argument("--out", type=Path, help="write output here instead of stdout")
        if fn:
            p.add_argument("--fn", choices=BUILTIN_NAMES, required=True, help="built-in test function")
            p.add_argument("--theta", type=_finite, help="tilt for --fn exp")

    p = sub.add_parser("apply", help="evaluate (T^(p) f)(x), or P_lambda f with --a PW")
    common(p, a_help="a > 0, or PW for the Post-Widder operator")
    p.add_argument("--p", type=int, choices=range(4), default=0, help="x-derivative order 0..3")
    p.set_defaults(run=cmd_apply)

    p = sub.add_parser("moments", help="raw and central moments up to --max-p")
    common(p, fn=False, fmt=("csv", "json"))
    p.add_argument("--max-p", type=int, choices=range(MAX_MOMENT_ORDER + 1), default=8,
                   metavar=f"0..{MAX_MOMENT_ORDER}", help="highest moment order")
    p.set_defaults(run=cmd_moments)

    p = sub.add_parser("kernel", help="kernel value k(x, nu)")
    common(p, fn=False)
    p.add_argument("--nu", type=_finite, required=True, help="integration variable")
    p.set_defaults(run=cmd_kernel)

    p = sub.add_parser("voronovskaja", help="lambda (T f - f) - (a**2 + x**2)/2 f''")
    common(p)
    p.set_defaults(run=cmd_voronovskaja)

    p = sub.add_parser("simultaneous", help="both sides of the derivative limit, p in {1, 2}")
    common(p)
    p.add_argument("--p", type=int, required=True, help="derivative order 1 or 2")
    p.set_defaults(run=cmd_simultaneous)

    p = sub.add_parser("tails", help="kernel mass with weight exp(N|nu|) outside |nu - x| < delta")
    common(p, fn=False)
    p.add_argument("--delta", type=_non_negative, required=True, help="distance from x")
    p.add_argument("--growth", type=_non_negative, default=0.0, help="exponential rate N")
    p.set_defaults(run=cmd_tails)

    p = sub.add_parser("converge", help="run a convergence experiment from a JSON config")
    p.add_argument("--config", type=Path, required=True, help="JSON experiment config")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--out", type=Path, help="write output here instead of stdout")
    p.set_defaults(run=cmd_converge, lam=None, a=None, x=None)
    return parser


def _cell(args) -> str:
    if getattr(args, "lam", None) is None:
        return ""
    return f" (lambda={args.lam:g}, a={args.a if args.a == PW else format(args.a, 'g')}, x={args.x:g})"


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        _emit(args, args.run(args))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"expop {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ExpopError as exc:
        msg = str(exc)
        cell = "" if "lambda=" in msg else _cell(args)
        print(f"{type(exc).__name__}: {msg}{cell}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"expop: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli())
