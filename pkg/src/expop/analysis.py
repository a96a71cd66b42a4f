"""Numerical checks of the asymptotic behaviour of ``T_{lam,a}``.

Limits in ``lam`` are never judged from one large ``lam``: callers run
ladders and fit log-log slopes (:func:`loglog_slope`).
"""

from __future__ import annotations

import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, ExpopError, GrowthTooFast
from .functions import GrowthBoundedFunction, builtin
from .kernel import OperatorParams, decay_rate, kernel_location_scale, log_kernel
from .operators import (
    apply_post_widder,
    apply_post_widder_detail,
    apply_T,
    apply_T_derivative,
    apply_T_detail,
    kernel_integral,
)
from .quadrature import QuadConfig, expand_window, integrate_exp_log
from .functions import ADMISSIBILITY_SAFETY

log = logging.getLogger(__name__)

__all__ = [
    "loglog_slope",
    "voronovskaja_residual",
    "SimultaneousCheck",
    "simultaneous_check",
    "scaling_limit_residual",
    "tail_mass",
    "BoundCheck",
    "usual_modulus_bound_check",
    "xi_factor",
    "PW",
    "ExperimentSpec",
    "ConvergenceRow",
    "SummaryRow",
    "ConvergenceReport",
    "run_convergence_experiment",
]

PW = "PW"
ROW_HEADER = ("function", "a", "lambda", "x", "op_value", "f_value", "abs_error")
SUMMARY_HEADER = ("function", "a", "lambda", "sup_error")


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log|y|`` against ``log x``."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.abs(np.asarray(ys, dtype=float)))
    return float(np.polyfit(lx, ly, 1)[0])


def _voronovskaja(params: OperatorParams, f: GrowthBoundedFunction, x: float,
                  cfg: QuadConfig) -> tuple[float, float]:
    # T reproduces constants and linear functions, so T f - f(x) equals
    # T[f - f(x) - f'(x)(nu - x)]; integrating the remainder avoids the
    # cancellation between T f and f(x).
    f.require_admissible(params, x)
    lam, a = float(params.lam), float(params.a)
    f0, f1, f2 = f.d(0, x), f.d(1, x), f.d(2, x)
    res = kernel_integral(params, x, lambda nu: f.eval(nu) - f0 - f1 * (nu - x), cfg)
    value = lam * res.value - 0.5 * (a * a + x * x) * f2
    slack = lam * (res.est_error + cfg.rel_tol * res.abs_mass)
    return value, slack


def voronovskaja_residual(params: OperatorParams, f: GrowthBoundedFunction, x: float,
                          cfg: QuadConfig = QuadConfig()) -> float:
    """``lam (T f(x) - f(x)) - (a**2 + x**2)/2 f''(x)``; tends to 0 like ``1/lam``."""
    return _voronovskaja(params, f, float(x), cfg)[0]


class SimultaneousCheck(NamedTuple):
    lhs: float
    rhs: float


def simultaneous_check(params: OperatorParams, f: GrowthBoundedFunction, x: float, p: int,
                       cfg: QuadConfig = QuadConfig()) -> SimultaneousCheck:
    """Both sides of the limit for the p-th derivative.

    ``lhs = lam (T^(p) f(x) - f^(p)(x))`` and
    ``rhs = p(p-1)/2 f^(p) + p x f^(p+1) + (a**2+x**2)/2 f^(p+2)``.
    """
    if p not in (1, 2):
        raise DomainError(f"simultaneous check is defined for p in (1, 2), got {p}")
    x = float(x)
    lam, a = float(params.lam), float(params.a)
    fp, fp1, fp2 = f.d(p, x), f.d(p + 1, x), f.d(p + 2, x)
    lhs = lam * (apply_T_derivative(params, f, x, p, cfg) - fp)
    rhs = 0.5 * p * (p - 1) * fp + p * x * fp1 + 0.5 * (a * a + x * x) * fp2
    return SimultaneousCheck(lhs, rhs)


def scaling_limit_residual(m: float, a: float, f: GrowthBoundedFunction, x: float, lam: float,
                           cfg: QuadConfig = QuadConfig()) -> float:
    """``|(T_{m,a} f(./lam))(lam x) - (P_m f)(x)|``."""
    if not x > 0:
        raise DomainError(f"scaling limit needs x > 0, got {x}")
    scaled = f.rescaled(1.0 / float(lam))
    t = apply_T(OperatorParams(m, a), scaled, float(lam) * float(x), cfg)
    return abs(t - apply_post_widder(m, f, x, cfg))


def tail_mass(params: OperatorParams, x: float, delta: float, N: float,
              cfg: QuadConfig = QuadConfig()) -> float:
    """``int_{|nu - x| >= delta} k(x, nu) exp(N |nu|) dnu``."""
    x, delta, N = float(x), float(delta), float(N)
    if delta < 0 or N < 0:
        raise DomainError("tail mass needs delta >= 0 and N >= 0")
    if not N < ADMISSIBILITY_SAFETY * decay_rate(params, x):
        raise GrowthTooFast(f"exp({N:g}|nu|) is not admissible at lambda={params.lam}, a={params.a}, x={x}")
    # tails are tiny by design; an absolute floor would stop refinement early
    cfg = replace(cfg, abs_tol=1e-300)
    _, scale = kernel_location_scale(params, x)

    def log_integrand(nu):
        return log_kernel(params, x, nu) + N * np.abs(nu)

    total = 0.0
    for edge, bounds in ((x - delta, (-math.inf, x - delta)), (x + delta, (x + delta, math.inf))):
        window = expand_window(log_integrand, edge, scale, cfg, bounds)
        if window[1] > window[0]:
            total += integrate_exp_log(log_integrand, window, cfg).value
    return total


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of the usual-modulus bound.

    ``slack`` is the quadrature uncertainty of ``lhs``; ``ok`` means
    ``lhs <= rhs_upper + slack``.
    """

    lhs: float
    rhs_upper: float
    ok: bool
    slack: float = 0.0


def usual_modulus_bound_check(params: OperatorParams, f: GrowthBoundedFunction, x: float,
                              M3: float, cfg: QuadConfig = QuadConfig()) -> BoundCheck:
    """Check ``|lam (T f - f) - (a**2+x**2)/2 f''| <= 2 (a**2+x**2) w(f'', 1/sqrt(lam)) [...]``.

    The modulus of continuity of ``f''`` is replaced by its upper bound
    ``M3 * delta`` with ``M3 >= sup |f'''|``, which can only enlarge the
    right-hand side.
    """
    if M3 < 0:
        raise DomainError("M3 must be a non-negative bound on |f'''|")
    x = float(x)
    lam, a = float(params.lam), float(params.a)
    resid, slack = _voronovskaja(params, f, x, cfg)
    lhs = abs(resid)
    omega = M3 / math.sqrt(lam)
    rhs = 2.0 * (a * a + x * x) * omega * (1.0 + (3 * (lam + 2) * x * x + (3 * lam + 2) * a * a) / lam)
    return BoundCheck(lhs, rhs, lhs <= rhs + slack, slack)


def xi_factor(params: OperatorParams, x):
    """``5x^4(3l^2+26l+24) + 10a^2(3l^2+16l+12)x^2 + a^4(15l^2+30l+16)`` with ``l = lam``.

    Plain arithmetic, so exact for ``Fraction`` inputs.
    """
    lam, a = params.lam, params.a
    return (5 * x ** 4 * (3 * lam ** 2 + 26 * lam + 24)
            + 10 * a ** 2 * (3 * lam ** 2 + 16 * lam + 12) * x ** 2
            + a ** 4 * (15 * lam ** 2 + 30 * lam + 16))


# -- convergence experiments -------------------------------------------------

AValue = Union[float, str]


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


@dataclass(frozen=True)
class ExperimentSpec:
    """Grid of ``(a, lam, x)`` cells for one test function.

    ``a_ladder`` entries are positive numbers or ``"PW"`` (the ``a -> 0``
    limit, evaluated with the Post-Widder operator).
    """

    function: str
    a_ladder: tuple
    lambda_ladder: tuple
    x_grid: tuple          # (lo, hi, count)
    rel_tol: float = 1e-10
    custom: Optional[GrowthBoundedFunction] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a_ladder", tuple(self.a_ladder))
        object.__setattr__(self, "lambda_ladder", tuple(float(v) for v in self.lambda_ladder))
        lo, hi, count = self.x_grid
        object.__setattr__(self, "x_grid", (float(lo), float(hi), int(count)))
        if self.function not in ("xsinx", "xcospix", "gauss", "custom"):
            raise DomainError(f"unknown experiment function {self.function!r}")
        if self.function == "custom" and self.custom is None:
            raise DomainError("function 'custom' needs a GrowthBoundedFunction")
        if not self.a_ladder or not self.lambda_ladder:
            raise DomainError("a_ladder and lambda_ladder must be non-empty")
        a_clean = []
        for a in self.a_ladder:
            if isinstance(a, str):
                if a != PW:
                    raise DomainError(f"a_ladder entry {a!r}: expected a number or 'PW'")
                a_clean.append(PW)
            else:
                a = float(a)
                if not (math.isfinite(a) and a > 0):
                    raise DomainError(f"a_ladder entry {a} must be finite and > 0")
                a_clean.append(a)
        object.__setattr__(self, "a_ladder", tuple(a_clean))
        for lam in self.lambda_ladder:
            if not (math.isfinite(lam) and lam > 0):
                raise DomainError(f"lambda_ladder entry {lam} must be finite and > 0")
        lo, hi, count = self.x_grid
        if not (math.isfinite(lo) and math.isfinite(hi) and count >= 1 and lo <= hi):
            raise DomainError(f"bad x_grid {self.x_grid}")
        if PW in self.a_ladder and not lo > 0:
            raise DomainError("Post-Widder rows need an x_grid with lo > 0")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")

    def target(self) -> GrowthBoundedFunction:
        return self.custom if self.function == "custom" else builtin(self.function)

    def xs(self) -> np.ndarray:
        lo, hi, count = self.x_grid
        return np.linspace(lo, hi, count)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        try:
            grid = d["x_grid"]
            return cls(function=d["function"], a_ladder=d["a_ladder"],
                       lambda_ladder=d["lambda_ladder"],
                       x_grid=(grid["lo"], grid["hi"], grid["count"]),
                       rel_tol=d.get("rel_tol", 1e-10))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed experiment spec: {exc}") from exc

    def to_dict(self) -> dict:
        lo, hi, count = self.x_grid
        return {"function": self.function, "a_ladder": list(self.a_ladder),
                "lambda_ladder": list(self.lambda_ladder),
                "x_grid": {"lo": lo, "hi": hi, "count": count}, "rel_tol": self.rel_tol}


@dataclass(frozen=True)
class ConvergenceRow:
    function: str
    a: AValue
    lam: float
    x: float
    op_value: float
    f_value: float
    abs_error: float
    error: Optional[str] = None

    @property
    def available(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class SummaryRow:
    function: str
    a: AValue
    lam: float
    sup_error: float


@dataclass
class ConvergenceReport:
    rows: list[ConvergenceRow]
    summary: list[SummaryRow]

    def sup_error(self, a: AValue, lam: float, function: Optional[str] = None) -> float:
        for s in self.summary:
            if s.a == a and s.lam == float(lam) and (function is None or s.function == function):
                return s.sup_error
        raise KeyError((function, a, lam))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(ROW_HEADER) + "\n")
        for r in self.rows:
            buf.write(",".join(_fmt(v) for v in (r.function, r.a, r.lam, r.x,
                                                 r.op_value, r.f_value, r.abs_error)) + "\n")
        buf.write("\n")
        buf.write(",".join(SUMMARY_HEADER) + "\n")
        for s in self.summary:
            buf.write(",".join(_fmt(v) for v in (s.function, s.a, s.lam, s.sup_error)) + "\n")
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"rows": [asdict(r) for r in self.rows],
                "summary": [asdict(s) for s in self.summary]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "ConvergenceReport":
        return cls([ConvergenceRow(**r) for r in d["rows"]],
                   [SummaryRow(**s) for s in d["summary"]])


def _cell(spec: ExperimentSpec, f: GrowthBoundedFunction, a: AValue, lam: float, x: float,
          cfg: QuadConfig) -> ConvergenceRow:
    fx = float(f.eval(np.asarray(x)))
    try:
        if a == PW:
            val = apply_post_widder(lam, f, x, cfg)
        else:
            val = apply_T(OperatorParams(lam, a), f, x, cfg)
    except ExpopError as exc:
        log.warning("cell unavailable (%s, a=%s, lambda=%g, x=%g): %s", f.label, a, lam, x, exc)
        return ConvergenceRow(spec.function, a, lam, x, math.nan, fx, math.nan,
                              f"{type(exc).__name__}: {exc}")
    return ConvergenceRow(spec.function, a, lam, x, val, fx, abs(val - fx))


def run_convergence_experiment(spec: ExperimentSpec) -> ConvergenceReport:
    """Evaluate every ``(a, lam, x)`` cell and summarise sup-errors.

    Rows follow the ladder order given in ``spec``, then ``x``.  Cells
    that fail (inadmissible growth, no convergence) are kept with
    ``nan`` values and an ``error`` message instead of aborting the run.
    """
    f = spec.target()
    cfg = QuadConfig(rel_tol=spec.rel_tol)
    rows: list[ConvergenceRow] = []
    summary: list[SummaryRow] = []
    for a in spec.a_ladder:
        for lam in spec.lambda_ladder:
            group = [_cell(spec, f, a, lam, float(x), cfg) for x in spec.xs()]
            rows.extend(group)
            errs = [r.abs_error for r in group if r.available]
            summary.append(SummaryRow(spec.function, a, lam, max(errs) if errs else math.nan))
    return ConvergenceReport(rows, summary)
