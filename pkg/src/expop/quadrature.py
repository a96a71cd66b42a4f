"""Integration of ``exp(log_f)`` over an interval with exponentially decaying tails.

Integrands are handed over as their logarithm.  The interior maximum is
factored out before exponentiating, so results that only exist as
``mantissa * exp(log_scale)`` never overflow.  Panels use a fixed-order
Gauss-Legendre rule; panels with the largest whole-vs-halves
discrepancy are bisected until the summed discrepancy meets tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, NotConverged, WindowNotFound

__all__ = ["QuadConfig", "QuadResult", "expand_window", "integrate_exp_log", "integrate_exp_log_many"]

LogIntegrand = Callable[[np.ndarray], np.ndarray]

_GL_ORDER = 20
_INITIAL_PANELS = 16
_WINDOW_SAMPLES = 129
_MAX_DOUBLINGS = 40
_RESCALE_HEADROOM = 600.0
_INITIAL_HALF_WIDTH = 10.0   # in units of the supplied scale


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_panels: int = 2 ** 16
    window_margin: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("rel_tol and abs_tol must be positive")
        if self.max_panels < _INITIAL_PANELS:
            raise DomainError(f"max_panels must be >= {_INITIAL_PANELS}")
        if self.window_margin is not None and not self.window_margin > 0:
            raise DomainError("window_margin must be positive")

    @property
    def margin(self) -> float:
        """Log-units drop required at the window ends (default ``5 + ln(1/rel_tol)``)."""
        if self.window_margin is not None:
            return float(self.window_margin)
        return 5.0 + math.log(1.0 / self.rel_tol)


@dataclass(frozen=True)
class QuadResult:
    """Integral reported as ``mantissa * exp(log_scale)``; ``value`` is that product."""

    value: float
    log_scale: float
    mantissa: float
    est_error: float
    panels_used: int
    window: tuple[float, float] = field(default=(0.0, 0.0))

    @property
    def log_value(self) -> float:
        if self.mantissa <= 0:
            return -math.inf
        return math.log(self.mantissa) + self.log_scale


@lru_cache(maxsize=None)
def _gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _eval_log(log_integrand: LogIntegrand, pts: np.ndarray) -> np.ndarray:
    vals = np.asarray(log_integrand(pts), dtype=float)
    if vals.shape != pts.shape:
        vals = np.broadcast_to(vals, pts.shape).astype(float)
    if np.any(np.isnan(vals)) or np.any(vals == np.inf):
        raise DomainError("log-integrand returned NaN or +inf")
    return vals


def expand_window(log_integrand: LogIntegrand, center: float, scale: float,
                  cfg: QuadConfig = QuadConfig(),
                  bounds: tuple[float, float] = (-math.inf, math.inf)) -> tuple[float, float]:
    """Find ``[lo, hi]`` outside of which the integrand is negligible.

    Starts from ``center -/+ 10*scale`` (clipped to ``bounds``) and doubles
    each side's half-width until the log-integrand at that end sits at
    least ``cfg.margin`` below the largest sampled value.  An end that
    reaches its bound is accepted as is.

    Raises
    ------
    WindowNotFound
        If a half-width would exceed ``2**40 * scale``.
    """
    if not (scale > 0 and math.isfinite(scale)):
        raise DomainError(f"scale must be positive and finite, got {scale}")
    bmin, bmax = bounds
    if not bmin <= center <= bmax:
        raise DomainError(f"center {center} outside bounds {bounds}")
    margin = cfg.margin
    h_lo = h_hi = _INITIAL_HALF_WIDTH * scale
    limit = 2.0 ** _MAX_DOUBLINGS * scale
    peak = -math.inf
    while True:
        lo = max(center - h_lo, bmin)
        hi = min(center + h_hi, bmax)
        pts = np.unique(np.concatenate([np.linspace(lo, hi, _WINDOW_SAMPLES), [center]]))
        vals = _eval_log(log_integrand, pts)
        peak = max(peak, float(vals.max()))
        if peak == -math.inf:
            raise WindowNotFound("log-integrand is -inf on every sampled point")
        lo_ok = lo <= bmin or vals[0] <= peak - margin
        hi_ok = hi >= bmax or vals[-1] <= peak - margin
        if lo_ok and hi_ok:
            return float(lo), float(hi)
        if not lo_ok:
            h_lo *= 2.0
        if not hi_ok:
            h_hi *= 2.0
        if h_lo > limit or h_hi > limit:
            raise WindowNotFound(
                f"no decay found within 2**{_MAX_DOUBLINGS} scales of center {center}")


class _Panels:
    """Gauss-Legendre panel evaluations sharing one log shift.

    Work is batched: many panels, and all components of a vector
    integrand, are evaluated with one call of the log-integrand.
    """

    def __init__(self, log_integrands: Callable[[np.ndarray], np.ndarray], n: int = _GL_ORDER):
        self.f = log_integrands
        self.nodes, self.weights = _gl_rule(n)
        self.shift = -math.inf

    def logs(self, edges: np.ndarray) -> np.ndarray:
        """Log-integrands on the nodes of each ``[a, b]`` row of ``edges``; shape (m, k, n)."""
        mid = 0.5 * (edges[:, 0] + edges[:, 1])
        rad = 0.5 * (edges[:, 1] - edges[:, 0])
        pts = mid[:, None] + rad[:, None] * self.nodes[None, :]
        flat = pts.ravel()
        vals = np.asarray(self.f(flat), dtype=float)
        vals = np.broadcast_to(vals, vals.shape[:-1] + flat.shape).reshape(-1, flat.size)
        if np.any(np.isnan(vals)) or np.any(vals == np.inf):
            raise DomainError("log-integrand returned NaN or +inf")
        return vals.reshape((vals.shape[0],) + pts.shape)

    def sums(self, edges: np.ndarray, logs: np.ndarray) -> np.ndarray:
        """Panel integrals relative to ``exp(shift)``; shape (k, m)."""
        rad = 0.5 * (edges[:, 1] - edges[:, 0])
        terms = np.exp(logs - self.shift) * self.weights
        return rad[:, None] * _compensated_rows(terms).T


def _compensated_rows(terms: np.ndarray) -> np.ndarray:
    """Neumaier-compensated sum along the last axis, vectorised over the others."""
    total = np.zeros(terms.shape[:-1])
    comp = np.zeros_like(total)
    for j in range(terms.shape[-1]):
        v = terms[..., j]
        t = total + v
        comp += np.where(np.abs(total) >= np.abs(v), (total - t) + v, (v - t) + total)
        total = t
    return total + comp


def _split(edges: np.ndarray) -> np.ndarray:
    """Rows ``[a, b]`` -> rows ``[a, m], [m, b]`` interleaved."""
    mid = 0.5 * (edges[:, 0] + edges[:, 1])
    out = np.empty((2 * edges.shape[0], 2))
    out[0::2, 0], out[0::2, 1] = edges[:, 0], mid
    out[1::2, 0], out[1::2, 1] = mid, edges[:, 1]
    return out


def integrate_exp_log(log_integrand: LogIntegrand, window: tuple[float, float],
                      cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """Integrate ``exp(log_integrand)`` over ``window``.

    ``log_integrand`` receives a 1-D array and may return ``-inf`` where
    the integrand vanishes.  Each round bisects, worst first, the panels
    whose error exceeds an equal share of the tolerance.  Deterministic
    for fixed inputs.

    Raises
    ------
    NotConverged
        If ``cfg.max_panels`` panels do not reach
        ``max(rel_tol * |value|, abs_tol)``.
    """
    return integrate_exp_log_many(lambda v: np.asarray(log_integrand(v), dtype=float)[None, ...],
                                  window, cfg)[0]


def integrate_exp_log_many(log_integrands: Callable[[np.ndarray], np.ndarray],
                           window: tuple[float, float],
                           cfg: QuadConfig = QuadConfig()) -> tuple[QuadResult, ...]:
    """Integrate several ``exp(log_integrand_i)`` on one shared set of panels.

    ``log_integrands`` maps a 1-D array of points to an array of shape
    ``(m, points)``.  Refinement stops when the summed error of all
    components is below ``rel_tol`` times the summed integrals (or the
    absolute floor), which is the right budget when the components are
    the positive and negative parts of one signed integral.
    """
    lo, hi = map(float, window)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"window must be finite with lo < hi, got {window}")
    panels = _Panels(log_integrands)

    grid = np.linspace(lo, hi, _INITIAL_PANELS + 1)
    first = np.column_stack([grid[:-1], grid[1:]])
    whole_logs = panels.logs(first)
    halves = _split(first)
    half_logs = panels.logs(halves)
    m = whole_logs.shape[0]
    panels.shift = max(float(whole_logs.max()), float(half_logs.max()))
    if panels.shift == -math.inf:
        return tuple(QuadResult(0.0, 0.0, 0.0, 0.0, _INITIAL_PANELS, (lo, hi)) for _ in range(m))

    # per panel k and component c: the two half values hv[k, c, :] and the
    # whole-vs-halves discrepancy err[k, c]
    whole = panels.sums(first, whole_logs)
    edges = first
    hv = panels.sums(halves, half_logs).reshape(-1, 2, m).transpose(0, 2, 1)
    err = np.abs(whole - hv.sum(axis=2))

    while True:
        totals = [math.fsum(hv[:, c, :].ravel()) for c in range(m)]
        errs = [math.fsum(err[:, c]) for c in range(m)]
        tol = max(cfg.rel_tol * math.fsum(abs(t) for t in totals),
                  _abs_tol_in_mantissa(cfg.abs_tol, panels.shift))
        toterr = math.fsum(errs)
        if toterr <= tol:
            break
        n = edges.shape[0]
        if n >= cfg.max_panels:
            raise NotConverged(f"{n} panels, estimated error {toterr:.3g} > tolerance {tol:.3g}")
        perr = err.sum(axis=1)
        order = np.argsort(-perr, kind="stable")
        count = max(1, int(np.count_nonzero(perr > tol / n)))
        count = min(count, n, cfg.max_panels - n)
        pick = np.sort(order[:count])
        keep = np.ones(n, dtype=bool)
        keep[pick] = False

        children = _split(edges[pick])
        child_whole = hv[pick].transpose(0, 2, 1).reshape(-1, m)
        grand = _split(children)
        logs = panels.logs(grand)
        peak = float(logs.max())
        if peak > panels.shift + _RESCALE_HEADROOM:
            factor = math.exp(panels.shift - peak)
            hv = hv * factor
            err = err * factor
            child_whole = child_whole * factor
            panels.shift = peak
        child_hv = panels.sums(grand, logs).reshape(-1, 2, m).transpose(0, 2, 1)
        child_err = np.abs(child_whole - child_hv.sum(axis=2))

        # keep panels in left-to-right order so sums do not depend on history
        edges = np.concatenate([edges[keep], children])
        hv = np.concatenate([hv[keep], child_hv])
        err = np.concatenate([err[keep], child_err])
        idx = np.argsort(edges[:, 0], kind="stable")
        edges, hv, err = edges[idx], hv[idx], err[idx]

    shift = panels.shift
    out = []
    for total, e in zip(totals, errs):
        value = math.copysign(_exp_capped(math.log(abs(total)) + shift), total) if total else 0.0
        est_abs = _exp_capped(math.log(e) + shift) if e > 0 else 0.0
        out.append(QuadResult(value=value, log_scale=shift, mantissa=total, est_error=est_abs,
                              panels_used=int(edges.shape[0]), window=(lo, hi)))
    return tuple(out)


def _exp_capped(v: float) -> float:
    return math.exp(v) if v < 709.78 else math.inf


def _abs_tol_in_mantissa(abs_tol: float, shift: float) -> float:
    e = math.log(abs_tol) - shift
    if e > 700:
        return math.inf
    if e < -700:
        return 0.0
    return math.exp(e)
