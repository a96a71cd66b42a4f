"""Application of ``T_{lam,a}``, its x-derivatives, and the Post-Widder operator.

``(T_{lam,a} f)(x) = int k(x, nu) f(nu) dnu`` is evaluated by windowed,
log-shifted quadrature on the positive and negative parts of ``f``
separately.  The x-derivatives use the exact kernel identity
``d^p/dx^p k = Q_p(x, nu) k`` with ``Q_p`` built symbolically from
``Q_0 = 1``, ``Q_{p+1} = dQ_p/dx + Q_p lam (nu - x)/(a**2 + x**2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import DerivativeOrderUnsupported, DomainError, GrowthTooFast
from .functions import ADMISSIBILITY_SAFETY, GrowthBoundedFunction
from .kernel import OperatorParams, kernel_location_scale, log_kernel
from .polynomial import Poly
from .quadrature import QuadConfig, expand_window, integrate_exp_log_many
from .specfun import ln_gamma_real

__all__ = [
    "Integral",
    "DerivativeKernelPolynomial",
    "MAX_DERIVATIVE_ORDER",
    "apply_T",
    "apply_T_detail",
    "apply_T_derivative",
    "apply_T_derivative_detail",
    "apply_post_widder",
    "apply_post_widder_detail",
    "derivative_kernel",
    "kernel_integral",
    "mgf_closed_form",
]

MAX_DERIVATIVE_ORDER = 3
_QVARS = ("x", "A", "lam", "u")   # A = a**2, u = nu - x


class Integral(NamedTuple):
    """Signed integral with its error budget.

    ``abs_mass`` is the integral of ``|integrand|``; the signed value is
    only known to about ``rel_tol * abs_mass``.
    """

    value: float
    est_error: float
    abs_mass: float


def _log_pos(v: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.where(v > 0, v, 0.0))


def _signed_integral(log_weight: Callable[[np.ndarray], np.ndarray],
                     g: Callable[[np.ndarray], np.ndarray],
                     center: float, scale: float, cfg: QuadConfig,
                     bounds=(-math.inf, math.inf)) -> Integral:
    """``int exp(log_weight) g`` split into ``g+`` and ``g-`` parts."""
    probe = center + scale * np.linspace(-1.0, 1.0, 9)
    probe = probe[(probe >= bounds[0]) & (probe <= bounds[1])]
    g_ref = float(np.max(np.abs(g(probe)))) if probe.size else 0.0
    if not g_ref > 0 or not math.isfinite(g_ref):
        g_ref = 1.0

    def envelope(nu):
        return log_weight(nu) + np.log(np.abs(g(nu)) + g_ref)

    window = expand_window(envelope, center, scale, cfg, bounds)

    def split(nu):
        w, gv = log_weight(nu), g(nu)
        return np.stack([w + _log_pos(gv), w + _log_pos(-gv)])

    pos, neg = integrate_exp_log_many(split, window, cfg)
    return Integral(pos.value - neg.value, pos.est_error + neg.est_error, pos.value + neg.value)


def kernel_integral(params: OperatorParams, x: float, g: Callable[[np.ndarray], np.ndarray],
                    cfg: QuadConfig = QuadConfig()) -> Integral:
    """``int k(x, nu) g(nu) dnu`` for a vectorised ``g`` without a growth check."""
    x = float(x)
    center, scale = kernel_location_scale(params, x)
    return _signed_integral(lambda nu: log_kernel(params, x, nu), g, center, scale, cfg)


def apply_T_detail(params: OperatorParams, f: GrowthBoundedFunction, x: float,
                   cfg: QuadConfig = QuadConfig()) -> Integral:
    """Like :func:`apply_T` but also returns the error budget."""
    x = float(x)
    f.require_admissible(params, x)
    return kernel_integral(params, x, f.eval, cfg)


def apply_T(params: OperatorParams, f: GrowthBoundedFunction, x: float,
            cfg: QuadConfig = QuadConfig()) -> float:
    """``(T_{lam,a} f)(x)``.

    Raises ``GrowthTooFast`` when the certificate of ``f`` is not
    admissible at ``(lam, a, x)``; ``NotConverged`` from the quadrature.
    """
    return apply_T_detail(params, f, x, cfg).value


@dataclass(frozen=True)
class DerivativeKernelPolynomial:
    """``Q_p = G_p(x, a**2, lam, nu - x) / (a**2 + x**2)**p`` with ``d^p k/dx^p = Q_p k``.

    ``numerator`` is ``G_p`` over the variables ``(x, A, lam, u)`` with
    ``A = a**2`` and ``u = nu - x``.
    """

    order: int
    numerator: Poly

    def coefficients(self) -> dict[tuple[int, int], Poly]:
        """Polynomials ``g_{i,j}(x, A)`` with ``G_p = sum lam**(i+j) u**j g_{i,j}``."""
        out: dict[tuple[int, int], dict] = {}
        for (ex, eA, el, eu), c in self.numerator:
            key = (el - eu, eu)
            out.setdefault(key, {})[(ex, eA)] = c
        return {k: Poly(("x", "A"), v) for k, v in sorted(out.items())}

    def satisfies_structure(self) -> bool:
        """Every term has ``i, j >= 0`` and ``2i + j <= p``."""
        return all(i >= 0 and j >= 0 and 2 * i + j <= self.order for i, j in self.coefficients())

    def u_coefficients(self, params: OperatorParams, x: float) -> np.ndarray:
        """Numeric coefficients of ``Q_p`` as a polynomial in ``u = nu - x``."""
        lam, a = float(params.lam), float(params.a)
        A = a * a
        denom = (A + x * x) ** self.order
        deg = max(self.numerator.degree("u"), 0)
        return np.array([self.numerator.coefficient("u", j)(x=x, A=A, lam=lam, u=0.0) / denom
                         for j in range(deg + 1)])

    def evaluator(self, params: OperatorParams, x: float) -> Callable[[np.ndarray], np.ndarray]:
        coefs = self.u_coefficients(params, x)

        def q(nu):
            u = np.asarray(nu, dtype=float) - x
            return np.polynomial.polynomial.polyval(u, coefs)
        return q


@lru_cache(maxsize=None)
def _derivative_numerators(p: int) -> tuple[Poly, ...]:
    x = Poly.var(_QVARS, "x")
    A = Poly.var(_QVARS, "A")
    lam = Poly.var(_QVARS, "lam")
    u = Poly.var(_QVARS, "u")
    w = A + x * x
    out = [Poly.const(_QVARS, 1)]
    for k in range(p):
        G = out[-1]
        # d/dx at fixed nu acts on u = nu - x as du/dx = -1
        out.append(w * (G.diff("x") - G.diff("u")) - Fraction(2 * k) * x * G + lam * u * G)
    return tuple(out)


def derivative_kernel(p: int) -> DerivativeKernelPolynomial:
    """Exact ``Q_p`` for ``0 <= p <= 3``."""
    if not isinstance(p, (int, np.integer)) or p < 0:
        raise DomainError(f"derivative order must be a non-negative integer, got {p!r}")
    if p > MAX_DERIVATIVE_ORDER:
        raise DerivativeOrderUnsupported(f"derivative order {p} > {MAX_DERIVATIVE_ORDER}")
    return DerivativeKernelPolynomial(int(p), _derivative_numerators(int(p))[int(p)])


def apply_T_derivative_detail(params: OperatorParams, f: GrowthBoundedFunction, x: float,
                              p: int, cfg: QuadConfig = QuadConfig()) -> Integral:
    q = derivative_kernel(p)
    x = float(x)
    f.require_admissible(params, x)
    if p == 0:
        return apply_T_detail(params, f, x, cfg)
    qx = q.evaluator(params, x)
    return kernel_integral(params, x, lambda nu: qx(nu) * f.eval(nu), cfg)


def apply_T_derivative(params: OperatorParams, f: GrowthBoundedFunction, x: float,
                       p: int, cfg: QuadConfig = QuadConfig()) -> float:
    """``d^p/dx^p (T_{lam,a} f)(x)`` as ``int Q_p k f dnu``."""
    return apply_T_derivative_detail(params, f, x, p, cfg).value


def apply_post_widder_detail(lam: float, f: GrowthBoundedFunction, x: float,
                             cfg: QuadConfig = QuadConfig()) -> Integral:
    lam, x = float(lam), float(x)
    if not (math.isfinite(lam) and lam > 0):
        raise DomainError(f"lambda must be finite and > 0, got {lam}")
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"Post-Widder operator needs x > 0, got {x}")
    if not f.N < ADMISSIBILITY_SAFETY * lam / x:
        raise GrowthTooFast(f"{f.label}: growth rate N={f.N:g} not below "
                            f"{ADMISSIBILITY_SAFETY} x lam/x = {ADMISSIBILITY_SAFETY * lam / x:g}")
    # nu = exp(u) turns nu**(lam-1) dnu into exp(lam u) du and removes the
    # origin singularity for lam < 1
    log_norm = lam * math.log(lam) - lam * math.log(x) - ln_gamma_real(lam)

    def log_weight(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(over="ignore"):
            return log_norm + lam * u - lam * np.exp(u) / x

    def g(u):
        with np.errstate(over="ignore"):
            return f.eval(np.exp(np.asarray(u, dtype=float)))

    return _signed_integral(log_weight, g, math.log(x), 1.0 / math.sqrt(lam), cfg)


def apply_post_widder(lam: float, f: GrowthBoundedFunction, x: float,
                      cfg: QuadConfig = QuadConfig()) -> float:
    """``(P_lam f)(x) = lam**lam / (x**lam Gamma(lam)) int_0^inf nu**(lam-1) exp(-lam nu/x) f(nu) dnu``."""
    return apply_post_widder_detail(lam, f, x, cfg).value


def mgf_closed_form(params: OperatorParams, x: float, theta: float) -> float:
    """``(cos(a theta/lam) - (x/a) sin(a theta/lam))**(-lam)``.

    Defined while ``|atan(x/a) + a theta/lam| < pi/2``.
    """
    lam, a = float(params.lam), float(params.a)
    t = a * theta / lam
    if not abs(math.atan(x / a) + t) < 0.5 * math.pi:
        raise DomainError(f"MGF undefined: |atan(x/a) + a*theta/lam| >= pi/2 "
                          f"(lam={lam}, a={a}, x={x}, theta={theta})")
    base = math.cos(t) - (x / a) * math.sin(t)
    if base <= 0:
        raise DomainError(f"MGF base {base} is not positive")
    e = -lam * math.log(base)
    return math.exp(e) if e < 709.7 else math.inf
