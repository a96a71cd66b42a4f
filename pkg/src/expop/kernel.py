"""The kernel of the exponential-type operator attached to ``a**2 + x**2``.

The kernel solves ``d/dx k(x, nu) = lam (nu - x) k(x, nu) / (a**2 + x**2)``
and, normalised to unit mass in ``nu``, reads::

    k(x, nu) = 2**(lam-2) lam a**(lam-1) / (pi Gamma(lam) (a**2+x**2)**(lam/2))
               * |Gamma(lam/2 + i lam nu/(2a))|**2 * exp((lam nu/a) atan(x/a))

Everything here works with ``ln k``; the raw kernel spans hundreds of
orders of magnitude once ``lam`` is in the hundreds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .specfun import ln_gamma_real, log_abs_gamma_sq

__all__ = [
    "OperatorParams",
    "KernelPoint",
    "ismail_may",
    "log_normalizer",
    "log_kernel",
    "log_kernel_dx",
    "kernel_location_scale",
    "decay_rate",
]

_LN2 = math.log(2.0)
_LNPI = math.log(math.pi)


@dataclass(frozen=True)
class OperatorParams:
    """Order ``lam`` and family parameter ``a`` of ``T_{lam,a}``; both finite and positive."""

    lam: float
    a: float

    def __post_init__(self):
        for name in ("lam", "a"):
            v = getattr(self, name)
            try:
                ok = math.isfinite(v) and v > 0
            except TypeError:
                ok = False
            if not ok:
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")

    @property
    def log_prefactor(self) -> float:
        """x-independent part of the log-normaliser."""
        lam, a = float(self.lam), float(self.a)
        return ((lam - 2.0) * _LN2 + math.log(lam) + (lam - 1.0) * math.log(a)
                - _LNPI - ln_gamma_real(lam))


class KernelPoint(NamedTuple):
    x: float
    nu: float


def ismail_may(lam: float) -> OperatorParams:
    """The ``a = 1`` member of the family (operator attached to ``1 + x**2``)."""
    return OperatorParams(lam, 1.0)


def _log_a2_x2(a, x):
    return 2.0 * np.log(np.hypot(a, x))


def log_normalizer(params: OperatorParams, x: float) -> float:
    """``ln[2**(lam-2) lam a**(lam-1) / (pi Gamma(lam) (a**2+x**2)**(lam/2))]``."""
    lam = float(params.lam)
    return params.log_prefactor - 0.5 * lam * float(_log_a2_x2(float(params.a), x))


def log_kernel(params: OperatorParams, x: float, nu):
    """``ln k(x, nu)``; ``nu`` may be an array.

    Exactly symmetric under ``(x, nu) -> (-x, -nu)``.
    """
    lam, a = float(params.lam), float(params.a)
    nu = np.asarray(nu, dtype=float)
    tilt = (lam * nu / a) * math.atan(x / a)
    out = log_normalizer(params, x) + log_abs_gamma_sq(0.5 * lam, lam * nu / (2.0 * a)) + tilt
    if np.ndim(out) == 0:
        return float(out)
    return out


def log_kernel_dx(params: OperatorParams, x: float, nu):
    """Closed-form ``d/dx ln k = lam (nu - x) / (a**2 + x**2)``."""
    lam, a = float(params.lam), float(params.a)
    out = lam * (np.asarray(nu, dtype=float) - x) / (a * a + x * x)
    if np.ndim(out) == 0:
        return float(out)
    return out


def kernel_location_scale(params: OperatorParams, x: float) -> tuple[float, float]:
    """Mean ``x`` and standard deviation ``sqrt((a**2+x**2)/lam)`` of the kernel density."""
    lam, a = float(params.lam), float(params.a)
    return float(x), math.sqrt((a * a + x * x) / lam)


def decay_rate(params: OperatorParams, x: float) -> float:
    """Slowest exponential decay rate of ``k(x, .)`` as ``|nu| -> inf``.

    Combines the ``exp(-pi |y|)`` tail of ``|Gamma|**2`` with the tilt:
    ``(lam / a) * (pi/2 - |atan(x/a)|)``.
    """
    lam, a = float(params.lam), float(params.a)
    return (lam / a) * (0.5 * math.pi - abs(math.atan(x / a)))
