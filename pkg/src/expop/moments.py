"""Raw and central moments of ``T_{lam,a}``.

Three independent routes are available:

* jets of the moment generating function
  ``M(theta) = (cos(a theta/lam) - (x/a) sin(a theta/lam))**(-lam)``
  (:func:`raw_moments_jet`, :func:`central_moments_jet`);
* the exact recurrence
  ``mu_{p+1} = (a**2 + x**2)/lam * (p mu_{p-1} + d mu_p/dx)``
  over the rationals (:func:`central_moment_symbolic`);
* hand-expanded closed forms for ``p <= 6``
  (:func:`closed_form_raw_moment`, :func:`closed_form_central_moment`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .jet import Jet
from .kernel import OperatorParams
from .polynomial import Poly

__all__ = [
    "MAX_MOMENT_ORDER",
    "CentralMomentPolynomial",
    "mgf_jet",
    "raw_moments_jet",
    "central_moments_jet",
    "central_moment_symbolic",
    "asymptotic_raw_moment",
    "closed_form_raw_moment",
    "closed_form_central_moment",
]

MAX_MOMENT_ORDER = 12
_MVARS = ("x", "A", "L")   # A = a**2, L = 1/lam


def _check_order(P: int) -> None:
    if not isinstance(P, int) or P < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {P!r}")
    if P > MAX_MOMENT_ORDER:
        raise DomainError(f"moment order {P} exceeds the cap {MAX_MOMENT_ORDER}")


def mgf_jet(params: OperatorParams, x: float, order: int, centered: bool = False) -> Jet:
    """Taylor jet in ``theta`` at 0 of the MGF (times ``exp(-theta x)`` if ``centered``)."""
    lam, a = float(params.lam), float(params.a)
    t = Jet.variable(order, 0.0, a / lam)
    s, c = t.sincos()
    log_m = (c - s * (x / a)).log() * (-lam)
    if centered:
        log_m = log_m - Jet.variable(order, 0.0, x)
    return log_m.exp()


def raw_moments_jet(params: OperatorParams, x: float, P: int = 8) -> list[float]:
    """``[m_0, ..., m_P]`` with ``m_p = (T e_p)(x)``."""
    _check_order(P)
    return mgf_jet(params, x, P).derivatives().tolist()


def central_moments_jet(params: OperatorParams, x: float, P: int = 8) -> list[float]:
    """``[mu_0, ..., mu_P]`` with ``mu_p = (T (nu - x)**p)(x)``."""
    _check_order(P)
    return mgf_jet(params, x, P, centered=True).derivatives().tolist()


@dataclass(frozen=True)
class CentralMomentPolynomial:
    """Exact ``mu_p`` as a polynomial in ``x``, ``A = a**2`` and ``L = 1/lam``."""

    p: int
    poly: Poly

    def table(self) -> dict[tuple[int, int, int], Fraction]:
        """Coefficients keyed by (power of x, power of a**2, power of 1/lam)."""
        return dict(self.poly)

    @property
    def x_degree(self) -> int:
        return max(self.poly.degree("x"), 0)

    def __call__(self, lam, a, x):
        """Evaluate; exact when all arguments are ints or Fractions."""
        if all(isinstance(v, (int, Fraction)) for v in (lam, a, x)):
            return self.poly(x=Fraction(x), A=Fraction(a) ** 2, L=1 / Fraction(lam))
        return self.poly(x=float(x), A=float(a) ** 2, L=1.0 / float(lam))

    def at(self, params: OperatorParams, x):
        return self(params.lam, params.a, x)


@lru_cache(maxsize=1)
def _central_table() -> tuple[Poly, ...]:
    x = Poly.var(_MVARS, "x")
    w = (Poly.var(_MVARS, "A") + x * x) * Poly.var(_MVARS, "L")
    mus = [Poly.const(_MVARS, 1), Poly(_MVARS)]
    for p in range(1, MAX_MOMENT_ORDER):
        mus.append(w * (p * mus[p - 1] + mus[p].diff("x")))
    return tuple(mus)


def central_moment_symbolic(p: int) -> CentralMomentPolynomial:
    _check_order(p)
    return CentralMomentPolynomial(p, _central_table()[p])


def asymptotic_raw_moment(p: int, params: OperatorParams, x: float) -> float:
    """Two-term large-``lam`` expansion of ``(T e_p)(x)``; error is ``O(lam**-3)``.

    ``x**p (1 + p(p-1)/(2 lam) + p(p-1)(p-2)(3p-1)/(24 lam**2))
    + a**2 x**(p-2) (p(p-1)/(2 lam) + p(p-1)(p-2)(3p-5)/(12 lam**2))
    + a**4 x**(p-4) p(p-1)(p-2)(p-3)/(8 lam**2)``.
    Terms whose coefficient vanishes identically are dropped, so the
    negative powers of ``x`` never appear.
    """
    if not isinstance(p, int) or p < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {p!r}")
    lam, a, x = float(params.lam), float(params.a), float(x)
    f2 = p * (p - 1)
    f3 = f2 * (p - 2)
    f4 = f3 * (p - 3)
    out = x ** p * (1.0 + f2 / (2 * lam) + f3 * (3 * p - 1) / (24 * lam ** 2))
    if f2:
        out += a ** 2 * x ** (p - 2) * (f2 / (2 * lam) + f3 * (3 * p - 5) / (12 * lam ** 2))
    if f4:
        out += a ** 4 * x ** (p - 4) * f4 / (8 * lam ** 2)
    return out


def closed_form_raw_moment(p: int, lam, a, x):
    """Hand-expanded ``(T e_p)(x)`` for ``0 <= p <= 6``."""
    w = a * a + x * x
    if p == 0:
        return 1 + 0 * x
    if p == 1:
        return x
    if p == 2:
        return x ** 2 + w / lam
    if p == 3:
        return x ** 3 + (3 * lam + 2) * x * w / lam ** 2
    if p == 4:
        return x ** 4 + w / lam ** 3 * ((6 * lam ** 2 + 11 * lam + 6) * x ** 2 + (3 * lam + 2) * a ** 2)
    if p == 5:
        return x ** 5 + x * w / lam ** 4 * ((10 * lam ** 3 + 35 * lam ** 2 + 50 * lam + 24) * x ** 2
                                            + (15 * lam ** 2 + 30 * lam + 16) * a ** 2)
    if p == 6:
        return x ** 6 + w / lam ** 5 * ((15 * lam ** 4 + 85 * lam ** 3 + 225 * lam ** 2 + 274 * lam + 120) * x ** 4
                                        + a ** 2 * (45 * lam ** 3 + 180 * lam ** 2 + 256 * lam + 120) * x ** 2
                                        + a ** 4 * (15 * lam ** 2 + 30 * lam + 16))
    raise DomainError(f"closed form only tabulated for p <= 6, got {p}")


def closed_form_central_moment(p: int, lam, a, x):
    """Hand-expanded ``mu_p(x)`` for ``0 <= p <= 6`` (``mu_1 = 0``)."""
    w = a * a + x * x
    if p == 0:
        return 1 + 0 * x
    if p == 1:
        return 0 * x
    if p == 2:
        return w / lam
    if p == 3:
        return 2 * x * w / lam ** 2
    if p == 4:
        return w * (3 * (lam + 2) * x ** 2 + (3 * lam + 2) * a ** 2) / lam ** 3
    if p == 5:
        return 4 * x * w * ((5 * lam + 6) * x ** 2 + (5 * lam + 4) * a ** 2) / lam ** 4
    if p == 6:
        return w * (5 * (3 * lam ** 2 + 26 * lam + 24) * x ** 4
                    + 10 * a ** 2 * (3 * lam ** 2 + 16 * lam + 12) * x ** 2
                    + a ** 4 * (15 * lam ** 2 + 30 * lam + 16)) / lam ** 5
    raise DomainError(f"closed form only tabulated for p <= 6, got {p}")
