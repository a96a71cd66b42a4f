"""Test functions with exponential growth certificates.

A certificate ``(K, N)`` promises ``|f(nu)| <= K exp(N |nu|)`` on the
whole line.  Operators only accept ``f`` when ``N`` is safely below the
kernel's own exponential decay rate at the evaluation point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import hermite

from .errors import DomainError, GrowthTooFast
from .kernel import OperatorParams, decay_rate

__all__ = [
    "GrowthBoundedFunction",
    "ADMISSIBILITY_SAFETY",
    "polynomial_growth_constant",
    "monomial",
    "xsinx",
    "xcospix",
    "gauss",
    "exp_theta",
    "builtin",
    "BUILTIN_NAMES",
]

ADMISSIBILITY_SAFETY = 0.9
# Exponential rate used to certify polynomially bounded functions.
POLY_GROWTH_RATE = 1e-6


def polynomial_growth_constant(degree: int, coeff: float = 1.0,
                               rate: float = POLY_GROWTH_RATE) -> float:
    """Smallest ``K`` with ``coeff * |t|**degree <= K exp(rate |t|)`` for all real ``t``."""
    if degree == 0:
        return float(coeff)
    return float(coeff) * (degree / (math.e * rate)) ** degree


def _vectorize(fn):
    def call(nu):
        arr = np.asarray(nu, dtype=float)
        out = np.asarray(fn(arr), dtype=float)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).astype(float)
        return out
    return call


@dataclass(frozen=True)
class GrowthBoundedFunction:
    """A real function with an exponential growth certificate.

    ``eval`` must accept numpy arrays.  ``derivative(x, k)``, when given,
    returns the exact k-th derivative at a point and is what the
    asymptotic checks use for ``f''`` and friends.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    K: float
    N: float
    label: str = "custom"
    derivative: Optional[Callable[[float, int], float]] = field(default=None, compare=False)

    def __post_init__(self):
        if not (self.K >= 0 and self.N >= 0 and math.isfinite(self.N)):
            raise DomainError(f"growth certificate needs K >= 0 and finite N >= 0, got ({self.K}, {self.N})")

    def __call__(self, nu):
        return self.eval(nu)

    def d(self, k: int, x: float) -> float:
        if k == 0:
            return float(self.eval(np.asarray(x, dtype=float)))
        if self.derivative is None:
            raise DomainError(f"{self.label}: no analytic derivatives supplied")
        return float(self.derivative(float(x), k))

    def admissible(self, params: OperatorParams, x: float) -> bool:
        return self.N < ADMISSIBILITY_SAFETY * decay_rate(params, x)

    def require_admissible(self, params: OperatorParams, x: float) -> None:
        if not self.admissible(params, x):
            raise GrowthTooFast(
                f"{self.label}: growth rate N={self.N:g} not below "
                f"{ADMISSIBILITY_SAFETY} x decay rate {decay_rate(params, x):g} "
                f"at lambda={params.lam}, a={params.a}, x={x}")

    def rescaled(self, factor: float) -> "GrowthBoundedFunction":
        """``nu -> f(factor * nu)``."""
        factor = float(factor)
        deriv = None
        if self.derivative is not None:
            base = self.derivative

            def deriv(x, k):
                return factor ** k * base(factor * x, k)
        return GrowthBoundedFunction(_vectorize(lambda nu: self.eval(factor * nu)),
                                     self.K, self.N * abs(factor),
                                     f"{self.label}(({factor:g})*nu)", deriv)

    def negated_argument(self) -> "GrowthBoundedFunction":
        """``nu -> f(-nu)``."""
        return self.rescaled(-1.0)

    def combine(self, alpha: float, other: "GrowthBoundedFunction", beta: float) -> "GrowthBoundedFunction":
        """``alpha * self + beta * other`` with the summed certificate."""
        return GrowthBoundedFunction(
            _vectorize(lambda nu: alpha * self.eval(nu) + beta * other.eval(nu)),
            abs(alpha) * self.K + abs(beta) * other.K, max(self.N, other.N),
            f"{alpha:g}*{self.label}+{beta:g}*{other.label}")


def monomial(p: int) -> GrowthBoundedFunction:
    """``e_p(nu) = nu**p``."""
    if p < 0:
        raise DomainError("monomial degree must be >= 0")

    def deriv(x, k):
        if k > p:
            return 0.0
        return math.perm(p, k) * x ** (p - k)
    rate = POLY_GROWTH_RATE if p else 0.0
    return GrowthBoundedFunction(_vectorize(lambda nu: nu ** p),
                                 polynomial_growth_constant(p), rate, f"e{p}", deriv)


def xsinx() -> GrowthBoundedFunction:
    """``x sin(x)``; bounded by ``|x|``."""
    def deriv(x, k):
        return x * math.sin(x + k * math.pi / 2) + k * math.sin(x + (k - 1) * math.pi / 2)
    return GrowthBoundedFunction(_vectorize(lambda nu: nu * np.sin(nu)),
                                 polynomial_growth_constant(1), POLY_GROWTH_RATE, "xsinx", deriv)


def xcospix() -> GrowthBoundedFunction:
    """``-(x/2) cos(pi x)``; bounded by ``|x|/2``."""
    pi = math.pi

    def deriv(x, k):
        g = pi ** k * x * math.cos(pi * x + k * pi / 2)
        if k:
            g += k * pi ** (k - 1) * math.cos(pi * x + (k - 1) * pi / 2)
        return -0.5 * g
    return GrowthBoundedFunction(_vectorize(lambda nu: -0.5 * nu * np.cos(pi * nu)),
                                 polynomial_growth_constant(1, 0.5), POLY_GROWTH_RATE, "xcospix", deriv)


def gauss() -> GrowthBoundedFunction:
    """``exp(-x**2)``; every derivative is bounded on the line."""
    def deriv(x, k):
        c = np.zeros(k + 1)
        c[k] = 1.0
        return (-1) ** k * float(hermite.hermval(x, c)) * math.exp(-x * x)
    return GrowthBoundedFunction(_vectorize(lambda nu: np.exp(-nu * nu)), 1.0, 0.0, "gauss", deriv)


def exp_theta(theta: float) -> GrowthBoundedFunction:
    """``exp(theta * nu)``, the moment-generating probe."""
    theta = float(theta)

    def deriv(x, k):
        return theta ** k * math.exp(theta * x)
    return GrowthBoundedFunction(_vectorize(lambda nu: np.exp(theta * nu)), 1.0, abs(theta),
                                 f"exp({theta:g}nu)", deriv)


BUILTIN_NAMES = tuple(f"e{p}" for p in range(7)) + ("xsinx", "xcospix", "gauss", "exp")


def builtin(name: str, theta: float | None = None) -> GrowthBoundedFunction:
    """Look up a built-in test function by name (``exp`` needs ``theta``)."""
    if name in {f"e{p}" for p in range(7)}:
        return monomial(int(name[1:]))
    if name == "xsinx":
        return xsinx()
    if name == "xcospix":
        return xcospix()
    if name == "gauss":
        return gauss()
    if name == "exp":
        if theta is None:
            raise DomainError("function 'exp' needs theta")
        return exp_theta(theta)
    raise DomainError(f"unknown function {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
