"""Truncated Taylor series at a point ("jets") of fixed order.

``Jet([c0, c1, ..., cP])`` stands for ``c0 + c1 t + ... + cP t**P + O(t**(P+1))``.
Every operation truncates at the same order, so the coefficients it
produces are exact Taylor coefficients of the composed function (up to
floating-point rounding).
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["Jet"]


class Jet:
    __slots__ = ("c",)

    def __init__(self, coefficients):
        c = np.array(coefficients, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("a jet needs a 1-D, non-empty coefficient list")
        self.c = c

    @classmethod
    def variable(cls, order: int, point: float = 0.0, slope: float = 1.0) -> "Jet":
        """The jet of ``point + slope * t``."""
        c = np.zeros(order + 1)
        c[0] = point
        if order >= 1:
            c[1] = slope
        return cls(c)

    @classmethod
    def constant(cls, order: int, value: float) -> "Jet":
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return self.c.size - 1

    def derivatives(self) -> np.ndarray:
        """``k! * c_k``: the derivatives at the expansion point."""
        return self.c * np.array([math.factorial(k) for k in range(self.c.size)], dtype=float)

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError(f"order mismatch {self.order} vs {other.order}")
            return other
        return Jet.constant(self.order, float(other))

    def __add__(self, other):
        return Jet(self.c + self._lift(other).c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return Jet(self.c - self._lift(other).c)

    def __rsub__(self, other):
        return Jet(self._lift(other).c - self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * float(other))
        other = self._lift(other)
        n = self.c.size
        return Jet(np.convolve(self.c, other.c)[:n])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / float(other))
        return self * other.reciprocal()

    def reciprocal(self) -> "Jet":
        a = self.c
        if a[0] == 0:
            raise ZeroDivisionError("jet with zero constant term has no reciprocal")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for k in range(1, a.size):
            b[k] = -math.fsum(a[j] * b[k - j] for j in range(1, k + 1)) / a[0]
        return Jet(b)

    def exp(self) -> "Jet":
        a = self.c
        b = np.zeros_like(a)
        b[0] = math.exp(a[0])
        for k in range(1, a.size):
            b[k] = math.fsum(j * a[j] * b[k - j] for j in range(1, k + 1)) / k
        return Jet(b)

    def log(self) -> "Jet":
        a = self.c
        if a[0] <= 0:
            raise ValueError("log of a jet needs a positive constant term")
        b = np.zeros_like(a)
        b[0] = math.log(a[0])
        for k in range(1, a.size):
            s = math.fsum(j * b[j] * a[k - j] for j in range(1, k))
            b[k] = (a[k] - s / k) / a[0]
        return Jet(b)

    def sincos(self) -> tuple["Jet", "Jet"]:
        a = self.c
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0], c[0] = math.sin(a[0]), math.cos(a[0])
        for k in range(1, a.size):
            s[k] = math.fsum(j * a[j] * c[k - j] for j in range(1, k + 1)) / k
            c[k] = -math.fsum(j * a[j] * s[k - j] for j in range(1, k + 1)) / k
        return Jet(s), Jet(c)

    def sin(self) -> "Jet":
        return self.sincos()[0]

    def cos(self) -> "Jet":
        return self.sincos()[1]

    def __pow__(self, r: float) -> "Jet":
        """Real power via ``exp(r * log(self))``; the constant term must be positive."""
        return (self.log() * float(r)).exp()

    def __repr__(self):
        return f"Jet({self.c.tolist()})"
