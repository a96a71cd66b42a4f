"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a mapping from exponent tuples to ``Fraction``
coefficients over a fixed, named variable list::

    x**2 * A + 3   ->   Poly(("x", "A"), {(2, 1): 1, (0, 0): 3})

Zero coefficients are never stored, so ``{}`` is the zero polynomial.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Mapping

Exponent = tuple[int, ...]


class Poly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms: Mapping[Exponent, object] | None = None):
        self.vars: tuple[str, ...] = tuple(variables)
        self.terms: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            if len(exp) != len(self.vars):
                raise ValueError(f"exponent {exp} does not match variables {self.vars}")
            c = Fraction(c)
            if c:
                self.terms[tuple(exp)] = self.terms.get(tuple(exp), Fraction(0)) + c
        self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def const(cls, variables, value) -> "Poly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables, name: str) -> "Poly":
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {exp: 1})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        return Poly.const(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = Poly.const(self.vars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        return self == Poly.const(self.vars, other)

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def diff(self, name: str) -> "Poly":
        k = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return Poly(self.vars, out)

    def degree(self, name: str) -> int:
        k = self.vars.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def subs(self, name: str, value) -> "Poly":
        """Substitute a number for one variable; the variable is kept with exponent 0."""
        k = self.vars.index(name)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[k] = 0
            ne = tuple(ne)
            out[ne] = out.get(ne, Fraction(0)) + c * Fraction(value) ** e[k]
        return Poly(self.vars, out)

    def coefficient(self, name: str, power: int) -> "Poly":
        """Coefficient of ``name**power`` as a polynomial in the remaining variables."""
        k = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[k] == power:
                ne = list(e)
                ne[k] = 0
                out[tuple(ne)] = c
        return Poly(self.vars, out)

    def __call__(self, **values):
        """Evaluate at the given variable values (Fractions stay exact)."""
        missing = set(self.vars) - set(values)
        if missing:
            raise ValueError(f"missing values for {sorted(missing)}")
        vals = [values[v] for v in self.vars]
        exact = all(isinstance(v, (int, Fraction)) for v in vals)
        terms = []
        for e, c in sorted(self.terms.items()):
            term = c if exact else float(c)
            for v, k in zip(vals, e):
                if k:
                    term = term * v ** k
            terms.append(term)
        if exact:
            return sum(terms, Fraction(0))
        return math.fsum(terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)
