from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from expop.polynomial import Poly

V = ("x", "y")
x = Poly.var(V, "x")
y = Poly.var(V, "y")

small = st.integers(-5, 5)


def test_construction_and_coefficients():
    p = 3 * x * x * y - Fraction(1, 2) * y + 7
    assert dict(p) == {(2, 1): 3, (0, 1): Fraction(-1, 2), (0, 0): 7}
    assert p.degree("x") == 2 and p.degree("y") == 1
    assert p.coefficient("x", 2) == 3 * y
    assert p(x=2, y=Fraction(1, 3)) == Fraction(4) - Fraction(1, 6) + 7


def test_zero_terms_are_dropped():
    p = x - x
    assert not p
    assert dict(p) == {}
    assert p == Poly(V)


def test_diff_and_subs():
    p = (x + 2 * y) ** 3
    assert p.diff("x") == 3 * (x + 2 * y) ** 2
    assert p.diff("y") == 6 * (x + 2 * y) ** 2
    assert p.subs("y", 0) == x ** 3


def test_float_evaluation_uses_fsum():
    p = x ** 2 - 2 * x + 1
    assert p(x=1.0 + 1e-9, y=0.0) == pytest.approx(1e-18, rel=1e-6)


def test_variable_mismatch_raises():
    with pytest.raises(ValueError):
        x + Poly.var(("x", "z"), "z")


@given(small, small, small, small)
def test_ring_laws(a, b, c, d):
    p = a * x + b * y + 1
    q = c * x * y + d
    r = x - y
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert (p * q).diff("x") == p.diff("x") * q + p * q.diff("x")


@given(small, small, st.fractions(max_denominator=20), st.fractions(max_denominator=20))
def test_evaluation_is_a_homomorphism(a, b, vx, vy):
    p = a * x * x + b * y
    q = x * y - b
    assert (p * q)(x=vx, y=vy) == p(x=vx, y=vy) * q(x=vx, y=vy)
    assert (p + q)(x=vx, y=vy) == p(x=vx, y=vy) + q(x=vx, y=vy)


def test_hash_consistent_with_eq():
    assert hash((x + 1) * (x - 1)) == hash(x * x - 1)
