import math

import numpy as np
import pytest

from expop.errors import DomainError, GrowthTooFast
from expop.functions import (
    ADMISSIBILITY_SAFETY,
    BUILTIN_NAMES,
    GrowthBoundedFunction,
    builtin,
    exp_theta,
    gauss,
    monomial,
    polynomial_growth_constant,
    xcospix,
    xsinx,
)
from expop.kernel import OperatorParams, decay_rate


def _fd(f, x, k, h=1e-3):
    # five-point stencils for k = 1..3 as an independent oracle
    g = lambda t: float(f(np.asarray(t)))
    if k == 1:
        return (g(x - 2 * h) - 8 * g(x - h) + 8 * g(x + h) - g(x + 2 * h)) / (12 * h)
    if k == 2:
        return (-g(x - 2 * h) + 16 * g(x - h) - 30 * g(x) + 16 * g(x + h) - g(x + 2 * h)) / (12 * h * h)
    return (-g(x - 2 * h) + 2 * g(x - h) - 2 * g(x + h) + g(x + 2 * h)) / (2 * h ** 3)


@pytest.mark.parametrize("f", [xsinx(), xcospix(), gauss(), monomial(3), exp_theta(0.7)])
@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("x", [-1.3, 0.0, 0.4, 2.2])
def test_analytic_derivatives_match_finite_differences(f, k, x):
    assert f.d(k, x) == pytest.approx(_fd(f.eval, x, k), rel=1e-5, abs=1e-5)


def test_values():
    assert float(xsinx()(np.pi / 2)) == pytest.approx(np.pi / 2)
    assert float(xcospix()(1.0)) == pytest.approx(0.5)
    assert float(gauss()(1.0)) == pytest.approx(math.exp(-1))
    assert monomial(4).d(5, 2.0) == 0.0
    assert monomial(4).d(2, 2.0) == 48.0


@pytest.mark.parametrize("d, coeff", [(1, 1.0), (2, 0.5), (6, 1.0)])
def test_polynomial_certificate_is_a_global_bound(d, coeff):
    rate = 1e-6
    K = polynomial_growth_constant(d, coeff, rate)
    t = np.geomspace(1e-3, 1e8, 4000)
    assert np.all(coeff * t ** d <= K * np.exp(rate * t) * (1 + 1e-12))
    # and it is attained at t = d / rate
    tm = d / rate
    assert coeff * tm ** d == pytest.approx(K * math.exp(rate * tm), rel=1e-9)


@pytest.mark.parametrize("f", [xsinx(), xcospix(), monomial(5)])
def test_certificate_holds_on_samples(f):
    t = np.linspace(-1e3, 1e3, 20001)
    assert np.all(np.abs(f(t)) <= f.K * np.exp(f.N * np.abs(t)))


def test_admissibility_threshold():
    p = OperatorParams(10, 1)
    crit = ADMISSIBILITY_SAFETY * decay_rate(p, 1.0)
    assert exp_theta(crit * 0.999).admissible(p, 1.0)
    assert not exp_theta(crit * 1.001).admissible(p, 1.0)
    with pytest.raises(GrowthTooFast):
        exp_theta(crit * 1.001).require_admissible(p, 1.0)


def test_rescaled_and_negated():
    f = xsinx().rescaled(0.5)
    assert float(f(2.0)) == pytest.approx(math.sin(1.0))
    assert f.d(2, 2.0) == pytest.approx(0.25 * xsinx().d(2, 1.0))
    assert f.N == pytest.approx(0.5e-6)
    g = exp_theta(2.0).negated_argument()
    assert float(g(1.0)) == pytest.approx(math.exp(-2.0))


def test_combine():
    h = monomial(1).combine(2.0, monomial(2), -3.0)
    assert float(h(2.0)) == pytest.approx(4.0 - 12.0)
    assert h.N == monomial(2).N


def test_builtin_registry():
    for name in BUILTIN_NAMES:
        if name == "exp":
            assert builtin(name, 0.3).label == "exp(0.3nu)"
        else:
            assert builtin(name).label == name
    with pytest.raises(DomainError):
        builtin("exp")
    with pytest.raises(DomainError):
        builtin("sinh")


def test_certificate_validation():
    with pytest.raises(DomainError):
        GrowthBoundedFunction(np.sin, -1.0, 0.0)
    with pytest.raises(DomainError):
        GrowthBoundedFunction(np.sin, 1.0, math.inf)
    with pytest.raises(DomainError):
        GrowthBoundedFunction(np.sin, 1.0, 0.0).d(1, 0.0)
