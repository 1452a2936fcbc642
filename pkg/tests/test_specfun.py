import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from pbtradeoff.errors import DomainError, NumericalError
from pbtradeoff.specfun import (
    CONSTANTS,
    EULER_GAMMA,
    derivative,
    e1_of_exp,
    exp_integral_e1,
    richardson_table,
)

mpmath.mp.dps = 30


def e1_quadrature(x):
    """Independent oracle: adaptive quadrature of exp(-y)/y on [x, inf)."""
    x = mpmath.mpf(x)
    return float(mpmath.quad(lambda y: mpmath.exp(-y) / y, [x, x + 1, x + 10, mpmath.inf]))


def test_euler_gamma():
    assert CONSTANTS.euler_gamma == EULER_GAMMA
    assert round(CONSTANTS.euler_gamma, 8) == 0.57721566
    assert EULER_GAMMA == pytest.approx(float(mpmath.euler), rel=1e-16)


@pytest.mark.parametrize("x, expected", [
    # frozen from e1_quadrature
    (1.0, 0.21938393439552027),
    (10.0, 4.156968929685324e-06),
])
def test_e1_examples(x, expected):
    assert exp_integral_e1(x) == pytest.approx(expected, rel=1e-13)


def test_e1_underflow_is_exact_zero():
    assert exp_integral_e1(1e6) == 0.0
    assert exp_integral_e1(800.0) == 0.0
    assert exp_integral_e1(math.inf) == 0.0


@pytest.mark.parametrize("x", [0.0, -1.0, -1e-300, math.nan])
def test_e1_domain(x):
    with pytest.raises(DomainError):
        exp_integral_e1(x)


@pytest.mark.parametrize("x", np.geomspace(1e-8, 700.0, 41))
def test_e1_relative_accuracy(x):
    ref = float(mpmath.e1(mpmath.mpf(x)))
    assert abs(exp_integral_e1(x) - ref) <= 1e-12 * ref


@pytest.mark.parametrize("x", [1e-8, 0.3, 0.999, 1.0, 1.001, 3.7, 42.0, 250.0])
def test_e1_matches_quadrature(x):
    assert exp_integral_e1(x) == pytest.approx(e1_quadrature(x), rel=1e-12)


def test_e1_sandwich_and_monotone():
    xs = np.linspace(1.0, 600.0, 2000)
    vals = [exp_integral_e1(x) for x in xs]
    for x, v in zip(xs, vals):
        lo = math.exp(-x) * x / (x * x + x)
        hi = math.exp(-x) / x
        assert lo < v < hi
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert all(v > 0 for v in vals)


@given(st.floats(min_value=1e-8, max_value=600.0))
def test_e1_positive_decreasing_property(x):
    v = exp_integral_e1(x)
    assert v > 0.0
    assert exp_integral_e1(x * 1.01 + 1e-9) < v


def test_e1_of_exp_ranges():
    assert e1_of_exp(math.log(2.5)) == exp_integral_e1(2.5)
    assert e1_of_exp(1000.0) == 0.0
    # tiny argument: -gamma - ln z
    assert e1_of_exp(-800.0) == pytest.approx(800.0 - EULER_GAMMA, rel=1e-15)
    assert e1_of_exp(-650.0) == pytest.approx(650.0 - EULER_GAMMA, rel=1e-15)


def test_richardson_removes_known_terms():
    # A(h) = 3 + 2 h^2 - h^4 sampled at h, h/2, h/4
    vals = [3 + 2 * h ** 2 - h ** 4 for h in (0.4, 0.2, 0.1)]
    table = richardson_table(vals, 2.0, (2, 4))
    assert table[-1][-1] == pytest.approx(3.0, abs=1e-14)
    with pytest.raises(ValueError):
        richardson_table([1.0], 2.0, (2,))


def test_derivative_log1p_at_zero():
    d1 = derivative(math.log1p, 0.0, 1)
    d2 = derivative(math.log1p, 0.0, 2)
    assert d1.value == pytest.approx(1.0, abs=1e-8)
    assert d2.value == pytest.approx(-1.0, abs=1e-6)
    for d in (d1, d2):
        assert math.isfinite(d.est_error) and d.est_error >= 0
        assert d.evaluations >= 2


def test_derivative_of_direct_closed_form():
    # oracle: analytic slope alpha (kappa a_K + b_K) for Rayleigh, K = 20
    alpha, b = 0.01, math.log(20)
    expected = 0.035729479384555239

    def c(s):
        x = s * alpha
        return x / (1 + x * b) * EULER_GAMMA + math.log1p(x * b)

    assert expected == pytest.approx(alpha * (EULER_GAMMA + b), rel=1e-15)
    assert derivative(c, 0.0, 1).value == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("coeffs", [(1.0, -2.0, 0.5, 3.0), (0.0, 4.0, 0.0, 0.0),
                                    (2.0, 0.0, -1.0, 0.7), (5.0, 1.0, 1.0, -0.3)])
@pytest.mark.parametrize("x0", [0.0, 1e-4, 0.37, 12.0])
def test_derivative_exact_for_cubics(coeffs, x0):
    a0, a1, a2, a3 = coeffs
    f = lambda x: a0 + a1 * x + a2 * x ** 2 + a3 * x ** 3
    exact1 = a1 + 2 * a2 * x0 + 3 * a3 * x0 ** 2
    exact2 = 2 * a2 + 6 * a3 * x0
    d1 = derivative(f, x0, 1)
    d2 = derivative(f, x0, 2)
    assert abs(d1.value - exact1) <= d1.est_error
    assert abs(d2.value - exact2) <= d2.est_error


@pytest.mark.parametrize("f", [math.sin, math.exp, lambda x: math.log1p(3 * x),
                               lambda x: 1.0 / (1.0 + x * x)])
@pytest.mark.parametrize("x0", [0.2, 1.0, 2.5])
def test_second_derivative_matches_nested_first(f, x0):
    d2 = derivative(f, x0, 2)
    inner = lambda x: derivative(f, x, 1).value
    inner_err = max(derivative(f, x, 1).est_error for x in (x0 - 0.02, x0, x0 + 0.02))
    outer = derivative(inner, x0, 1, step=1e-2, f_error=inner_err)
    assert abs(d2.value - outer.value) <= d2.est_error + outer.est_error


def test_derivative_rejects_nonfinite():
    with pytest.raises(NumericalError, match="f\\("):
        derivative(lambda x: math.log(x - 1.0) if x > 1.0 else math.inf, 0.5, 1)


def test_derivative_arguments():
    with pytest.raises(ValueError):
        derivative(math.sin, 1.0, 3)
    with pytest.raises(DomainError):
        derivative(math.sin, -1.0, 1)
