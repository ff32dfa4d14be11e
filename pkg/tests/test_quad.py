import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from raneylab.curve import CurveModel
from raneylab.quad import (QuadratureError, density_moment, gauss_legendre, graded_rule, integrate,
                           pv_integrate)

from conftest import mp_pdf


def test_linear():
    res = integrate(lambda x: x, 0, 1)
    assert res.value == pytest.approx(0.5, abs=1e-14)
    assert res.error_estimate >= 0 and res.evaluations > 0


def test_inverse_sqrt():
    assert integrate(lambda x: x ** -0.5, 0, 1, endpoint_exponents=(-0.5, 0)).value == pytest.approx(2, abs=1e-10)


def test_mp_mass():
    assert integrate(mp_pdf, 0, 4, endpoint_exponents=(-0.5, 0.5)).value == pytest.approx(1, abs=1e-8)


def _cos_moment(g):
    # int_0^1 x^g cos x dx = sum_k (-1)^k / ((2k)! (2k + g + 1))
    return float(mpmath.nsum(lambda k: (-1) ** k / (mpmath.factorial(2 * k) * (2 * k + g + 1)), [0, mpmath.inf]))


@pytest.mark.parametrize("g", [-0.9, -0.5, -0.1, 0.5])
def test_power_endpoints(g):
    f = lambda x: x ** g * np.cos(x)  # noqa: E731
    ref = _cos_moment(g)
    res = integrate(f, 0, 1, tol=1e-10, endpoint_exponents=(g, 0))
    assert abs(res.value - ref) < 1e-10


def test_right_endpoint_singularity():
    f = lambda x: (2 - x) ** -0.75  # noqa: E731
    assert integrate(f, 1, 2, endpoint_exponents=(0, -0.75)).value == pytest.approx(4.0, abs=1e-10)


def test_complex_integrand():
    res = integrate(lambda x: np.exp(1j * x), 0, math.pi)
    assert res.value == pytest.approx(2j, abs=1e-12)


def test_bad_interval_and_exponent():
    with pytest.raises(ValueError):
        integrate(lambda x: x, 1, 0)
    with pytest.raises(ValueError):
        integrate(lambda x: x, 0, 1, endpoint_exponents=(-1.0, 0))


def test_budget_exhaustion():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.sign(x - 1 / math.pi), 0, 1, tol=1e-15, max_evals=2000)


def test_pv_examples():
    assert pv_integrate(lambda y: np.ones_like(y), 0, 2, 1).value == pytest.approx(0, abs=1e-10)
    assert pv_integrate(lambda y: y, 0, 1, 0.5).value == pytest.approx(1, abs=1e-10)
    assert pv_integrate(lambda y: np.ones_like(y), 0, 1, 0.25).value == pytest.approx(math.log(3), abs=1e-10)


def test_pv_rejects_outside_point():
    with pytest.raises(ValueError):
        pv_integrate(lambda y: y, 0, 1, 1.0)


def test_pv_against_mpmath():
    s = 0.3
    f = lambda y: np.exp(y) * np.sqrt(1 - y)  # noqa: E731
    ref = float(mpmath.quad(lambda y: (mpmath.exp(y) * mpmath.sqrt(1 - y) - mpmath.exp(s) * mpmath.sqrt(1 - s)) / (y - s), [0, s, 1])
                + mpmath.exp(s) * mpmath.sqrt(1 - s) * mpmath.log((1 - s) / s))
    assert pv_integrate(f, 0, 1, s, 1e-11, (0, 0.5)).value == pytest.approx(ref, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.integers(0, 4))
def test_pv_antisymmetric(s, k):
    f = lambda y: np.cos(k * y) + y ** 2  # noqa: E731
    a = pv_integrate(f, 0, 1, s).value
    b = pv_integrate(lambda y: -f(y), 0, 1, s).value
    assert a == pytest.approx(-b, abs=1e-12)


def test_density_moments():
    m = CurveModel.from_pr(2, 1)
    assert density_moment(m, 0) == pytest.approx(1, abs=1e-9)
    assert density_moment(m, 3) == pytest.approx(5, abs=1e-6)
    assert density_moment(CurveModel.from_pr("3/2", "1/2"), 2) == pytest.approx(5 / 8, abs=1e-6)
    with pytest.raises(ValueError):
        density_moment(m, -1)


def test_gauss_legendre_exactness():
    x, w = gauss_legendre(20)
    assert np.sum(w * x ** 38) == pytest.approx(2 / 39, rel=1e-13)


def test_graded_rule_log_singularity():
    x, w = graded_rule(0, 1, (0.3,), levels=16)
    assert np.sum(w * np.log(np.abs(x - 0.3))) == pytest.approx(0.3 * math.log(0.3) + 0.7 * math.log(0.7) - 1, abs=1e-12)


def test_graded_rule_mapped_ends():
    x, w = graded_rule(0, 1, (0, 1), levels=4, endpoint_exponents=(-0.5, -0.5), base_panels=4)
    assert np.sum(w / np.sqrt(x * (1 - x))) == pytest.approx(math.pi, abs=1e-12)
    assert x.min() > 0 and x.max() < 1
