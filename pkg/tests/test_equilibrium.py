import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raneylab.curve import DensityProfile, JacobiCurveModel, sample_density
from raneylab.equilibrium import (PairKernel, energy, equilibrium_residual, jacobi_residual, perturb,
                                  residual_report)
from raneylab.wienerhopf import potential_coefficients

from conftest import mp_pdf


@pytest.fixture(scope="module")
def mp01(mp_profile):
    return mp_profile.scaled()


def _random_pairs(seed, n=100):
    rng = np.random.default_rng(seed)
    return rng.uniform(0.01, 1, n), rng.uniform(0.01, 1, n)


# --- kernel -------------------------------------------------------------------

@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0, 3.0])
def test_q1_kernel_form(theta):
    y, yp = _random_pairs(1)
    a, b = y ** (1 / theta), yp ** (1 / theta)
    expected = np.log(np.abs(a - b) * np.abs(y - yp))
    assert np.max(np.abs(PairKernel(theta, 1)(y, yp) - expected)) < 1e-12


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0, 3.0])
def test_q2_kernel_form(theta):
    y, yp = _random_pairs(2)
    a, b = y ** (1 / theta), yp ** (1 / theta)
    expected = np.log(np.abs(y - yp)) + np.log(np.abs(a - b) / np.abs(a + b))
    assert np.max(np.abs(PairKernel(theta, 2)(y, yp) - expected)) < 1e-12


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_kernel_matches_literal_sum(q):
    # Re sum_{p=0}^{q-1} w^p Log(a - w^p b), principal branch, summed term by term
    theta = 1.5
    y, yp = _random_pairs(3)
    a, b = y ** (1 / theta), yp ** (1 / theta)
    w = np.exp(2j * np.pi * np.arange(q) / q)[:, None]
    literal = np.sum(w * np.log(a - w * b + 0j), axis=0).real + np.log(np.abs(y - yp))
    assert np.max(np.abs(PairKernel(theta, q)(y, yp) - literal)) < 1e-12


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_kernel_realness(q):
    # the p >= 1 terms pair up as complex conjugates
    theta = 2.0
    y, yp = _random_pairs(4)
    a, b = y ** (1 / theta), yp ** (1 / theta)
    w = np.exp(2j * np.pi * np.arange(1, q) / q)[:, None]
    tail = np.sum(w * np.log(a - w * b + 0j), axis=0)
    assert np.max(np.abs(tail.imag)) < 1e-12
    assert np.all(np.isreal(PairKernel(theta, q).complex_sum(y, yp)))


@pytest.mark.parametrize("q", [1, 2])
def test_kernel_symmetry(q):
    for theta in (0.5, 1.0, 2.0):
        y, yp = _random_pairs(5)
        k = PairKernel(theta, q)
        assert np.max(np.abs(k(y, yp) - k(yp, y))) < 1e-12


@pytest.mark.parametrize("q", [3, 4])
def test_kernel_not_symmetric_for_q_ge_3(q):
    # With the principal branch the literal kernel has an antisymmetric part
    # for q >= 3; for q = 4 it is pi - 4 arctan(b/a). Only the symmetric part
    # enters the energy.
    theta = 1.0
    y, yp = _random_pairs(6)
    k = PairKernel(theta, q)
    anti = k(y, yp) - k(yp, y)
    assert np.max(np.abs(anti)) > 0.1
    if q == 4:
        a, b = y, yp
        expected = 2 * np.arctan(b / a) - 2 * np.arctan(a / b)
        assert np.max(np.abs(anti - expected)) < 1e-12
    assert np.max(np.abs(k.symmetric(y, yp) - k.symmetric(yp, y))) < 1e-15


@settings(max_examples=50, deadline=None)
@given(st.floats(0.3, 4.0), st.integers(1, 4), st.floats(0.01, 0.99), st.floats(0.01, 0.99),
       st.floats(1.1, 10.0))
def test_kernel_offset(theta, q, y, yp, L):
    k = PairKernel(theta, q)
    if abs(y - yp) < 1e-6:
        return
    assert k(L * y, L * yp) - k(y, yp) == pytest.approx(k.offset(L), abs=1e-10)


# --- residuals ----------------------------------------------------------------

@pytest.mark.parametrize("y", [0.25, 0.5, 0.75])
def test_mp_residual(mp01, y):
    assert abs(equilibrium_residual(mp01, 1, 1, None, y)) < 1e-3
    spec = potential_coefficients(1, 1, 0)
    assert abs(equilibrium_residual(mp01, 1, 1, spec, y)) < 1e-6


def test_residual_discriminates(mp01):
    stretched = DensityProfile.from_function(lambda x: mp_pdf(x / 1.05) / 1.05, 4.0, 200,
                                             (-0.5, 0.0)).scaled()
    good = abs(equilibrium_residual(mp01, 1, 1, None, 0.5))
    bad = abs(equilibrium_residual(stretched, 1, 1, None, 0.5))
    assert bad >= 10 * max(good, 1e-12)
    assert bad > 1e-3


@pytest.mark.parametrize("y", [0.25, 0.5, 0.75])
def test_raney_31_residual(curve_profile, y):
    prof = curve_profile(3, 1).scaled()
    assert abs(equilibrium_residual(prof, 2, 1, None, y)) < 1e-3


@pytest.mark.parametrize("y", [0.25, 0.5, 0.75])
def test_q2_residual(curve_profile, y):
    prof = curve_profile(Fraction(3, 2), Fraction(1, 2)).scaled()
    assert abs(equilibrium_residual(prof, 1, 2, None, y)) < 1e-3


@pytest.mark.parametrize("y", [0.25, 0.5, 0.75])
def test_field_residual_m1(curve_profile, y):
    # (theta, q, m) = (1, 1, 1) is the Raney (2, 2) density
    prof = curve_profile(2, 2).scaled()
    spec = potential_coefficients(1, 1, 1)
    assert abs(equilibrium_residual(prof, 1, 1, spec, y)) < 1e-3


def test_arcsine_residual(arcsine_profile):
    assert abs(jacobi_residual(arcsine_profile, 1, 1, 0.3)) < 1e-3
    assert abs(jacobi_residual(arcsine_profile, 1, 1, 0.5)) < 1e-6


def test_jacobi_theta2_residual():
    prof = sample_density(JacobiCurveModel(2), 200).scaled()
    assert abs(jacobi_residual(prof, 2, 1, 0.6)) < 1e-2


def test_residual_report(mp01):
    rep = residual_report(mp01, 1, 1, None, [0.25, 0.5], tolerance=1e-3)
    assert rep.passed and rep.max_abs < 1e-3 and len(rep.residuals) == 2
    bad = residual_report(mp01, 1, 1, None, [0.5], tolerance=-1.0)
    assert not bad.passed


@pytest.mark.parametrize("y", [0.0, 1.0, -0.1, 1.5])
def test_y_out_of_range(mp01, y):
    with pytest.raises(ValueError):
        equilibrium_residual(mp01, 1, 1, None, y)
    with pytest.raises(ValueError):
        jacobi_residual(mp01, 1, 1, y)


# --- energy -------------------------------------------------------------------

def test_arcsine_energy(arcsine_profile):
    # logarithmic energy of the arcsine law on [0, 1] is log 4
    assert energy(arcsine_profile, 1, 1) == pytest.approx(math.log(4), abs=1e-6)


def test_mp_energy(mp01):
    spec = potential_coefficients(1, 1, 0)
    assert energy(mp01, 1, 1, spec) == pytest.approx(1.5, abs=1e-6)


def test_perturb_zero_is_identity(mp01):
    assert perturb(mp01, 0.0, 3) is mp01


@pytest.mark.parametrize("seed", range(5))
def test_perturb_mass_and_sign(mp01, seed):
    p = perturb(mp01, 0.05, seed)
    assert abs(p.mass() - mp01.mass()) < 1e-12
    x = np.linspace(0.001, 0.999, 2001)
    assert np.all(p.pdf(x) >= 0)
    assert p.support == mp01.support
    assert np.max(np.abs(p.pdf(x) - mp01.pdf(x))) > 0


def test_perturb_deterministic(mp01):
    x = np.linspace(0.01, 0.99, 101)
    assert np.array_equal(perturb(mp01, 0.05, 7).pdf(x), perturb(mp01, 0.05, 7).pdf(x))


@pytest.mark.parametrize("seed", [0, 1])
def test_perturbation_raises_energy(mp01, seed):
    spec = potential_coefficients(1, 1, 0)
    e0 = energy(mp01, 1, 1, spec)
    assert energy(perturb(mp01, 0.05, seed), 1, 1, spec) - e0 > 0
