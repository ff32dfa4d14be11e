import numpy as np
import pytest

from raneylab._backend import hermitian_eigh
from raneylab.curve import CurveModel
from raneylab.rmt import (EmptyRunError, MCRun, compare_to_density, ginibre, ks_distance, model_cdf,
                          run_mc, sample_product)

from conftest import mp_pdf


def _mp_cdf(x):
    # closed form of the Marchenko-Pastur CDF on [0, 4]
    x = np.clip(np.asarray(x, dtype=float), 0.0, 4.0)
    # x = 4 sin^2(phi) turns rho dx into (4/pi) cos^2(phi) dphi
    return (2.0 * np.arcsin(0.5 * np.sqrt(x)) + 0.5 * np.sqrt(x * (4.0 - x))) / np.pi


def test_mp_cdf_oracle_is_consistent():
    from scipy.integrate import quad
    for x in (0.5, 1.0, 2.5, 3.9):
        assert _mp_cdf(x) == pytest.approx(quad(mp_pdf, 0, x, limit=200)[0], abs=1e-8)
    assert _mp_cdf(0.0) == pytest.approx(0.0, abs=1e-15) and _mp_cdf(4.0) == pytest.approx(1.0)


@pytest.fixture(scope="module")
def mp_run():
    return run_mc(100, 1, 50, 42)


@pytest.fixture(scope="module")
def mp_report(mp_run):
    return compare_to_density(mp_run)


def test_ginibre_variance():
    g = ginibre(400, np.random.default_rng(0))
    assert np.mean(np.abs(g) ** 2) == pytest.approx(1.0, abs=0.01)
    assert abs(np.mean(g)) < 0.01


def test_two_by_two_closed_form():
    rng = np.random.default_rng(11)
    g = ginibre(2, rng)
    w = g @ g.conj().T
    tr = np.trace(w).real
    det = np.linalg.det(w).real
    disc = np.sqrt(tr * tr - 4 * det)
    expected = np.array([(tr - disc) / 2, (tr + disc) / 2]) / 2.0
    assert np.allclose(sample_product(2, 1, 11), expected, rtol=0, atol=1e-12)


def test_values_sorted_nonnegative():
    v = sample_product(30, 3, 5)
    assert np.all(v >= 0) and np.all(np.diff(v) >= 0) and v.size == 30


def test_eigenvalues_of_gram_are_psd():
    rng = np.random.default_rng(3)
    for _ in range(5):
        g = ginibre(20, rng) @ ginibre(20, rng)
        w, _ = hermitian_eigh(g @ g.conj().T)
        assert np.min(w) >= -1e-10 * np.max(np.abs(w))


@pytest.mark.parametrize("N, M", [(1, 1), (0, 1), (5, 0), (5, -1)])
def test_bad_sizes(N, M):
    with pytest.raises(ValueError):
        sample_product(N, M, 0)
    with pytest.raises(ValueError):
        run_mc(N, M, 2, 0)


def test_determinism():
    a = run_mc(20, 2, 6, 123)
    b = run_mc(20, 2, 6, 123)
    c = run_mc(20, 2, 6, 123, workers=3)
    assert a.scaled_values.tobytes() == b.scaled_values.tobytes() == c.scaled_values.tobytes()
    assert run_mc(20, 2, 6, 124).scaled_values.tobytes() != a.scaled_values.tobytes()


def test_run_shape(mp_run):
    assert mp_run.scaled_values.size == 100 * 50
    assert mp_run.per_trial.shape == (50, 100)
    assert mp_run.L == pytest.approx(4.0)


def test_first_moment_mp(mp_run, mp_report):
    row = mp_report.moments[0]
    assert row.n == 1 and row.exact == 1
    assert abs(row.empirical - 1.0) <= 3 * row.stderr


def test_moments_mp(mp_report):
    for row in mp_report.moments:
        assert abs(row.empirical - float(row.exact)) <= 3 * row.stderr + 0.02 * float(row.exact)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_first_moment_three_sigma(M):
    run = run_mc(60, M, 20, 7 + M)
    means = run.per_trial.mean(axis=1)
    se = means.std(ddof=1) / np.sqrt(means.size)
    assert abs(means.mean() - 1.0) <= 3 * se


def test_second_moment_m2():
    run = run_mc(100, 2, 30, 99)
    means = (run.per_trial ** 2).mean(axis=1)
    se = means.std(ddof=1) / np.sqrt(means.size)
    assert abs(means.mean() - 3.0) <= 3 * se + 0.03


def test_ks_mp(mp_report):
    assert mp_report.ks < 0.02


def test_ks_against_closed_form(mp_run):
    assert ks_distance(mp_run.scaled_values, _mp_cdf) < 0.02


def test_model_cdf_matches_closed_form():
    cdf = model_cdf(CurveModel.from_pr(2, 1))
    x = np.linspace(0, 4, 41)
    assert np.max(np.abs(cdf(x) - _mp_cdf(x))) < 1e-7
    assert cdf(np.array([-1.0]))[0] == 0.0 and cdf(np.array([5.0]))[0] == 1.0


def test_ks_distance_detects_shift(mp_run):
    assert ks_distance(mp_run.scaled_values * 1.2, _mp_cdf) > 0.05


def test_histogram(mp_report):
    assert mp_report.bin_edges[0] == 0.0
    assert mp_report.bin_edges[-1] == pytest.approx(4.0)
    assert mp_report.counts.sum() + mp_report.overflow == 5000
    width = np.diff(mp_report.bin_edges)
    assert np.sum(mp_report.density_est * width) == pytest.approx(mp_report.counts.sum() / 5000)
    assert np.sum(mp_report.density_model * width) == pytest.approx(1.0, abs=1e-6)


def test_report_dict(mp_report):
    d = mp_report.to_dict()
    assert d["moments"][1]["exact"] == "2/1"
    assert d["n_values"] == 5000


def test_empty_run():
    run = run_mc(10, 1, 0, 1)
    assert run.scaled_values.size == 0
    with pytest.raises(EmptyRunError):
        compare_to_density(run)
    with pytest.raises(EmptyRunError):
        ks_distance(np.array([]), _mp_cdf)


def test_mcrun_validates():
    with pytest.raises(ValueError):
        MCRun(3, 1, 2, 0, np.ones(5))
    with pytest.raises(ValueError):
        MCRun(2, 1, 1, 0, np.array([-1.0, 1.0]))
