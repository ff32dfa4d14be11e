import numpy as np
import pytest

from raneylab.curve import CurveModel, DensityProfile, sample_density


def mp_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.clip(4.0 - x, 0, None) / x) / (2 * np.pi)


def arcsine_pdf(x):
    x = np.asarray(x, dtype=float)
    return 1.0 / (np.pi * np.sqrt(x * (1.0 - x)))


@pytest.fixture(scope="session")
def mp_profile():
    """Closed-form Marchenko-Pastur density on [0, 4]."""
    return DensityProfile.from_function(mp_pdf, 4.0, 200, (-0.5, 0.5), "mp")


@pytest.fixture(scope="session")
def arcsine_profile():
    return DensityProfile.from_function(arcsine_pdf, 1.0, 200, (-0.5, -0.5), "arcsine")


_CURVE_PROFILES = {}


@pytest.fixture(scope="session")
def curve_profile():
    """Cached 200-point curve profiles keyed by (p, r)."""

    def get(p, r, npoints=200):
        key = (str(p), str(r), npoints)
        if key not in _CURVE_PROFILES:
            _CURVE_PROFILES[key] = sample_density(CurveModel.from_pr(p, r), npoints)
        return _CURVE_PROFILES[key]

    return get
