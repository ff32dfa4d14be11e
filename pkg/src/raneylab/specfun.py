"""Complex log-gamma and gamma.

Lanczos approximation (g = 7, nine terms) on ``Re z >= 1/2`` and the
reflection formula elsewhere. The result is the analytic continuation of
``log Gamma`` with its branch cut on the negative real axis, the same
convention as ``mpmath.loggamma`` and ``scipy.special.loggamma``.
"""

from __future__ import annotations

import numpy as np

__all__ = ["PoleError", "GammaOverflowError", "log_gamma", "gamma"]

_G = 7.0
_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)
_LOG_PI = np.log(np.pi)
_LOG_2 = np.log(2.0)
_EXP_LIMIT = 700.0


class PoleError(ArithmeticError):
    """Argument hits a pole of the gamma function."""


class GammaOverflowError(OverflowError):
    pass


def _lanczos(z):
    # valid for Re z >= 1/2
    zz = z - 1.0
    x = np.full_like(zz, _COEF[0])
    for i in range(1, len(_COEF)):
        x = x + _COEF[i] / (zz + i)
    t = zz + _G + 0.5
    return _HALF_LOG_2PI + (zz + 0.5) * np.log(t) - t + np.log(x)


def _is_pole(z):
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def log_gamma(z):
    """Principal-branch ``log Gamma(z)`` for complex scalar or array ``z``.

    Raises :class:`PoleError` at non-positive integers.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(_is_pole(z)):
        raise PoleError(f"log_gamma pole at {z[_is_pole(z)][0]}")
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _lanczos(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        lower = zl.imag < 0
        # work in the closed upper half plane and conjugate back
        w = np.where(lower, zl.conj(), zl)
        # log sin(pi w), continuous in Im w >= 0 and zero at w = 1/2
        log_sin = -_LOG_2 + 0.5j * np.pi - 1j * np.pi * w + np.log(1.0 - np.exp(2j * np.pi * w))
        val = _LOG_PI - log_sin - _lanczos(1.0 - w)
        out[left] = np.where(lower, val.conj(), val)
    return out[0] if scalar else out


def gamma(z):
    """``Gamma(z) = exp(log_gamma(z))``; raises on poles and on overflow."""
    lg = log_gamma(z)
    if np.any(np.real(lg) > _EXP_LIMIT):
        raise GammaOverflowError("gamma overflows double precision")
    return np.exp(lg)
