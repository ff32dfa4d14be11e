"""Energy functionals and their differentiated Euler-Lagrange equations.

Densities come in as :class:`~raneylab.curve.DensityProfile` objects carried
to ``[0, 1]`` (``profile.scaled()``), i.e. probability densities. Residuals
are reported in the normalisation where the density on ``[0, 1]`` is
``rho_natural(L y)``, which has mass ``1/L``; this is the form in which the
right-hand side reads ``(1/L) sum_l s_l c_l (L y)^{s_l}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .curve import DensityProfile
from .params import family_edge
from .quad import graded_rule, pv_integrate
from .wienerhopf import PotentialSpec, potential_coefficients

__all__ = [
    "PairKernel",
    "ResidualReport",
    "equilibrium_residual",
    "jacobi_residual",
    "residual_report",
    "energy",
    "perturb",
]

@dataclass(frozen=True)
class PairKernel:
    """``k(y, y') = log|y - y'| + Re sum_p w^p Log(y^(1/theta) - w^p y'^(1/theta))``."""

    theta: float
    q: int = 1

    def __call__(self, y, yp):
        y = np.asarray(y, dtype=float)
        yp = np.asarray(yp, dtype=float)
        return np.real(self.complex_sum(y, yp)) + np.log(np.abs(y - yp))

    def complex_sum(self, y, yp):
        """``sum_p w^p log|...|`` with conjugate terms paired, so the sum is real.

        The ``p = 0`` factor enters through its modulus; terms ``p`` and
        ``q - p`` are complex conjugates and are added as such.
        """
        a = np.asarray(y, dtype=float) ** (1.0 / self.theta)
        b = np.asarray(yp, dtype=float) ** (1.0 / self.theta)
        total = np.log(np.abs(a - b)).astype(complex)
        for p in range(1, self.q // 2 + 1):
            w = np.exp(2j * np.pi * p / self.q)
            term = w * np.log(a - w * b + 0j)
            if 2 * p == self.q:
                total += term.real
            else:
                total += 2.0 * term.real
        return total

    def symmetric(self, y, yp):
        """``(k(y, y') + k(y', y)) / 2``; the only part an energy integral sees."""
        return 0.5 * (self(y, yp) + self(yp, y))

    def offset(self, L: float) -> float:
        """``k(L y, L y') - k(y, y')``."""
        return math.log(L) * (1.0 + (1.0 / self.theta if self.q == 1 else 0.0))


@dataclass(frozen=True)
class ResidualReport:
    y_points: tuple
    residuals: tuple
    tolerance: float

    @property
    def max_abs(self) -> float:
        return max(abs(r) for r in self.residuals)

    @property
    def passed(self) -> bool:
        return self.max_abs <= self.tolerance


def _check_y(y):
    if not 0.0 < y < 1.0:
        raise ValueError(f"y = {y} must lie in (0, 1)")


def _kernel_pv_sum(profile: DensityProfile, theta: float, q: int, y: float, tol: float) -> float:
    """``PV int rho(y')/(1 - y'/y) + (q/theta) PV int (y'/y)^((q-1)/theta) rho(y')/(1 - (y'/y)^(q/theta))``.

    Both terms are written as ``N(y')/(y' - y)``; the second quotient's
    removable singularity at ``y' = y`` takes its limit ``-y rho(y)``.
    """
    k = q / float(theta)
    rho = profile.pdf

    def numerator(yp):
        yp = np.asarray(yp, dtype=float)
        r = rho(yp)
        ratio = np.empty_like(yp)
        near = np.abs(yp - y) < 1e-12 * y
        far = ~near
        ypf = yp[far]
        ratio[far] = (ypf - y) / -np.expm1(k * np.log(ypf / y))
        ratio[near] = -y / k
        second = r * k * (yp / y) ** ((q - 1) / float(theta)) * ratio
        return -y * r + second

    res = pv_integrate(numerator, 0.0, 1.0, y, tol, profile.map_exponents)
    return float(np.real(res.value))


def equilibrium_residual(profile: DensityProfile, theta, q: int, spec: Optional[PotentialSpec],
                         y: float, tol: float = 1e-9) -> float:
    """LHS - RHS of the differentiated equilibrium condition at ``y``.

    ``profile`` is a probability density on ``[0, 1]``. ``spec`` defaults to
    the ``m = 0`` potential ``theta y^(1/theta)``.
    """
    _check_y(y)
    theta = float(theta)
    if spec is None:
        spec = potential_coefficients(theta, q, 0)
    L = family_edge(theta, q)
    lhs = _kernel_pv_sum(profile, theta, q, y, tol)
    rhs = float(spec.y_dpotential(L * y))
    return (lhs - rhs) / L


def jacobi_residual(profile: DensityProfile, theta, q: int, y: float, tol: float = 1e-9) -> float:
    """Field-free residual for the binomial-moment family on ``[0, 1]``."""
    _check_y(y)
    return _kernel_pv_sum(profile, float(theta), q, y, tol) / y


def residual_report(profile, theta, q, spec, y_points: Sequence[float], tolerance=1e-3,
                    jacobi=False) -> ResidualReport:
    if jacobi:
        vals = [jacobi_residual(profile, theta, q, y) for y in y_points]
    else:
        vals = [equilibrium_residual(profile, theta, q, spec, y) for y in y_points]
    return ResidualReport(tuple(y_points), tuple(vals), tolerance)


def energy(profile: DensityProfile, theta, q: int = 1, spec: Optional[PotentialSpec] = None,
           levels: int = 12, base_panels: int = 16) -> float:
    """Energy ``int V rho - (1/2) int int rho rho' k`` on the natural scale.

    ``profile`` is the probability density on ``[0, 1]``; it is mapped back
    by ``y -> L y`` with ``L`` the family edge. ``spec=None`` means no
    external field and ``L = 1`` (the binomial-moment functional).
    """
    theta = float(theta)
    kern = PairKernel(theta, q)
    L = spec.L if spec is not None else 1.0
    opts = dict(levels=levels, endpoint_exponents=profile.map_exponents,
                breakpoints=profile.breakpoints, base_panels=base_panels)
    yo, wo = graded_rule(0.0, 1.0, (0.0, 1.0), **opts)
    rho_o = profile.pdf(yo)
    potential = 0.0
    if spec is not None:
        potential = float(np.sum(wo * rho_o * spec.potential(L * yo)))
    inner = np.empty_like(yo)
    for i, y in enumerate(yo):
        yi, wi = graded_rule(0.0, 1.0, (0.0, y, 1.0), **opts)
        with np.errstate(divide="ignore"):
            kv = kern.symmetric(y, yi)
        # nodes coinciding with y (after y -> y^(1/theta)) carry no mass
        kv[~np.isfinite(kv)] = 0.0
        inner[i] = np.sum(wi * profile.pdf(yi) * kv)
    interaction = float(np.sum(wo * rho_o * inner))
    mass = float(np.sum(wo * rho_o))
    return potential - 0.5 * (interaction + kern.offset(L) * mass * mass)


def _bump(center, width):
    def f(x):
        x = np.asarray(x, dtype=float)
        u = (x - center) / width
        return np.where(np.abs(u) < 1.0, np.cos(0.5 * np.pi * u) ** 2, 0.0)
    return f


def perturb(profile: DensityProfile, amplitude: float, seed: int) -> DensityProfile:
    """Add a zero-mass pair of cos^2 bumps, staying inside the support and >= 0.

    The positive bump has height ``amplitude * rho(c1)``; the negative one
    carries the same mass. The pair is shrunk if needed to keep the density
    non-negative.
    """
    if amplitude == 0:
        return profile
    rng = np.random.default_rng(seed)
    lo, hi = profile.support
    span = hi - lo
    w1, w2 = rng.uniform(0.05, 0.12, size=2) * span
    c1 = rng.uniform(lo + 0.1 * span + w1, hi - 0.1 * span - w1)
    c2 = rng.uniform(lo + 0.1 * span + w2, hi - 0.1 * span - w2)
    h1 = amplitude * float(profile.pdf(np.array([c1]))[0])
    h2 = h1 * w1 / w2
    b1, b2 = _bump(c1, w1), _bump(c2, w2)
    xs = np.linspace(c2 - w2, c2 + w2, 401)[1:-1]
    room = np.min(profile.pdf(xs) + h1 * b1(xs)) / h2 if h2 > 0 else np.inf
    scale = min(1.0, 0.9 * room / max(np.max(b2(xs)), 1e-300))
    h1, h2 = h1 * scale, h2 * scale

    def eta(x):
        return h1 * b1(x) - h2 * b2(x)

    kinks = (c1 - w1, c1 + w1, c2 - w2, c2 + w2)
    return profile.with_perturbation(eta, kinks)
