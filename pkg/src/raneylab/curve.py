"""Physical branch of the resolvent's algebraic equation and Stieltjes inversion.

For ``(p, r)`` with ``w = z G(z)`` the resolvent satisfies
``w**(p/r) - z w**(1/r) + z = 0``. Writing ``p/r = A/d``, ``1/r = B/d`` and
``v = w**(1/d)`` gives the polynomial ``v**A - z v**B + z``. Its roots are
found as companion-matrix eigenvalues; the physical one is followed from
``z = 10 L`` (where it is the root nearest 1) along a path that never crosses
the support ``[0, L]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .params import RaneyParams, make_params

__all__ = [
    "ContinuationError",
    "CurveModel",
    "JacobiCurveModel",
    "DensityProfile",
    "physical_root",
    "density",
    "sample_density",
    "jacobi_density",
    "jacobi_lower_edge",
]

_SAFETY = 10.0
_MIN_STEP = 1e-12
_DELTA_FACTORS = (1.0, 0.5, 0.25)


class ContinuationError(ArithmeticError):
    """Root tracking could not separate the physical root from its neighbours."""

    def __init__(self, message, z=None):
        super().__init__(message if z is None else f"{message} (at z = {z!r})")
        self.z = z


def _roots(coeffs: np.ndarray) -> np.ndarray:
    """All roots of the polynomial (companion eigenvalues), one Newton step each."""
    nz = np.flatnonzero(coeffs)
    coeffs = coeffs[nz[0]:]
    n = len(coeffs) - 1
    comp = np.zeros((n, n), dtype=complex)
    comp[0, :] = -coeffs[1:] / coeffs[0]
    comp[np.arange(1, n), np.arange(n - 1)] = 1.0
    roots = np.linalg.eigvals(comp)
    val = np.full_like(roots, coeffs[0])
    der = np.zeros_like(roots)
    for a in coeffs[1:]:
        der = der * roots + val
        val = val * roots + a
    return roots - np.divide(val, der, out=np.zeros_like(val), where=der != 0)


class _PolynomialBranch:
    """Shared machinery: polynomial family in one unknown, tracked in ``z``."""

    L: float
    power: int = 1
    debug: bool = False

    def coeffs(self, z: complex) -> np.ndarray:
        raise NotImplementedError

    def reference_root(self, roots: np.ndarray) -> complex:
        return roots[np.argmin(np.abs(roots - 1.0))]

    def check_roots(self, z, roots):
        pass

    def _waypoints(self, targets):
        """Piecewise path from ``10 L`` to the first target; later targets are
        reached by straight moves from the previous one."""
        first = targets[0]
        sign = 1.0 if first.imag >= 0 else -1.0
        zref = complex(10.0 * self.L, 0.0)
        height = max(self.L, abs(first.imag))
        up = complex(zref.real, sign * height)
        over = complex(first.real, sign * height)
        return zref, [(zref, up, "linear"), (up, over, "linear"), (over, first, "descend")]

    def track(self, targets: Sequence[complex]) -> np.ndarray:
        """Physical root (in the polynomial's own unknown) at each target."""
        targets = [complex(t) for t in targets]
        if not targets:
            return np.array([], dtype=complex)
        for t in targets:
            if t == 0:
                raise ValueError("z = 0 is a branch point")
            if t.imag == 0 and 0 <= t.real < self.L:
                raise ValueError(
                    f"z = {t.real} lies on the support cut; give it a small imaginary part")
        # the branch point itself: stop just outside and snap to the double root
        edge = complex(self.L, 0.0)
        stops = [complex(self.L * (1 + 1e-9), 0.0) if t == edge else t for t in targets]
        zref, segments = self._waypoints(stops)
        v = self.reference_root(_roots(self.coeffs(zref)))
        for start, end, kind in segments:
            v = self._follow(v, start, end, kind)
        out = [v]
        for prev, nxt in zip(stops[:-1], stops[1:]):
            kind = "descend" if prev.real == nxt.real and prev.imag * nxt.imag > 0 else "linear"
            v = self._follow(v, prev, nxt, kind)
            out.append(v)
        for i, t in enumerate(targets):
            if t == edge:
                roots = _roots(self.coeffs(t))
                out[i] = roots[np.argmin(np.abs(roots - out[i]))]
        return np.array(out)

    def _path(self, start, end, kind):
        if kind == "descend" and start.real == end.real and end.imag != 0 and start.imag * end.imag > 0:
            h0, h1 = math.log(abs(start.imag)), math.log(abs(end.imag))
            sign = math.copysign(1.0, end.imag)
            return lambda s: complex(end.real, sign * math.exp(h0 + s * (h1 - h0)))
        return lambda s: start + s * (end - start)

    def _follow(self, v, start, end, kind):
        if start == end:
            return v
        path = self._path(start, end, kind)
        s, ds = 0.0, 1.0 / 16
        while s < 1.0:
            ds = min(ds, 1.0 - s)
            z = path(s + ds)
            roots = _roots(self.coeffs(z))
            dist = np.abs(roots - v)
            k = int(np.argmin(dist))
            motion = dist[k]
            others = np.delete(roots, k)
            sep = np.min(np.abs(others - roots[k])) if others.size else np.inf
            if _SAFETY * motion > sep:
                ds *= 0.5
                if ds < _MIN_STEP:
                    raise ContinuationError("root collision not resolved by step halving", z)
                continue
            if self.debug:
                self.check_roots(z, roots)
            v = roots[k]
            s += ds
            ds *= 1.5
        return v

    def resolvent_w(self, z) -> np.ndarray:
        """``z G(z)`` on the physical sheet for each ``z``."""
        return np.asarray(self.track(np.atleast_1d(z))) ** self.power

    def _stieltjes(self, x: float) -> float:
        return _stieltjes_cached(self, x)

    def _stieltjes_uncached(self, x: float) -> float:
        if x <= 0 or x >= self.L:
            return 0.0
        base = min(1e-6 * self.L, 1e-5 * min(x, self.L - x))
        deltas = [base * f for f in _DELTA_FACTORS]
        w = self.resolvent_w([complex(x, d) for d in deltas])
        z = np.array([complex(x, d) for d in deltas])
        vals = -np.imag(w / z) / math.pi
        # quadratic Richardson extrapolation to delta = 0
        return float(np.polyval(np.polyfit(deltas, vals, 2), 0.0))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.array([self._stieltjes(float(t)) for t in x.ravel()])
        return out.reshape(x.shape) if x.ndim else float(out[0])

    @property
    def support(self):
        return (0.0, self.L)


@lru_cache(maxsize=200_000)
def _stieltjes_cached(model, x):
    return model._stieltjes_uncached(x)


@dataclass(frozen=True)
class CurveModel(_PolynomialBranch):
    """``v**A - z v**B + z = 0`` with ``w = v**d``."""

    params: RaneyParams
    A: int
    B: int
    d: int
    debug: bool = field(default=False, compare=False)

    @classmethod
    def from_params(cls, params: RaneyParams, debug: bool = False) -> "CurveModel":
        a = params.p / params.r
        b = 1 / params.r
        d = math.lcm(a.denominator, b.denominator)
        return cls(params, int(a * d), int(b * d), d, debug)

    @classmethod
    def from_pr(cls, p, r, debug: bool = False) -> "CurveModel":
        return cls.from_params(make_params(p, r), debug)

    def __post_init__(self):
        if not self.A > self.B >= 1:
            raise ValueError(f"bad exponents A={self.A}, B={self.B}")

    @property
    def L(self) -> float:
        return self.params.L

    @property
    def power(self) -> int:
        return self.d

    @property
    def map_exponents(self):
        # near 0 the density is a series in x**(1/A) times 1/x; square-root edge at L
        return (1.0 / self.A - 1.0, 0.5)

    def coeffs(self, z):
        c = np.zeros(self.A + 1, dtype=complex)
        c[0] = 1.0
        c[self.A - self.B] -= z
        c[self.A] += z
        return c

    def check_roots(self, z, roots):
        resid = np.abs(np.polyval(self.coeffs(z), roots))
        if np.any(resid > 1e-10 * (1.0 + abs(z)) * np.maximum(1.0, np.abs(roots)) ** self.A):
            raise ContinuationError(f"root residual {resid.max():.3g} too large", z)
        if self.A - self.B >= 2 and abs(np.sum(roots)) > 1e-8 * max(1.0, np.max(np.abs(roots))):
            raise ContinuationError("root sum violates Vieta's relation", z)


@dataclass(frozen=True)
class JacobiCurveModel(_PolynomialBranch):
    """``z (w - 1)(w + 1/theta)**theta - w**(theta + 1) = 0``, support in [0, 1]."""

    theta: int
    debug: bool = field(default=False, compare=False)

    def __post_init__(self):
        if int(self.theta) != self.theta or self.theta < 1:
            raise ValueError("the Jacobi curve needs a positive integer theta")

    @property
    def L(self) -> float:
        return 1.0

    @property
    def map_exponents(self):
        return (1.0 / (self.theta + 1) - 1.0, -0.5)

    def _base(self):
        base = np.array([1.0, -1.0])
        for _ in range(self.theta):
            base = np.polymul(base, [1.0, 1.0 / self.theta])
        return base

    def coeffs(self, z):
        c = z * self._base().astype(complex)
        c[0] -= 1.0
        return c

    def check_roots(self, z, roots):
        resid = np.abs(np.polyval(self.coeffs(z), roots))
        scale = (1.0 + abs(z)) * np.maximum(1.0, np.abs(roots)) ** (self.theta + 1)
        if np.any(resid > 1e-10 * scale):
            raise ContinuationError(f"root residual {resid.max():.3g} too large", z)


def physical_root(model: _PolynomialBranch, z: complex) -> complex:
    """``w = z G(z)`` on the branch with ``w -> 1`` as ``z -> infinity``."""
    return complex(model.resolvent_w([complex(z)])[0])


def density(model: _PolynomialBranch, x: float) -> float:
    """Density at ``x`` from ``-Im G(x + i0) / pi``; zero off the support."""
    if x <= 0:
        raise ValueError("density needs x > 0")
    return model._stieltjes(float(x))


def jacobi_density(model: JacobiCurveModel, x: float) -> float:
    if not 0 < x < 1:
        raise ValueError("jacobi_density needs 0 < x < 1")
    return model._stieltjes(float(x))


def jacobi_lower_edge(model: JacobiCurveModel, npoints: int = 64, tol: float = 1e-9) -> float:
    """Smallest scanned ``x`` in (0, 1) where the density is non-zero.

    The scan is logarithmic towards 0, so a return value equal to the first
    scan point means the support reaches the origin.
    """
    xs = np.logspace(-8, math.log10(0.999), npoints)
    for x in xs:
        if jacobi_density(model, x) > tol:
            return 0.0 if x == xs[0] else float(x)
    return 1.0


def _cosine_grid(npoints: int, power: int = 2) -> np.ndarray:
    i = np.arange(npoints)
    t = 0.5 * (1.0 - np.cos(np.pi * (i + 0.5) / npoints))
    return t ** power


def _estimate_exponent(x: np.ndarray, y: np.ndarray, min_points: int = 8) -> float:
    """Log-log slope over the smallest decade holding ``min_points`` samples."""
    mask = y > 0
    x, y = x[mask], y[mask]
    for s in range(len(x)):
        window = (x >= x[s]) & (x <= 10.0 * x[s])
        if np.count_nonzero(window) >= min_points:
            slope, _ = np.polyfit(np.log(x[window]), np.log(y[window]), 1)
            return float(slope)
    return float("nan")


@dataclass(frozen=True)
class DensityProfile:
    """A density sampled on ``grid`` inside ``(lower, L)``.

    Evaluation between samples interpolates ``rho / (x**ga (L-x)**gb)`` with a
    monotone cubic in ``tau = (x/L)**(1 + ga)``, which is smooth for the
    densities produced by the curve models.
    """

    label: str
    grid: np.ndarray
    values: np.ndarray
    L: float
    endpoint_exponent_at_zero: float
    map_exponents: tuple = (0.0, 0.0)
    lower: float = 0.0
    perturbation: Optional[Callable[[np.ndarray], np.ndarray]] = None
    breakpoints: tuple = ()
    _interp: Optional[PchipInterpolator] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if np.any(self.values < 0):
            raise ValueError("density values must be non-negative")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self._interp is None:
            base = self.values if self.perturbation is None else self.values - self.perturbation(self.grid)
            g = base / self._envelope(self.grid)
            object.__setattr__(self, "_interp", PchipInterpolator(self._tau(self.grid), g, extrapolate=True))

    def _tau(self, x):
        ga = self.map_exponents[0]
        u = np.clip(x / self.L, 0.0, 1.0)
        return u ** (1.0 + ga) if ga < 0 else u

    def _envelope(self, x):
        ga, gb = self.map_exponents
        return np.maximum(x, 1e-300) ** ga * np.maximum(self.L - x, 1e-300) ** gb

    @property
    def support(self):
        return (self.lower, self.L)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > self.lower) & (x < self.L)
        out = np.zeros_like(x)
        xi = x[inside]
        vals = self._interp(self._tau(xi)) * self._envelope(xi)
        if self.perturbation is not None:
            vals = vals + self.perturbation(xi)
        out[inside] = vals
        return out

    __call__ = pdf

    def mass(self, tol: float = 1e-12) -> float:
        from .quad import density_moment
        return density_moment(self, 0, tol)

    def moment(self, n: int, tol: float = 1e-10) -> float:
        from .quad import density_moment
        return density_moment(self, n, tol)

    def scaled(self) -> "DensityProfile":
        """Same density carried to ``[0, 1]`` as a probability density."""
        L = self.L
        pert = None
        if self.perturbation is not None:
            f = self.perturbation
            pert = lambda y: L * f(L * np.asarray(y))  # noqa: E731
        return DensityProfile(self.label, self.grid / L, self.values * L, 1.0,
                              self.endpoint_exponent_at_zero, self.map_exponents,
                              self.lower / L, pert, tuple(b / L for b in self.breakpoints))

    def with_perturbation(self, eta: Callable[[np.ndarray], np.ndarray],
                          breakpoints=()) -> "DensityProfile":
        """Add ``eta`` exactly; ``breakpoints`` are points where it is not smooth."""
        prev = self.perturbation
        total = eta if prev is None else (lambda x: prev(x) + eta(x))
        kinks = tuple(sorted({*self.breakpoints, *(float(b) for b in breakpoints)}))
        return replace(self, values=self.values + eta(self.grid), perturbation=total,
                       breakpoints=kinks, _interp=self._interp)

    @classmethod
    def from_function(cls, f, L, npoints=200, map_exponents=(0.0, 0.0), label="", lower=0.0):
        grid = lower + (L - lower) * _cosine_grid(npoints)
        values = np.asarray(f(grid), dtype=float)
        return cls(label, grid, values, float(L), _estimate_exponent(grid, values),
                   tuple(map_exponents), lower)


def sample_density(model: _PolynomialBranch, npoints: int = 200) -> DensityProfile:
    """Density on a grid clustered towards both ends of the support."""
    if npoints < 16:
        raise ValueError("sample_density needs at least 16 points")
    lower = 0.0
    L = model.L
    grid = lower + (L - lower) * _cosine_grid(npoints)
    values = np.array([model._stieltjes(float(x)) for x in grid])
    values = np.maximum(values, 0.0)
    label = str(getattr(model, "params", f"jacobi theta={getattr(model, 'theta', '?')}"))
    return DensityProfile(label, grid, values, L, _estimate_exponent(grid, values),
                          tuple(model.map_exponents), lower)
