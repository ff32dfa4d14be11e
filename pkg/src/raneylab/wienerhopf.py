"""Wiener-Hopf kernel, its gamma-function factors, and the moment formulas.

For the kernel of the ``q``-generalised integral equation in exponential
variables,

    K(z) = -pi i sinh(pi(z(1 + b) - i(q-1)/q)) / (sinh(pi z) sinh(pi(z b - i(q-1)/q))),

with ``b = theta/q``, the factors are

    K+(z) = Gamma(1 - iz) Gamma(1/q - i z b) / Gamma(1/q - i z (1 + b)) e^{icz}
    1/K-(z) = Gamma(iz) Gamma(i z b + 1 - 1/q) / Gamma(i z (1 + b) + 1 - 1/q) e^{-icz}

and ``c = -((1 + b) log(1 + b) - b log b) = -log L``. All gamma products are
formed as sums of log-gammas followed by a single exponential.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .params import family_edge
from .quad import integrate, pv_integrate
from .specfun import PoleError, log_gamma

__all__ = [
    "WHFactorization",
    "PotentialSpec",
    "PotentialPoleWarning",
    "KernelPoleError",
    "kernel_K",
    "factor_plus",
    "factor_minus",
    "fourier_kernel_check",
    "asymptotic_check",
    "residue_A",
    "moment_wh",
    "potential_coefficients",
    "Q_function",
    "Q_partial_fractions",
    "raney_moment_general",
    "jacobi_moment_wh",
    "strip_bounds",
    "coefficients_from_alpha",
]


class KernelPoleError(ArithmeticError):
    pass


class PotentialPoleWarning(UserWarning):
    """A potential coefficient sits on a gamma pole or outside the stated range of m."""


@dataclass(frozen=True)
class WHFactorization:
    theta: float
    q: int = 1

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError("theta must be positive")
        if int(self.q) != self.q or self.q < 1:
            raise ValueError("q must be a positive integer")

    @property
    def b(self) -> float:
        return float(self.theta) / self.q

    @property
    def c(self) -> float:
        b = self.b
        return -((1.0 + b) * math.log1p(b) - b * math.log(b))

    @property
    def L(self) -> float:
        return family_edge(self.theta, self.q)


def kernel_K(wh: WHFactorization, z: complex) -> complex:
    """Closed-form Fourier kernel; raises at its poles."""
    z = complex(z)
    b, q = wh.b, wh.q
    shift = 1j * (q - 1) / q
    for w in (z, z * b - shift):
        # sinh(pi w) vanishes on the lattice w = i k
        if abs(w.real) < 1e-12 and abs(w.imag - round(w.imag)) < 1e-12 * max(1.0, abs(w.imag)):
            raise KernelPoleError(f"kernel pole at z = {z}")
    den = cmath.sinh(math.pi * z) * cmath.sinh(math.pi * (z * b - shift))
    return -math.pi * 1j * cmath.sinh(math.pi * (z * (1.0 + b) - shift)) / den


def _lg_sum(plus, minus):
    try:
        return complex(np.sum(log_gamma(np.array(plus))) - np.sum(log_gamma(np.array(minus))))
    except PoleError as exc:
        raise KernelPoleError(str(exc)) from exc


def log_factor_plus(wh: WHFactorization, z: complex) -> complex:
    z = complex(z)
    b, q = wh.b, wh.q
    return _lg_sum([1 - 1j * z, 1 / q - 1j * z * b], [1 / q - 1j * z * (1 + b)]) + 1j * wh.c * z


def log_factor_minus(wh: WHFactorization, z: complex) -> complex:
    z = complex(z)
    b, q = wh.b, wh.q
    s = 1 - 1 / q
    inv = _lg_sum([1j * z, 1j * z * b + s], [1j * z * (1 + b) + s]) - 1j * wh.c * z
    return -inv


def factor_plus(wh: WHFactorization, z: complex) -> complex:
    """``K+(z)``, analytic for ``Im z > -min(1, 1/b)/1``-type strip and above."""
    return cmath.exp(log_factor_plus(wh, z))


def factor_minus(wh: WHFactorization, z: complex) -> complex:
    """``K-(z)``, analytic in ``Im z < 0``."""
    return cmath.exp(log_factor_minus(wh, z))


def strip_bounds(wh: WHFactorization):
    """Open interval of ``Im z`` where the Fourier integrals converge."""
    return (-min(1.0, 1.0 / float(wh.theta)), 0.0)


def _fourier_integrand(wh, z):
    b, q = wh.b, wh.q

    def h(t):
        # t * kernel(t) * e^{itz}; the product is regular at t = 0
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape, dtype=complex)
        small = np.abs(t) < 1e-300
        ts = np.where(small, 1.0, t)
        first = ts / -np.expm1(ts)
        second = (q / float(wh.theta)) * np.exp((q - 1) * ts / float(wh.theta)) * ts / -np.expm1(q * ts / float(wh.theta))
        out[:] = (first + second) * np.exp(1j * ts * z)
        out[small] = -2.0
        return out

    return h


def fourier_kernel_check(wh: WHFactorization, z: complex, tol: float = 1e-10) -> float:
    """|numerical PV Fourier transform of the kernel - kernel_K(z)|.

    ``z`` must lie strictly inside the strip returned by :func:`strip_bounds`,
    where both tails of the integral decay exponentially.
    """
    z = complex(z)
    lo, hi = strip_bounds(wh)
    if not lo < z.imag < hi:
        raise ValueError(f"Im z = {z.imag} outside the convergence strip ({lo}, {hi})")
    th = float(wh.theta)
    q = wh.q
    h = _fourier_integrand(wh, z)
    kernel_t = lambda t: h(t) / t  # noqa: E731
    right_rate = min(1.0 + z.imag, 1.0 / th + z.imag)
    left_rate = -z.imag if q == 1 else min(-z.imag, (q - 1) / th - z.imag)
    t_right = 40.0 / right_rate
    t_left = 40.0 / left_rate
    core = pv_integrate(h, -1.0, 1.0, 0.0, tol).value
    right = _oscillatory(kernel_t, 1.0, t_right, tol)
    left = _oscillatory(kernel_t, -t_left, -1.0, tol)
    return abs(core + right + left - kernel_K(wh, z))


def _oscillatory(f, a, b, tol):
    edges = np.linspace(a, b, int(math.ceil((b - a) / 4.0)) + 1)
    return sum(integrate(f, lo, hi, tol / len(edges)).value for lo, hi in zip(edges[:-1], edges[1:]))


def asymptotic_check(wh: WHFactorization, ray_angle: float, radii: Sequence[float]):
    """Ratios of ``K-`` and ``K+`` to their large-``|z|`` forms along a ray.

    Stirling's formula gives ``K+(z) ~ sqrt(2 pi) (b/(1+b))**(1/q - 1/2) sqrt(-iz)``
    and ``K-(z) ~ (2 pi)**(-1/2) (b/(1+b))**(1/q - 1/2) sqrt(iz)``; for ``q = 1``
    these are ``z sqrt(-i/z)`` and ``z sqrt(i/z)`` forms with factor
    ``sqrt(theta/(1+theta))``. Returns a list of ``(ratio_minus, ratio_plus)``.
    """
    b, q = wh.b, wh.q
    amp = (b / (1.0 + b)) ** (1.0 / q - 0.5)
    out = []
    for rad in radii:
        z = rad * cmath.exp(1j * ray_angle)
        minus = factor_minus(wh, z) / (z * amp / math.sqrt(2 * math.pi) * cmath.sqrt(1j / z))
        plus = factor_plus(wh, z) / (z * amp * math.sqrt(2 * math.pi) * cmath.sqrt(-1j / z))
        out.append((minus, plus))
    return out


def residue_A(wh: WHFactorization) -> complex:
    """Residue fixing the single-pole solution; equals ``i/(L theta)``."""
    th = float(wh.theta)
    return -(wh.L ** (1.0 / th - 1.0) / 1j) * factor_minus(wh, -1j / th)


def moment_wh(wh: WHFactorization, n: int) -> float:
    """``L^{n+1} int_0^1 rho x^n`` from ``A / ((z + i/theta) K+(z))`` at ``z = i n``."""
    th = float(wh.theta)
    z = 1j * n
    A = residue_A(wh)
    log_val = (n + 1) * math.log(wh.L) - log_factor_plus(wh, z)
    return float(np.real(A / (z + 1j / th) * cmath.exp(log_val)))


@dataclass(frozen=True)
class PotentialSpec:
    """One-body potential ``V(y) = sum_l c_l y^{(1 + l q)/theta}``."""

    theta: float
    q: int
    m: int
    coefficients: tuple
    alphas: tuple
    exact_coefficients: Optional[tuple] = None

    @property
    def L(self) -> float:
        return family_edge(self.theta, self.q)

    def exponents(self):
        return tuple((1 + l * self.q) / float(self.theta) for l in range(self.m + 1))

    def potential(self, y):
        y = np.asarray(y, dtype=float)
        return sum(c * y ** e for c, e in zip(self.coefficients, self.exponents()))

    def y_dpotential(self, y):
        """``y V'(y)``."""
        y = np.asarray(y, dtype=float)
        return sum(c * e * y ** e for c, e in zip(self.coefficients, self.exponents()))


def _alpha(theta, q, m, l, L):
    s = (1 + q * l) / theta
    num = 1.0
    for u in range(m):
        num *= 1.0 - (theta + q) * s / (q * u + 1)
    den = 1.0
    for u in range(m + 1):
        if u != l:
            den *= 1.0 - theta * s / (q * u + 1)
    return num / den / L


def _gamma_shift_ratio(s, k: int):
    """``Gamma(s) / Gamma(s + k)`` for integer ``k`` as a finite product.

    For ``k < 0`` this is ``(s-1)(s-2)...(s+k)``, which is also the correct
    limit when ``Gamma(s + k)`` sits on a pole.
    """
    out = s * 0 + 1
    if k >= 0:
        for j in range(k):
            out /= s + j
    else:
        for j in range(1, -k + 1):
            out *= s - j
    return out


def potential_coefficients(theta, q: int = 1, m: int = 0) -> PotentialSpec:
    """Coefficients making ``V`` the potential for ``(theta/q + 1, m + 1/q)``.

    ``c_l = ((1+mq)/(1+lq)) ((-1)^(m-l)/(m-l)!) Gamma(s_l)/Gamma(1+l-m+s_l)``
    with ``s_l = (1+lq)/theta``. The gamma ratio has an integer shift, so it
    is a finite product; for rational ``theta`` the coefficients are exact
    (``exact_coefficients``). When the lower gamma sits on a pole the
    coefficient is its limit 0 and a :class:`PotentialPoleWarning` is issued.
    """
    exact = not isinstance(theta, float)
    th_exact = Fraction(theta) if exact else None
    theta = float(theta)
    if m < 0 or int(m) != m:
        raise ValueError("m must be a non-negative integer")
    if theta <= 0 or int(q) != q or q < 1:
        raise ValueError("need theta > 0 and integer q >= 1")
    if m > (theta - 1) / q + 1 + 1e-12:
        warnings.warn(f"m = {m} exceeds (theta - 1)/q + 1 = {(theta - 1) / q + 1:g}",
                      PotentialPoleWarning, stacklevel=2)
    L = family_edge(theta, q)
    coeffs, alphas, exact_c = [], [], []
    for l in range(m + 1):
        k = 1 + l - m
        pref = Fraction((1 + m * q) * (-1) ** (m - l), (1 + l * q) * math.factorial(m - l))
        s_f = (1 + l * q) / theta
        lower = k + s_f
        if lower <= 0 and abs(lower - round(lower)) < 1e-12:
            warnings.warn(f"c_{l}: Gamma({lower:g}) is a pole, coefficient set to its limit 0",
                          PotentialPoleWarning, stacklevel=2)
        if exact:
            c = pref * _gamma_shift_ratio(Fraction(1 + l * q) / th_exact, k)
            exact_c.append(c)
            coeffs.append(float(c))
        else:
            coeffs.append(float(pref) * _gamma_shift_ratio(s_f, k))
        alphas.append(_alpha(theta, q, m, l, L))
    return PotentialSpec(theta, q, m, tuple(coeffs), tuple(alphas),
                         tuple(exact_c) if exact else None)


def coefficients_from_alpha(spec: PotentialSpec) -> tuple:
    """Second route to ``c_l``: invert ``alpha_l = c_l L^{s_l - 1} K-(-i s_l)``."""
    wh = WHFactorization(spec.theta, spec.q)
    L = wh.L
    out = []
    for l, a in enumerate(spec.alphas):
        s = (1 + l * spec.q) / float(spec.theta)
        out.append(float(np.real(a * L ** (1.0 - s) / factor_minus(wh, -1j * s))))
    return tuple(out)


def Q_function(spec: PotentialSpec, z: complex) -> complex:
    th, q = float(spec.theta), spec.q
    num = 1.0 + 0j
    for u in range(spec.m):
        num *= 1 - 1j * (th + q) * z / (q * u + 1)
    den = 1.0 + 0j
    for u in range(spec.m + 1):
        den *= 1 - 1j * th * z / (q * u + 1)
    return num / den / spec.L


def Q_partial_fractions(spec: PotentialSpec, z: complex) -> complex:
    th, q = float(spec.theta), spec.q
    return sum(a / (1 - 1j * th * z / (1 + l * q)) for l, a in enumerate(spec.alphas))


def raney_moment_general(spec: PotentialSpec, n: int) -> float:
    """``L^{n+1} int_0^1 rho x^n = L^{n+1} Q(in) / K+(in)``."""
    wh = WHFactorization(spec.theta, spec.q)
    z = 1j * n
    val = Q_function(spec, z) * cmath.exp((n + 1) * math.log(wh.L) - log_factor_plus(wh, z))
    return float(np.real(val))


def jacobi_moment_wh(jp, n: int) -> float:
    """Moment ``1/K+(in)`` of the field-free (binomial) equilibrium density."""
    wh = WHFactorization(float(jp.theta), jp.q)
    return float(np.real(cmath.exp(-log_factor_plus(wh, 1j * n))))
