"""Adaptive Gauss-Legendre quadrature with endpoint maps, and principal values.

``integrate`` splits ``[a, b]`` at the midpoint and, on each half, substitutes
``x = a + h u**s`` (or ``x = b - h u**s``). The power ``s`` is picked from the
declared endpoint exponent so that an integrand behaving like ``(x - a)**g``
becomes smooth in ``u``. Panels are bisected until the 20-point rule on a
panel agrees with the sum over its two halves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "QuadResult",
    "QuadratureError",
    "integrate",
    "pv_integrate",
    "density_moment",
    "gauss_legendre",
    "graded_rule",
]

ORDER = 20


class QuadratureError(ArithmeticError):
    """Requested tolerance not met within the evaluation budget."""


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    error_estimate: float
    evaluations: int

    def __float__(self):
        return float(np.real(self.value))


@lru_cache(maxsize=16)
def gauss_legendre(n: int = ORDER):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def map_power(gamma: float) -> float:
    """Substitution power ``s`` for an endpoint factor ``t**gamma``."""
    if gamma <= -1:
        raise ValueError(f"endpoint exponent {gamma} is not integrable")
    if gamma < 0:
        return 1.0 / (1.0 + gamma)
    frac = Fraction(gamma).limit_denominator(12)
    if abs(float(frac) - gamma) > 1e-12:
        return 1.0
    return float(frac.denominator)


def _jacobian(t, h, s):
    """``dx/du`` for ``x - a = h u**s`` expressed through the offset ``t``."""
    if s == 1.0:
        return np.full_like(t, h)
    return s * h * (t / h) ** ((s - 1.0) / s)


def _panel_rule(lo, hi, n=ORDER):
    x, w = gauss_legendre(n)
    lo = np.asarray(lo)[:, None]
    hi = np.asarray(hi)[:, None]
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def _adaptive_unit(g, tol, max_evals, initial_panels=4):
    """Integrate ``g`` over [0, 1] by panel bisection. ``g`` takes an array."""
    edges = np.linspace(0.0, 1.0, initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    nodes, wts = _panel_rule(lo, hi)
    whole = np.sum(g(nodes) * wts, axis=1)
    evals = nodes.size
    total = 0.0
    err_total = 0.0
    while lo.size:
        mid = 0.5 * (lo + hi)
        l_nodes, l_w = _panel_rule(lo, mid)
        r_nodes, r_w = _panel_rule(mid, hi)
        vals = g(np.concatenate([l_nodes, r_nodes]))
        evals += vals.size
        left = np.sum(vals[: lo.size] * l_w, axis=1)
        right = np.sum(vals[lo.size:] * r_w, axis=1)
        err = np.abs(whole - (left + right))
        width = hi - lo
        ok = (err <= tol * width) | (width < 1e-13)
        total = total + np.sum(left[ok] + right[ok])
        err_total += float(np.sum(err[ok]))
        if evals > max_evals and not np.all(ok):
            raise QuadratureError(
                f"tolerance {tol:g} not reached after {evals} evaluations "
                f"({int(np.sum(~ok))} panels unresolved)")
        bad = ~ok
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        whole = np.concatenate([left[bad], right[bad]])
    return total, err_total, evals


def integrate(f, a, b, tol=1e-10, endpoint_exponents=(0.0, 0.0), max_evals=400_000):
    """Integrate ``f`` over ``[a, b]``.

    ``f`` must accept a numpy array of abscissae. ``endpoint_exponents``
    declares ``f ~ (x - a)**ga`` near ``a`` and ``f ~ (b - x)**gb`` near ``b``;
    both must exceed -1. Complex-valued ``f`` is allowed.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError("integrate needs a < b")
    ga, gb = endpoint_exponents
    sa, sb = map_power(ga), map_power(gb)
    h = 0.5 * (b - a)

    def left(u):
        x = a + h * u ** sa
        x = np.where(x <= a, np.nextafter(a, b), x)
        # Jacobian from the offset actually realised after rounding
        return f(x) * _jacobian(x - a, h, sa)

    def right(u):
        x = b - h * u ** sb
        x = np.where(x >= b, np.nextafter(b, a), x)
        return f(x) * _jacobian(b - x, h, sb)

    # tolerance is absolute; split it over the two halves
    v1, e1, n1 = _adaptive_unit(left, 0.5 * tol, max_evals)
    v2, e2, n2 = _adaptive_unit(right, 0.5 * tol, max_evals)
    return QuadResult(v1 + v2, e1 + e2, n1 + n2)


def pv_integrate(f, a, b, s, tol=1e-10, endpoint_exponents=(0.0, 0.0), max_evals=400_000):
    """Principal value of the integral of ``f(y) / (y - s)`` over ``[a, b]``.

    Uses singularity subtraction: the bounded quotient
    ``(f(y) - f(s)) / (y - s)`` is integrated over a symmetric panel pair
    around ``s`` plus the remainder, and ``f(s) log((b - s)/(s - a))`` is
    added back.
    """
    a, b, s = float(a), float(b), float(s)
    if not a < s < b:
        raise ValueError("pv_integrate needs a < s < b")
    fs = f(np.array([s]))[0]

    def quotient(y):
        return (f(y) - fs) / (y - s)

    ga, gb = endpoint_exponents
    h = min(s - a, b - s)
    pieces = []
    if s - h > a:
        pieces.append((a, s - h, (ga, 0.0)))
    pieces.append((s - h, s, (ga if s - h == a else 0.0, 0.0)))
    pieces.append((s, s + h, (0.0, gb if s + h == b else 0.0)))
    if s + h < b:
        pieces.append((s + h, b, (0.0, gb)))
    value, err, evals = 0.0, 0.0, 0
    for lo, hi, gam in pieces:
        res = integrate(quotient, lo, hi, tol / len(pieces), gam, max_evals)
        value = value + res.value
        err += res.error_estimate
        evals += res.evaluations
    value = value + fs * np.log((b - s) / (s - a))
    return QuadResult(value, err, evals + 1)


def density_moment(source, n: int, tol: float = 1e-9) -> float:
    """``n``-th moment of a density.

    ``source`` is anything exposing ``pdf(x)`` (vectorised), ``support`` and
    ``map_exponents``: a :class:`~raneylab.curve.CurveModel`, a Jacobi model,
    or a :class:`~raneylab.curve.DensityProfile`.
    """
    if n < 0:
        raise ValueError("moment order must be non-negative")
    a, b = source.support
    res = integrate(lambda x: x ** n * source.pdf(x), a, b, tol * max(1.0, b ** n),
                    source.map_exponents)
    return float(np.real(res.value))


def graded_rule(a, b, singular=(), levels=14, ratio=0.15, order=ORDER,
                endpoint_exponents=(0.0, 0.0), breakpoints=(), base_panels=1):
    """Composite Gauss-Legendre nodes on ``[a, b]`` refined geometrically.

    ``singular`` lists points (endpoints or interior) where the integrand has
    a log or power singularity; panels shrink by ``ratio`` towards each of
    them over ``levels`` steps. The two panels touching ``a`` and ``b`` are
    power-mapped according to ``endpoint_exponents``. ``breakpoints`` are
    extra panel edges (kinks of the integrand) and ``base_panels`` sets an
    initial uniform subdivision. Returns ``(nodes, weights)``.
    """
    a, b = float(a), float(b)
    inside = [float(t) for t in (*singular, *breakpoints) if a <= t <= b]
    pts = sorted({a, b, *inside, *np.linspace(a, b, base_panels + 1)})
    brk = set(pts)
    for s in singular:
        s = float(s)
        floor = 1e-12 * abs(s)
        for lo, hi in zip(pts[:-1], pts[1:]):
            steps = [(hi - lo) * ratio ** k for k in range(1, levels + 1)]
            steps = [d for d in steps if d > floor]
            if s == lo:
                brk.update(s + d for d in steps)
            elif s == hi:
                brk.update(s - d for d in steps)
    edges = np.array(sorted(brk))
    edges = edges[np.concatenate([[True], np.diff(edges) > 0])]
    nodes, wts = _panel_rule(edges[:-1], edges[1:], order)
    t, tw = gauss_legendre(order)
    t = 0.5 * (t + 1.0)
    tw = 0.5 * tw
    for end, (lo, hi), gam in ((0, edges[:2], endpoint_exponents[0]),
                               (-1, edges[-2:], endpoint_exponents[1])):
        sp = map_power(gam)
        if sp == 1.0:
            continue
        h = hi - lo
        if end == 0:
            x = np.maximum(lo + h * t ** sp, np.nextafter(lo, hi))
            nodes[0] = x
            off = x - lo
        else:
            x = np.minimum(hi - h * t ** sp, np.nextafter(hi, lo))
            nodes[-1] = x
            off = hi - x
        wts[end] = tw * _jacobian(off, h, sp)
    return nodes.ravel(), wts.ravel()
